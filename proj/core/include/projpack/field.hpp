#pragma once

#include <string>

#include "projpack/errors.hpp"

namespace projpack {

enum class FieldTag { Real, Complex };

// Scalar field of a packing. m is the half real-dimension of the field
// (2m = dim_R F), the constant the bound formulas are written in.
struct Field {
  FieldTag tag = FieldTag::Complex;

  constexpr double m() const { return tag == FieldTag::Real ? 0.5 : 1.0; }
  constexpr bool is_real() const { return tag == FieldTag::Real; }

  static constexpr Field real() { return Field{FieldTag::Real}; }
  static constexpr Field complex() { return Field{FieldTag::Complex}; }

  // single-letter tag used by the packing format, catalog paths and the CLI
  char letter() const { return is_real() ? 'R' : 'C'; }
  std::string name() const { return is_real() ? "Real" : "Complex"; }

  static Field from_letter(char c) {
    if (c == 'R' || c == 'r') return real();
    if (c == 'C' || c == 'c') return complex();
    throw ValidationError(std::string("unknown field tag '") + c + "' (expected C or R)");
  }

  friend bool operator==(Field a, Field b) { return a.tag == b.tag; }
  friend bool operator!=(Field a, Field b) { return a.tag != b.tag; }
};

}  // namespace projpack
