#pragma once

#include <string>
#include <string_view>

#include "projpack/frame.hpp"

namespace projpack::io {

// Plain-text packing format, version 1:
//   line 1          `# projpack v1`
//   line 2          `<C|R> <d> <n>`
//   n data lines    2d whitespace-separated decimals (re1 im1 ... red imd)
// LF endings, trailing newline required. Lines starting with '#' after the
// first are comments and may appear anywhere. Real-tagged files must have
// every imaginary entry equal to zero. Column norms are checked at the
// format-level tolerance 1e-8 (looser than the solver's internal 1e-12).
//
// parse_packing throws ParseError carrying the 1-based physical line number
// of the offending line; a short row count is reported against the last line
// of the file.
UnitFrame parse_packing(std::string_view bytes);

// Canonical serialization: magic line, header line, data rows with %.17g
// entries separated by single spaces, LF endings, trailing newline, no
// comments. Bit-exact for a given frame, and serialize(parse(serialize(f)))
// is byte-identical to serialize(f).
std::string serialize_packing(const UnitFrame& frame);

// File helpers; unreadable/unwritable paths raise IoError.
UnitFrame load_packing_file(const std::string& path);
void save_packing_file(const UnitFrame& frame, const std::string& path);

}  // namespace projpack::io
