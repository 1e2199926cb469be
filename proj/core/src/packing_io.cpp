#include "projpack/packing_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "projpack/errors.hpp"

namespace projpack::io {

namespace {

constexpr std::string_view kMagic = "# projpack v1";
constexpr double kFormatNormTol = 1e-8;

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

bool is_blank(std::string_view line) {
  for (const char c : line)
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  return true;
}

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

double parse_number(std::string_view tok, int lineno) {
  const std::string s(tok);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || s.empty())
    throw ParseError(lineno, "cannot parse number '" + s + "'");
  if (!std::isfinite(v)) throw ParseError(lineno, "non-finite value '" + s + "'");
  return v;
}

long parse_int(std::string_view tok, int lineno, const char* what) {
  const std::string s(tok);
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size() || s.empty())
    throw ParseError(lineno, std::string("cannot parse ") + what + " '" + s + "'");
  return v;
}

}  // namespace

UnitFrame parse_packing(std::string_view bytes) {
  // count physical lines up front so a short file can be reported against
  // its last line
  int total_lines = 0;
  for (const char c : bytes)
    if (c == '\n') ++total_lines;
  const bool terminated = !bytes.empty() && bytes.back() == '\n';
  if (!terminated) ++total_lines;

  if (bytes.empty()) throw ParseError(1, "empty file");
  if (!terminated)
    throw ParseError(total_lines, "missing trailing newline");

  std::size_t pos = 0;
  int lineno = 0;
  const auto next_line = [&](std::string_view& line) {
    if (pos >= bytes.size()) return false;
    const std::size_t nl = bytes.find('\n', pos);
    line = strip_cr(bytes.substr(pos, nl - pos));
    pos = nl + 1;
    ++lineno;
    return true;
  };

  std::string_view line;
  if (!next_line(line) || line != kMagic)
    throw ParseError(1, std::string("expected '") + std::string(kMagic) + "' on line 1");

  // header: first non-comment, non-blank line after the magic
  bool have_header = false;
  while (next_line(line)) {
    if (is_blank(line) || line.front() == '#') continue;
    have_header = true;
    break;
  }
  if (!have_header) throw ParseError(total_lines, "missing header line '<C|R> <d> <n>'");

  const int header_line = lineno;
  const auto header = split_tokens(line);
  if (header.size() != 3 || header[0].size() != 1)
    throw ParseError(header_line, "malformed header, expected '<C|R> <d> <n>'");
  Field field = Field::complex();
  try {
    field = Field::from_letter(header[0][0]);
  } catch (const ValidationError&) {
    throw ParseError(header_line,
                     "unknown field tag '" + std::string(header[0]) + "' (use C or R)");
  }
  const long d = parse_int(header[1], header_line, "dimension");
  const long n = parse_int(header[2], header_line, "vector count");
  if (d < 1) throw ParseError(header_line, "dimension must be >= 1");
  if (n < 1) throw ParseError(header_line, "vector count must be >= 1");

  Eigen::MatrixXcd x(d, n);
  long rows = 0;
  while (next_line(line)) {
    if (is_blank(line) || line.front() == '#') continue;
    if (rows == n)
      throw ParseError(lineno, "unexpected extra data row (header declared n = " +
                                   std::to_string(n) + ")");
    const auto toks = split_tokens(line);
    if (static_cast<long>(toks.size()) != 2 * d)
      throw ParseError(lineno, "expected " + std::to_string(2 * d) + " values, got " +
                                   std::to_string(toks.size()));
    for (long i = 0; i < d; ++i) {
      const double re = parse_number(toks[2 * i], lineno);
      const double im = parse_number(toks[2 * i + 1], lineno);
      if (field.is_real() && im != 0.0)
        throw ParseError(lineno,
                         "real-tagged file has a nonzero imaginary entry in coordinate " +
                             std::to_string(i + 1));
      x(i, rows) = std::complex<double>(re, im);
    }
    const double nrm = x.col(rows).norm();
    if (std::abs(nrm - 1.0) > kFormatNormTol)
      throw ParseError(lineno, "vector norm deviates from 1 by " +
                                   std::to_string(std::abs(nrm - 1.0)) +
                                   " (tolerance 1e-8)");
    ++rows;
  }
  if (rows != n)
    throw ParseError(total_lines, "expected " + std::to_string(n) + " data rows, found " +
                                      std::to_string(rows));
  return UnitFrame(field, std::move(x), kFormatNormTol);
}

std::string serialize_packing(const UnitFrame& frame) {
  const auto& x = frame.vectors();
  std::string out;
  out.reserve(32 + static_cast<std::size_t>(frame.n()) * frame.d() * 50);
  out += kMagic;
  out += '\n';
  out += frame.field().letter();
  out += ' ';
  out += std::to_string(frame.d());
  out += ' ';
  out += std::to_string(frame.n());
  out += '\n';
  char buf[64];
  for (int j = 0; j < frame.n(); ++j) {
    for (int i = 0; i < frame.d(); ++i) {
      if (i > 0) out += ' ';
      std::snprintf(buf, sizeof(buf), "%.17g", x(i, j).real());
      out += buf;
      out += ' ';
      std::snprintf(buf, sizeof(buf), "%.17g", x(i, j).imag());
      out += buf;
    }
    out += '\n';
  }
  return out;
}

UnitFrame load_packing_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open packing file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read packing file: " + path);
  return parse_packing(buf.str());
}

void save_packing_file(const UnitFrame& frame, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out << serialize_packing(frame);
  out.flush();
  if (!out) throw IoError("cannot write packing file: " + path);
}

}  // namespace projpack::io
