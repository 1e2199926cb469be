#pragma once

#include <cstdio>
#include <string>

namespace projpack::detail {

// %.<sig>g rendering; used for the 17-digit packing format and the 12-digit
// table emitters. snprintf %g round-trips doubles at 17 significant digits.
inline std::string fmt_sig(double x, int sig) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", sig, x);
  return buf;
}

}  // namespace projpack::detail
