#ifndef QOSC_TEXTIO_HPP
#define QOSC_TEXTIO_HPP

#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace qosc {

/// 17-significant-digit scientific notation with '.' decimal separator;
/// round-trips every double exactly.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

inline double parse_double(const std::string& s) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin) throw std::invalid_argument("parse_double: not a number: '" + s + "'");
  return v;
}

}  // namespace qosc

#endif  // QOSC_TEXTIO_HPP
