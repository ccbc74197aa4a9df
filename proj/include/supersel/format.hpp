#ifndef SUPERSEL_FORMAT_HPP
#define SUPERSEL_FORMAT_HPP

#include <charconv>
#include <complex>
#include <cstdint>
#include <string>

namespace supersel {

/// Shortest decimal form that round-trips the exact double. Locale-free, so
/// output bytes are identical across runs and hosts.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string format_complex(std::complex<double> v) {
  if (v.imag() == 0.0) return format_double(v.real());
  if (v.real() == 0.0) return format_double(v.imag()) + "i";
  std::string s = "(" + format_double(v.real());
  if (!(v.imag() < 0.0)) s += "+";
  s += format_double(v.imag()) + "i)";
  return s;
}

}  // namespace supersel

#endif
