// SPDX-License-Identifier: Apache-2.0

#include "stbc/sqrt2.hpp"

#include <cmath>
#include <sstream>

namespace stbc {

double Sqrt2Rational::to_double() const {
  return a_.get_d() + b_.get_d() * std::sqrt(2.0);
}

std::string Sqrt2Rational::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool have_a = a_ != 0;
  if (have_a) os << a_.get_str();
  if (b_ != 0) {
    if (b_ > 0 && have_a) os << "+";
    if (b_ == -1)
      os << "-";
    else if (b_ != 1)
      os << b_.get_str() << "*";
    os << "r2";
  }
  return os.str();
}

std::string Sqrt2Complex::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool have_re = !re_.is_zero();
  if (have_re) os << re_.str();
  if (!im_.is_zero()) {
    std::string s = im_.str();
    if (have_re && s[0] != '-') os << "+";
    if (s == "1")
      os << "j";
    else if (s == "-1")
      os << "-j";
    else
      os << "(" << s << ")*j";
  }
  return os.str();
}

}  // namespace stbc
