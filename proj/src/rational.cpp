#include "tnnflow/rational.hpp"

#include <cmath>
#include <cstdio>

#include "tnnflow/error.hpp"

namespace tnnflow {

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw DomainError("cannot rationalize a non-finite value");
  Rational q(x);  // exact for binary64
  q.canonicalize();
  return q;
}

Rational rational_round(double x, int bits) {
  if (!std::isfinite(x)) throw DomainError("cannot rationalize a non-finite value");
  const double scale = std::ldexp(1.0, bits);
  mpz_class num(static_cast<long>(std::llround(x * scale)));
  mpz_class den(1);
  den <<= static_cast<mp_bitcnt_t>(bits);
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_fraction_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_str();
}

Rational parse_fraction(const std::string& s) {
  Rational q;
  if (q.set_str(s, 10) != 0 || q.get_den() == 0) {
    throw DomainError("malformed fraction: '" + s + "'");
  }
  q.canonicalize();
  return q;
}

std::string to_decimal_string(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace tnnflow
