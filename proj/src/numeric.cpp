#include "mop/numeric.hpp"

#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <sstream>

namespace mop {

namespace {
unsigned digits10_for_bits(int bits) {
  return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}
}  // namespace

Real with_bits(const Real& x, int bits) { return Real(x, digits10_for_bits(bits)); }

void set_precision_bits(int bits) { Real::default_precision(digits10_for_bits(bits)); }

int precision_bits() {
  return static_cast<int>(std::floor((Real::default_precision() - 1) / 0.30102999566398120));
}

PrecisionGuard::PrecisionGuard(int bits) : saved_(static_cast<int>(Real::default_precision())) {
  set_precision_bits(bits);
}

PrecisionGuard::~PrecisionGuard() { Real::default_precision(static_cast<unsigned>(saved_)); }

Real parse_real(const std::string& text) { return Real(text); }

std::string to_string(const Real& x, int digits) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(digits - 1) << x;
  return os.str();
}

double to_double(const Real& x) { return x.convert_to<double>(); }

Real pi() { return boost::math::constants::pi<Real>(); }

Real epsilon_bits(int bits) { return ldexp(Real(1), -bits); }

Real pow10_neg(int e) { return pow(Real(10), -e); }

Real cbrt_real(const Real& x) {
  if (x == 0) return Real(0);
  Real r = cbrt(abs(x));
  return x < 0 ? Real(-r) : r;
}

}  // namespace mop
