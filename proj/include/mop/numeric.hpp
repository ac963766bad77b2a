#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <complex>
#include <string>

namespace mop {

using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

// Default precision for newly constructed Real values in the calling thread.
void set_precision_bits(int bits);
int precision_bits();

// Scoped override; restores the previous precision on exit.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(int bits);
  ~PrecisionGuard();
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  int saved_;
};

Real parse_real(const std::string& text);
// Fixed-format scientific string with `digits` significant digits.
std::string to_string(const Real& x, int digits = 40);
double to_double(const Real& x);
Real pi();
// 2^-bits, the unit roundoff at the given precision.
Real epsilon_bits(int bits);
// 10^-e.
Real pow10_neg(int e);

template <class T>
struct Complex {
  T re{};
  T im{};

  Complex() = default;
  Complex(const T& r) : re(r), im(0) {}  // NOLINT: implicit real embedding
  Complex(const T& r, const T& i) : re(r), im(i) {}

  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Complex& operator*=(const Complex& o) {
    T r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = r;
    return *this;
  }
  Complex& operator/=(const Complex& o) {
    T den = o.re * o.re + o.im * o.im;
    T r = (re * o.re + im * o.im) / den;
    im = (im * o.re - re * o.im) / den;
    re = r;
    return *this;
  }
  Complex operator-() const { return Complex(-re, -im); }
};

template <class T> Complex<T> operator+(Complex<T> a, const Complex<T>& b) { return a += b; }
template <class T> Complex<T> operator-(Complex<T> a, const Complex<T>& b) { return a -= b; }
template <class T> Complex<T> operator*(Complex<T> a, const Complex<T>& b) { return a *= b; }
template <class T> Complex<T> operator/(Complex<T> a, const Complex<T>& b) { return a /= b; }
template <class T> Complex<T> operator+(Complex<T> a, const T& b) { a.re += b; return a; }
template <class T> Complex<T> operator-(Complex<T> a, const T& b) { a.re -= b; return a; }
template <class T> Complex<T> operator-(const T& b, const Complex<T>& a) { return Complex<T>(b - a.re, -a.im); }
template <class T> Complex<T> operator+(const T& b, Complex<T> a) { a.re += b; return a; }
template <class T> Complex<T> operator*(Complex<T> a, const T& b) { a.re *= b; a.im *= b; return a; }
template <class T> Complex<T> operator*(const T& b, Complex<T> a) { a.re *= b; a.im *= b; return a; }
template <class T> Complex<T> operator/(Complex<T> a, const T& b) { a.re /= b; a.im /= b; return a; }
template <class T> Complex<T> operator/(const T& b, const Complex<T>& a) { return Complex<T>(b) / a; }

template <class T> T norm(const Complex<T>& z) { return z.re * z.re + z.im * z.im; }
template <class T> T abs(const Complex<T>& z) { using std::sqrt; return sqrt(norm(z)); }
template <class T> Complex<T> conj(const Complex<T>& z) { return Complex<T>(z.re, -z.im); }

// Principal square root, cut along the negative real axis; -x maps to +i*sqrt(x).
template <class T>
Complex<T> sqrt(const Complex<T>& z) {
  using std::sqrt;
  T r = abs(z);
  if (r == 0) return Complex<T>(T(0), T(0));
  if (z.re >= 0) {
    T s = sqrt((r + z.re) / 2);
    return Complex<T>(s, z.im / (2 * s));
  }
  T t = sqrt((r - z.re) / 2);
  T im = z.im < 0 ? T(-t) : t;
  return Complex<T>(z.im < 0 ? T(-z.im / (2 * t)) : T(z.im / (2 * t)), im);
}

template <class T>
Complex<T> ipow(Complex<T> z, int k) {
  Complex<T> out(T(1), T(0));
  while (k > 0) {
    if (k & 1) out *= z;
    z *= z;
    k >>= 1;
  }
  return out;
}

using Cx = Complex<Real>;

inline std::complex<double> to_std(const Cx& z) { return {to_double(z.re), to_double(z.im)}; }
inline Cx from_std(const std::complex<double>& z) { return Cx(Real(z.real()), Real(z.imag())); }

// Copy of x carried at the given binary precision (widened exactly or rounded).
Real with_bits(const Real& x, int bits);

// Real cube root, negative for negative input.
Real cbrt_real(const Real& x);

}  // namespace mop
