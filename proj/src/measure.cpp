#include "symjac/measure.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "symjac/errors.hpp"
#include "symjac/quad.hpp"

namespace symjac {

namespace {

constexpr double kPi = std::numbers::pi;

// u^a (1-u)^b du over [u1, u2] given both u and 1-u at each end (to keep
// precision near theta = pi). Power substitutions remove the endpoint
// singularities: v = u^{a+1} below 1/2, w = (1-u)^{b+1} above.
double beta_density_integral(double a, double b, double u1, double c1, double u2, double c2) {
  double total = 0.0;
  if (u1 < 0.5) {
    const double top = std::min(u2, 0.5);
    const double e = 1.0 / (a + 1.0);
    const auto f = [=](double v) { return std::pow(1.0 - std::pow(v, e), b) * e; };
    total += integrate(f, std::pow(u1, a + 1.0), std::pow(top, a + 1.0), 0.0, 1e-13).value;
  }
  if (u2 > 0.5) {
    const double bottom_c = std::min(c1, 0.5);
    const double e = 1.0 / (b + 1.0);
    const auto f = [=](double w) { return std::pow(1.0 - std::pow(w, e), a) * e; };
    total += integrate(f, std::pow(c2, b + 1.0), std::pow(bottom_c, b + 1.0), 0.0, 1e-13).value;
  }
  return total;
}

// Exact rational used by the class predicates.
struct Rational {
  __int128 num = 0, den = 1;

  static __int128 gcd(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t < 0 ? -t : t;
    }
    return a == 0 ? 1 : a;
  }
  static Rational make(__int128 n, __int128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const __int128 g = gcd(n, d);
    return {n / g, d / g};
  }
  friend Rational operator+(Rational x, Rational y) { return make(x.num * y.den + y.num * x.den, x.den * y.den); }
  friend Rational operator-(Rational x, Rational y) { return make(x.num * y.den - y.num * x.den, x.den * y.den); }
  friend Rational operator*(Rational x, Rational y) { return make(x.num * y.num, x.den * y.den); }
  friend bool operator<(Rational x, Rational y) { return x.num * y.den < y.num * x.den; }
  friend bool operator<=(Rational x, Rational y) { return x.num * y.den <= y.num * x.den; }
};

// Recognize x as p/q with q <= 10^6 (continued fractions), within rounding.
std::optional<Rational> as_rational(double x) {
  if (!std::isfinite(x) || std::abs(x) > 1e9) return std::nullopt;
  const double tol = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x));
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = x;
  for (int it = 0; it < 40; ++it) {
    const double fl = std::floor(r);
    const auto a = static_cast<long long>(fl);
    const long long h2 = a * h1 + h0, k2 = a * k1 + k0;
    if (k2 > 1000000) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    if (std::abs(x - static_cast<double>(h1) / static_cast<double>(k1)) <= tol) return Rational::make(h1, k1);
    const double frac = r - fl;
    if (frac == 0.0) break;
    r = 1.0 / frac;
  }
  return std::nullopt;
}

template <class T>
bool window(T lo, T x, T hi, bool closed_top) {
  return lo < x && (closed_top ? x <= hi : x < hi);
}

bool window_tol(double lo, double x, double hi, bool closed_top, double tol) {
  return x - lo > tol && (closed_top ? hi - x >= -tol : hi - x > tol);
}

void check_exponent(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("weight classes need 1 <= p < inf");
}

}  // namespace

double mu_density(const JacobiParams& p, double theta, bool restricted) {
  if (restricted && !(theta > 0.0 && theta < kPi)) throw DomainError("restricted density needs theta in (0, pi)");
  const double s = psi(p, theta);
  return s * s;
}

Ball::Ball(double c, double r) : center(c), radius(r) {
  if (!(c > 0.0 && c < kPi)) throw DomainError("ball center must lie in (0, pi)");
  if (!(r > 0.0)) throw DomainError("ball radius must be positive");
}

double Ball::lower() const { return std::max(0.0, center - radius); }
double Ball::upper() const { return std::min(kPi, center + radius); }

double interval_measure(const JacobiParams& p, double a, double b) {
  if (!(a >= 0.0 && b <= kPi && a <= b)) throw DomainError("interval must lie in [0, pi]");
  if (a == b) return 0.0;
  const auto sq = [](double v) { return v * v; };
  const double u1 = sq(std::sin(0.5 * a)), c1 = sq(std::cos(0.5 * a));
  const double u2 = sq(std::sin(0.5 * b)), c2 = sq(std::cos(0.5 * b));
  return beta_density_integral(p.alpha(), p.beta(), u1, c1, u2, c2);
}

double ball_measure(const JacobiParams& p, const Ball& b) { return interval_measure(p, b.lower(), b.upper()); }

double PowerWeight::operator()(double theta) const {
  if (!(std::abs(theta) < kPi)) throw DomainError("weight argument outside (-pi, pi)");
  return std::pow(std::abs(std::sin(0.5 * theta)), r) * std::pow(std::cos(0.5 * theta), s);
}

bool ap_membership(const JacobiParams& p, const PowerWeight& w, double exponent, const ClassOptions& o) {
  check_exponent(exponent);
  const bool closed = exponent == 1.0;
  const auto ra = as_rational(p.alpha()), rb = as_rational(p.beta()), rr = as_rational(w.r),
             rs = as_rational(w.s), rp = as_rational(exponent);
  if (ra && rb && rr && rs && rp) {
    const Rational two{2, 1}, one{1, 1}, zero{0, 1};
    const Rational la = zero - (two * *ra + two), ha = (two * *ra + two) * (*rp - one);
    const Rational lb = zero - (two * *rb + two), hb = (two * *rb + two) * (*rp - one);
    return window(la, *rr, ha, closed) && window(lb, *rs, hb, closed);
  }
  const double a = p.alpha(), b = p.beta(), q = exponent;
  return window_tol(-(2 * a + 2), w.r, (2 * a + 2) * (q - 1), closed, o.boundary_tolerance) &&
         window_tol(-(2 * b + 2), w.s, (2 * b + 2) * (q - 1), closed, o.boundary_tolerance);
}

bool bp_membership(const JacobiParams& p, const PowerWeight& w, double exponent, const ClassOptions& o) {
  check_exponent(exponent);
  const bool closed = exponent == 1.0;
  const auto ra = as_rational(p.alpha()), rb = as_rational(p.beta()), rr = as_rational(w.r),
             rs = as_rational(w.s), rp = as_rational(exponent);
  if (ra && rb && rr && rs && rp) {
    const Rational one{1, 1}, half{1, 2}, zero{0, 1};
    const auto lo = [&](Rational x) { return zero - one - (x + half) * *rp; };
    const auto hi = [&](Rational x) { return *rp - one + (x + half) * *rp; };
    return window(lo(*ra), *rr, hi(*ra), closed) && window(lo(*rb), *rs, hi(*rb), closed);
  }
  const double q = exponent;
  const auto lo = [&](double x) { return -1.0 - (x + 0.5) * q; };
  const auto hi = [&](double x) { return q - 1.0 + (x + 0.5) * q; };
  return window_tol(lo(p.alpha()), w.r, hi(p.alpha()), closed, o.boundary_tolerance) &&
         window_tol(lo(p.beta()), w.s, hi(p.beta()), closed, o.boundary_tolerance);
}

}  // namespace symjac
