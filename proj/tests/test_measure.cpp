#include <doctest.h>

#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "params.hpp"
#include "symjac/errors.hpp"
#include "symjac/measure.hpp"

using namespace symjac;
using std::numbers::pi;

namespace {

// mu+ of [a, b] through the regularized incomplete beta in u = sin^2(theta/2)
double beta_oracle(const JacobiParams& p, double a, double b) {
  const double ua = std::pow(std::sin(a / 2), 2), ub = std::pow(std::sin(b / 2), 2);
  const double full = boost::math::beta(p.alpha() + 1, p.beta() + 1);
  return full * (boost::math::ibeta(p.alpha() + 1, p.beta() + 1, ub) - boost::math::ibeta(p.alpha() + 1, p.beta() + 1, ua));
}

}  // namespace

TEST_CASE("density") {
  CHECK(mu_density({-0.5, -0.5}, 1.3) == doctest::Approx(1.0));
  CHECK(mu_density({0.0, 0.0}, 0.7, true) == doctest::Approx(0.5 * std::sin(0.7)));
  for (const auto& p : standard_params()) {
    CHECK(mu_density(p, -2.1) == doctest::Approx(mu_density(p, 2.1)).epsilon(1e-15));
  }
  CHECK_THROWS_AS(mu_density({0.0, 0.0}, -0.5, true), DomainError);
  CHECK_THROWS_AS(mu_density({0.0, 0.0}, 4.0), DomainError);
}

TEST_CASE("ball measure against the incomplete beta function") {
  CHECK(ball_measure({0.0, 0.0}, Ball(pi / 2, 2.0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ball_measure({-0.5, -0.5}, Ball(0.3, 0.2)) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(ball_measure({-0.5, -0.5}, Ball(0.3, 0.5)) == doctest::Approx(0.8).epsilon(1e-12));
  for (const auto& p : standard_params()) {
    for (double c : {1e-4, 0.05, 0.8, pi / 2, 2.9, pi - 1e-5}) {
      for (double r : {1e-6, 1e-3, 0.1, 1.0, 4.0}) {
        const Ball b(c, r);
        const double ref = beta_oracle(p, b.lower(), b.upper());
        CHECK(ball_measure(p, b) == doctest::Approx(ref).epsilon(1e-8));
      }
    }
  }
  CHECK_THROWS_AS(Ball(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(Ball(1.0, 0.0), DomainError);
}

TEST_CASE("ball measure is monotone and additive") {
  for (const auto& p : standard_params()) {
    for (double c : {0.01, 1.0, 3.1}) {
      double prev = 0.0;
      for (double r = 1e-4; r < 4.0; r *= 1.7) {
        const double m = ball_measure(p, Ball(c, r));
        CHECK(m >= prev);
        prev = m;
      }
    }
    const double whole = interval_measure(p, 0.2, 2.5);
    const double split = interval_measure(p, 0.2, 1.1) + interval_measure(p, 1.1, 2.5);
    CHECK(whole == doctest::Approx(split).epsilon(1e-10));
  }
}

TEST_CASE("doubling constant is finite and stable under refinement") {
  for (const auto& p : standard_params()) {
    auto sup_ratio = [&](int n) {
      double worst = 0.0;
      for (int i = 0; i < n; ++i) {
        const double c = pi * (i + 0.5) / n;
        for (double r = pi / n; r > 1e-6; r /= 3.0)
          worst = std::max(worst, ball_measure(p, Ball(c, 2 * r)) / ball_measure(p, Ball(c, r)));
      }
      return worst;
    };
    const double coarse = sup_ratio(16), fine = sup_ratio(64);
    CHECK(std::isfinite(fine));
    CHECK(fine < 1.5 * coarse);
    CHECK(coarse >= 1.0);
  }
}

TEST_CASE("A_p membership") {
  CHECK(ap_membership({0.0, 0.0}, {0.0, 0.0}, 2.0));
  CHECK_FALSE(ap_membership({0.0, 0.0}, {-2.0, 0.0}, 2.0));
  CHECK(ap_membership({0.0, 0.0}, {0.0, 0.0}, 1.0));
  CHECK_FALSE(ap_membership({0.0, 0.0}, {0.5, 0.0}, 1.0));
  CHECK_FALSE(ap_membership({0.0, 0.0}, {2.0, 0.0}, 2.0));
  CHECK(ap_membership({0.0, 0.0}, {1.999, 0.0}, 2.0));
  CHECK_THROWS_AS(ap_membership({0.0, 0.0}, {0.0, 0.0}, 0.5), DomainError);
}

TEST_CASE("B_p membership and the pencil window") {
  for (double a : {-0.5, 0.0, 1.5})
    for (double b : {-0.5, 2.0})
      for (double q : {1.01, 1.5, 2.0, 4.0, 40.0}) CHECK(bp_membership({a, b}, {0.0, 0.0}, q));
  const JacobiParams pencil{-0.9, 0.0};
  for (double inv = 0.02; inv < 1.0; inv += 0.01) {
    const double q = 1.0 / inv;
    const bool inside = inv > 0.4 + 1e-9 && inv < 0.6 - 1e-9;
    const bool edge = std::abs(inv - 0.4) < 1e-9 || std::abs(inv - 0.6) < 1e-9;
    if (!edge) CHECK(bp_membership(pencil, {0.0, 0.0}, q) == inside);
  }
  // the window endpoints are excluded exactly
  CHECK_FALSE(bp_membership(pencil, {0.0, 0.0}, 2.5));
  CHECK_FALSE(bp_membership(pencil, {0.0, 0.0}, 5.0 / 3.0));
  CHECK(bp_membership(pencil, {0.0, 0.0}, 2.0));
}

TEST_CASE("B_p agrees with A_p on shifted exponents") {
  std::mt19937_64 rng(20261015);
  std::uniform_real_distribution<double> par(-0.99, 3.0), ex(-6.0, 6.0), lp(0.0, 1.0);
  int mismatches = 0;
  for (int i = 0; i < 10000; ++i) {
    const JacobiParams p{par(rng), par(rng)};
    const double q = 1.0 + 9.0 * lp(rng);
    const PowerWeight w{ex(rng), ex(rng)};
    const PowerWeight shifted{w.r + (p.alpha() + 0.5) * (q - 2), w.s + (p.beta() + 0.5) * (q - 2)};
    // direct evaluation of the two displayed systems of inequalities
    auto in = [](double lo, double x, double hi) { return lo < x && x < hi; };
    const bool direct_b = in(-1 - (p.alpha() + 0.5) * q, w.r, q - 1 + (p.alpha() + 0.5) * q) &&
                          in(-1 - (p.beta() + 0.5) * q, w.s, q - 1 + (p.beta() + 0.5) * q);
    const bool direct_a = in(-(2 * p.alpha() + 2), shifted.r, (2 * p.alpha() + 2) * (q - 1)) &&
                          in(-(2 * p.beta() + 2), shifted.s, (2 * p.beta() + 2) * (q - 1));
    const bool b = bp_membership(p, w, q), a = ap_membership(p, shifted, q);
    if (b != a || b != direct_b || a != direct_a) ++mismatches;
  }
  CHECK(mismatches == 0);
}

TEST_CASE("power weights") {
  const PowerWeight w{1.3, -0.4};
  CHECK(w(0.8) == doctest::Approx(w(-0.8)));
  CHECK(w(0.8) == doctest::Approx(std::pow(std::sin(0.4), 1.3) * std::pow(std::cos(0.4), -0.4)));
  CHECK(w(2.0) > 0.0);
}
