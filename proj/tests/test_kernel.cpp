#include <doctest.h>

#include <boost/math/special_functions/jacobi.hpp>
#include <cmath>
#include <numbers>

#include "params.hpp"
#include "symjac/basis.hpp"
#include "symjac/errors.hpp"
#include "symjac/kernel.hpp"
#include "symjac/quad.hpp"

using namespace symjac;
using std::numbers::pi;

namespace {

// non-symmetrized Poisson kernel from classical polynomials and Gamma-function norms
double classical_poisson(const JacobiParams& p, double t, double theta, double phi) {
  const double a = p.alpha(), b = p.beta();
  double s = 0.0;
  for (unsigned n = 0; n < 400; ++n) {
    const double lam = std::abs(n + (a + b + 1) / 2);
    const double e = std::exp(-t * lam);
    if (e < 1e-18) break;
    const double log_norm = n == 0 ? std::lgamma(a + 1) + std::lgamma(b + 1) - std::lgamma(a + b + 2)
                                   : std::lgamma(n + a + 1) + std::lgamma(n + b + 1) - std::log(2 * n + a + b + 1) -
                                         std::lgamma(n + a + b + 1) - std::lgamma(n + 1.0);
    s += e * boost::math::jacobi(n, a, b, std::cos(theta)) * boost::math::jacobi(n, a, b, std::cos(phi)) *
         std::exp(-log_norm);
  }
  return s;
}

KernelOrders orders(int t_order, int chain = 0, std::optional<ChainVariant> v = std::nullopt, int th = 0, int ph = 0) {
  KernelOrders o;
  o.t_order = t_order;
  o.chain = chain;
  o.variant = v;
  o.theta = th;
  o.phi = ph;
  return o;
}

bool close(double x, double y, double rel, double abs_floor = 1e-14) {
  return std::abs(x - y) <= rel * std::max(std::abs(x), std::abs(y)) + abs_floor;
}

// difference measured against the absolute-term size of the series (floored at 1)
double scaled_diff(const KernelHandle& h, double t, double th, double ph, double a, double b) {
  return std::abs(a - b) / std::max(1.0, h.magnitude({}, {t}, th, ph)[0]);
}

const double kAngles[] = {-2.9, -1.7, -0.4, 0.05, 0.9, 2.2, 3.05};

}  // namespace

TEST_CASE("non-symmetrized kernel matches the classical polynomial series") {
  for (const auto& p : standard_params()) {
    const KernelHandle h(p, KernelKind::nonsym);
    for (double t : {0.1, 0.5, 2.0})
      for (double th : {0.2, 1.4, 2.8})
        for (double ph : {0.7, 2.5})
          CHECK(scaled_diff(h, t, th, ph, h.value(t, th, ph), classical_poisson(p, t, th, ph)) <= 1e-10);
  }
}

TEST_CASE("symmetry and parity") {
  for (const auto& p : standard_params()) {
    const KernelHandle full(p, KernelKind::sym), even(p, KernelKind::even), odd(p, KernelKind::odd);
    for (double t : {0.01, 0.3, 2.0})
      for (double th : kAngles)
        for (double ph : kAngles) {
          if (th == ph) continue;
          const double v = full.value(t, th, ph);
          CHECK(close(v, full.value(t, ph, th), 1e-12));
          CHECK(scaled_diff(full, t, th, ph, v, even.value(t, th, ph) + odd.value(t, th, ph)) <= 1e-10);
          CHECK(close(even.value(t, -th, ph), even.value(t, th, ph), 1e-12));
          CHECK(close(odd.value(t, -th, ph), -odd.value(t, th, ph), 1e-12));
          CHECK(close(odd.value(t, th, -ph), -odd.value(t, th, ph), 1e-12));
        }
  }
}

TEST_CASE("odd kernel: series path agrees with the shifted-parameter identity") {
  for (const auto& p : standard_params()) {
    const KernelHandle shift(p, KernelKind::odd, {}, OddPath::shift), series(p, KernelKind::odd, {}, OddPath::series);
    for (double t : {1e-3, 0.05, 0.7, 4.0})
      for (double th : kAngles)
        for (double ph : {-2.0, 0.3, 1.9}) {
          if (th == ph) continue;
          for (int m = 0; m < 2; ++m) {
            const auto o = orders(m);
            const double a = shift.derivative(o, t, th, ph), b = series.derivative(o, t, th, ph);
            const double scale =
                std::max({1.0, shift.magnitude(o, {t}, th, ph)[0], series.magnitude(o, {t}, th, ph)[0]});
            CHECK(std::abs(a - b) / scale <= 1e-8);
          }
        }
  }
}

TEST_CASE("kernel integrates to the ground-state decay") {
  for (const auto& p : standard_params()) {
    const auto grid = make_grid(p, 96, MeasureTag::mu_full);
    const KernelHandle h(p, KernelKind::sym);
    for (double t : {0.3, 1.0, 2.5})
      for (double th : {-2.0, 0.4, 2.7}) {
        double s = 0.0;
        for (std::size_t i = 0; i < grid->size(); ++i) s += grid->weights[i] * h.value(t, th, grid->nodes[i]);
        CHECK(close(s, std::exp(-t * std::sqrt(p.lambda0())), 1e-8));
      }
  }
}

TEST_CASE("semigroup law") {
  for (const auto& p : standard_params()) {
    const auto grid = make_grid(p, 128, MeasureTag::mu_full);
    const KernelHandle h(p, KernelKind::sym);
    for (auto [t, s] : {std::pair{0.3, 0.5}, std::pair{1.0, 0.4}})
      for (auto [th, ph] : {std::pair{0.5, -1.2}, std::pair{2.6, 2.0}}) {
        double acc = 0.0;
        for (std::size_t i = 0; i < grid->size(); ++i)
          acc += grid->weights[i] * h.value(t, th, grid->nodes[i]) * h.value(s, grid->nodes[i], ph);
        CHECK(close(acc, h.value(t + s, th, ph), 1e-6));
      }
  }
}

TEST_CASE("interlaced chains against the Laplace reductions") {
  for (const auto& p : standard_params()) {
    const KernelHandle even(p, KernelKind::even), odd(p, KernelKind::odd, {}, OddPath::series);
    double worst = 0.0, worst_fd = 0.0;
    for (double t : {0.01, 0.1, 0.4, 1.5})
      for (double th : {-2.9, -1.1, 0.3, 2.4})
        for (double ph : {0.8, -2.0, 2.9})
          for (int part = 0; part < 2; ++part) {
            const KernelHandle& h = part ? odd : even;
            const auto v = part ? ChainVariant::odd : ChainVariant::even;
            auto mag = [&](const KernelOrders& o) { return h.magnitude(o, {t}, th, ph)[0]; };
            for (int n = 1; n <= 4; ++n) {
              // chain_{2k} = (d_t^2 - lambda_0)^k; odd orders add delta (even part) or delta* (odd part)
              const int k = n / 2;
              const auto c = laplace_coefficients(p, k);
              double red = 0.0, scale = mag(orders(0, n, v));
              for (int j = 0; j <= k; ++j) {
                const int m = 2 * (k - j);
                if (n % 2 == 0) {
                  red += c[j] * h.derivative(orders(m), t, th, ph);
                  scale = std::max(scale, std::abs(c[j]) * mag(orders(m)));
                } else {
                  const auto d = orders(m, 0, std::nullopt, 1);
                  const double dv = h.derivative(d, t, th, ph);
                  red += part ? -c[j] * (dv + rho(p, th) * h.derivative(orders(m), t, th, ph)) : c[j] * dv;
                  scale = std::max(scale, std::abs(c[j]) * (mag(d) + std::abs(rho(p, th)) * mag(orders(m))));
                }
              }
              const double chain = h.derivative(orders(0, n, v), t, th, ph);
              worst = std::max(worst, std::abs(chain - red) / std::max(1.0, scale));
            }
            // second t-derivative by central differences where the series is well conditioned
            if (t >= 0.1) {
              const double val = h.value(t, th, ph), dt = 1e-3 * t;
              const double fd = (h.value(t + dt, th, ph) - 2 * val + h.value(t - dt, th, ph)) / (dt * dt);
              const double chain = h.derivative(orders(0, 2, v), t, th, ph);
              worst_fd = std::max(worst_fd, std::abs(chain - (fd - p.lambda0() * val)) /
                                                std::max(1.0, mag(orders(0, 2, v))));
            }
          }
    CHECK(worst <= 1e-6);
    CHECK(worst_fd <= 1e-4);
  }
}

TEST_CASE("Laplace reduction coefficients") {
  const JacobiParams p{1.5, -0.7};
  const double l = p.lambda0();
  const auto c = laplace_coefficients(p, 3);
  REQUIRE(c.size() == 4);
  CHECK(c[0] == doctest::Approx(1.0));
  CHECK(c[1] == doctest::Approx(-3 * l));
  CHECK(c[2] == doctest::Approx(3 * l * l));
  CHECK(c[3] == doctest::Approx(-l * l * l));
}

TEST_CASE("large-time decay rate of the t-derivative") {
  for (const auto& p : standard_params()) {
    const KernelHandle full(p, KernelKind::sym), odd(p, KernelKind::odd);
    const double th = 1.3, ph = -0.6;
    auto rate = [&](const KernelHandle& h) {
      const double a = std::abs(h.derivative(orders(1), 10.0, th, ph));
      const double b = std::abs(h.derivative(orders(1), 14.0, th, ph));
      return std::log(a / b) / 4.0;
    };
    // the ground state drives the full kernel unless lambda_0 = 0
    const double full_rate = p.lambda0() > 0 ? sqrt_lambda(p, 0) : sqrt_lambda(p, 1);
    CHECK(std::abs(rate(full) / full_rate - 1.0) < 0.05);
    CHECK(std::abs(rate(odd) / sqrt_lambda(p, 1) - 1.0) < 0.05);
  }
}

TEST_CASE("halving the tail tolerance moves values by less than the tolerance") {
  for (const auto& p : standard_params()) {
    TruncationConfig strict;
    strict.eps_tail = 0.5e-10;
    for (KernelKind k : {KernelKind::sym, KernelKind::odd}) {
      const KernelHandle a(p, k), b(p, k, strict);
      for (double t : {1e-4, 1e-2, 1.0})
        for (auto [th, ph] : {std::pair{0.4, 1.0}, std::pair{2.0, -2.5}, std::pair{3.0, 2.9}})
          CHECK(std::abs(a.value(t, th, ph) - b.value(t, th, ph)) < 1e-10);
    }
  }
}

TEST_CASE("function-setting kernels are psi-conjugates") {
  for (const auto& p : standard_params()) {
    const KernelHandle fn(p, KernelKind::fn_nonsym), poly(p, KernelKind::nonsym);
    const KernelHandle fsym(p, KernelKind::fn_sym), psym(p, KernelKind::sym);
    for (double t : {0.1, 1.0})
      for (auto [th, ph] : {std::pair{0.4, 1.0}, std::pair{2.0, 2.5}}) {
        const double w = psi(p, th) * psi(p, ph);
        CHECK(close(fn.value(t, th, ph), w * poly.value(t, th, ph), 1e-12));
        CHECK(close(fsym.value(t, -th, ph), psi(p, -th) * psi(p, ph) * psym.value(t, -th, ph), 1e-12));
        // plain angle derivatives against central differences
        const double h = 1e-5;
        const double d_th = (fn.value(t, th + h, ph) - fn.value(t, th - h, ph)) / (2 * h);
        const double d_ph = (fn.value(t, th, ph + h) - fn.value(t, th, ph - h)) / (2 * h);
        CHECK(close(fn.derivative(orders(0, 0, std::nullopt, 1, 0), t, th, ph), d_th, 1e-6, 1e-8));
        CHECK(close(fn.derivative(orders(0, 0, std::nullopt, 0, 1), t, th, ph), d_ph, 1e-6, 1e-8));
        const double d_sym = (fsym.value(t, -th + h, ph) - fsym.value(t, -th - h, ph)) / (2 * h);
        CHECK(close(fsym.derivative(orders(0, 0, std::nullopt, 1, 0), t, -th, ph), d_sym, 1e-6, 1e-8));
      }
  }
}

TEST_CASE("errors") {
  const JacobiParams p{0.0, 0.0};
  const KernelHandle h(p, KernelKind::sym);
  CHECK_THROWS_AS(h.value(1e-5, 0.3, 0.4), DomainError);
  CHECK_THROWS_AS(h.value(1.0, 3.2, 0.4), DomainError);
  CHECK_THROWS_AS(KernelHandle(p, KernelKind::nonsym).value(1.0, -0.3, 0.4), DomainError);
  TruncationConfig tiny;
  tiny.n_cap = 10;
  CHECK_THROWS_AS(KernelHandle(p, KernelKind::sym, tiny).value(1e-3, 0.3, 0.4), NumericError);
  CHECK_THROWS_AS(h.derivative(orders(0, 1, ChainVariant::odd), 1.0, 0.3, 0.4), ConfigError);
  CHECK_THROWS_AS(riesz_kernel(p, 0, 0.3, 0.4), ConfigError);
  CHECK_THROWS_AS(riesz_kernel(p, 1, 0.3, 0.3), DomainError);
}

TEST_CASE("Riesz kernel parity and convergence at lambda_0 = 0") {
  for (const auto& p : standard_params()) {
    for (int n : {1, 2}) {
      const double th = 0.9, ph = 2.1;
      const double r = riesz_kernel(p, n, th, ph);
      CHECK(std::isfinite(r));
      CHECK(close(riesz_kernel(p, n, th, -ph), -r, 1e-10, 1e-12));
      // the odd chain flips parity in theta for odd orders
      const double sign = n % 2 ? 1.0 : -1.0;
      CHECK(close(riesz_kernel(p, n, -th, ph), sign * r, 1e-10, 1e-12));
    }
  }
}

TEST_CASE("multiplier kernels") {
  for (const auto& p : standard_params()) {
    const double th = 0.7, ph = 2.3;
    const KernelHandle odd(p, KernelKind::odd);
    DiscreteMeasure unit{{{0.8, 1.0}}};
    CHECK(close(multiplier_kernel(p, unit, th, ph).real(), odd.value(0.8, th, ph), 1e-14));
    DiscreteMeasure two{{{0.8, {1.0, 2.0}}, {0.3, -0.5}}};
    const auto m2 = multiplier_kernel(p, two, th, ph);
    CHECK(close(m2.imag(), 2.0 * odd.value(0.8, th, ph), 1e-13));
    CHECK(close(m2.real(), odd.value(0.8, th, ph) - 0.5 * odd.value(0.3, th, ph), 1e-12, 1e-14));
    // phi = 1 telescopes to the kernel at the lower integration limit
    TruncationConfig cfg;
    const LaplaceMultiplier one{[](double) { return 1.0; }, 1.0};
    CHECK(close(multiplier_kernel(p, one, th, ph, cfg), odd.value(cfg.t_floor, th, ph), 1e-6, 1e-9));
    // triangle inequality against an independent finer grid of |d_t K|
    const LaplaceMultiplier alt{[](double t) { return std::cos(7.0 * t) > 0 ? 1.0 : -1.0; }, 1.0};
    const double m = multiplier_kernel(p, alt, th, ph);
    const TGrid g = make_tgrid(cfg.t_floor, 40.0, 32, 1.0);
    const auto d = odd.path(orders(1), g.nodes, th, ph);
    double bound = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) bound += g.weights[i] * std::abs(d[i]);
    CHECK(std::abs(m) <= bound * (1 + 1e-6));
    const LaplaceMultiplier bad{[](double) { return 3.0; }, 1.0};
    CHECK_THROWS_AS(multiplier_kernel(p, bad, th, ph), ConfigError);
    CHECK(unit.weighted_variation(p) == doctest::Approx(std::exp(-0.8 * std::sqrt(p.lambda0()))));
  }
}
