#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "params.hpp"
#include "symjac/basis.hpp"
#include "symjac/errors.hpp"
#include "symjac/quad.hpp"

using namespace symjac;
using std::numbers::pi;

namespace {

// int_0^pi g(cos theta) dmu+ as an integral in x with endpoint-aware complements
template <class G>
double x_integral(const JacobiParams& p, G g) {
  boost::math::quadrature::tanh_sinh<double> ts;
  const double a = p.alpha(), b = p.beta();
  return std::pow(2.0, -a - b - 1.0) * ts.integrate(
                                           [&](double x, double xc) {
                                             const double om = x > 0 ? xc : 1.0 - x;
                                             const double op = x < 0 ? -xc : 1.0 + x;
                                             return g(x) * std::pow(om, a) * std::pow(op, b);
                                           },
                                           -1.0, 1.0, 1e-14);
}

GridFunction basis_on(std::shared_ptr<const ThetaGrid> g, Setting s, std::size_t n) {
  const BasisElement e{g->params(), n, basis_of(s)};
  return GridFunction::sample(g, s, [&](double t) { return eval_basis(e, t); });
}

double max_gram_error(std::shared_ptr<const ThetaGrid> g, Setting s, std::size_t count) {
  std::vector<GridFunction> f;
  for (std::size_t n = 0; n < count; ++n) f.push_back(basis_on(g, s, n));
  double worst = 0.0;
  for (std::size_t m = 0; m < count; ++m)
    for (std::size_t n = 0; n < count; ++n)
      worst = std::max(worst, std::abs(inner_product(f[m], f[n]) - (m == n ? 1.0 : 0.0)));
  return worst;
}

}  // namespace

TEST_CASE("adaptive Gauss-Kronrod") {
  CHECK(integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0).value == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, pi).value == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(integrate([](double) { return 1.0; }, 2.0, 2.0).value == 0.0);
}

TEST_CASE("Gauss-Jacobi rule: total mass and polynomial exactness") {
  const ThetaGrid g = gauss_jacobi_grid({0.0, 0.0}, 20);
  double mass = 0.0;
  for (double w : g.weights) mass += w;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& p : standard_params()) {
    const ThetaGrid q = gauss_jacobi_grid(p, 5);
    double v = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) v += q.weights[i] * std::pow(std::cos(q.nodes[i]), 9);
    const double ref = x_integral(p, [](double x) { return std::pow(x, 9); });
    CHECK(std::abs(v - ref) <= 1e-12 * (1.0 + std::abs(ref)));
  }
}

TEST_CASE("Gauss-Jacobi nodes converge for every order up to the cap") {
  for (const auto& p : standard_params()) {
    const double mass = total_mass_plus(p);
    for (std::size_t order : {1u, 2u, 3u, 7u, 16u, 33u, 64u, 100u, 257u, 512u}) {
      const ThetaGrid g = gauss_jacobi_grid(p, order);
      REQUIRE(g.size() == order);
      double s = 0.0;
      for (std::size_t i = 0; i < order; ++i) {
        CHECK(g.nodes[i] > 0.0);
        CHECK(g.nodes[i] < pi);
        CHECK(g.weights[i] > 0.0);
        if (i) CHECK(g.nodes[i] > g.nodes[i - 1]);
        CHECK(std::abs(jacobi_poly(p, order, std::cos(g.nodes[i]))) <=
              1e-8 * std::abs(jacobi_poly(p, order, 1.0)) + 1e-12);
        s += g.weights[i];
      }
      CHECK(s == doctest::Approx(mass).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(gauss_jacobi_grid({0.0, 0.0}, 513), ConfigError);
  CHECK_THROWS_AS(gauss_jacobi_grid({0.0, 0.0}, 0), ConfigError);
}

TEST_CASE("orthonormality of the four bases on their grids") {
  for (const auto& p : standard_params()) {
    CHECK(max_gram_error(make_grid(p, 32, MeasureTag::mu_plus), Setting::poly_plus, 16) <= 1e-12);
    CHECK(max_gram_error(make_grid(p, 40, MeasureTag::mu_full), Setting::poly_sym, 21) <= 1e-8);
    CHECK(max_gram_error(make_grid(p, 40, MeasureTag::lebesgue_full), Setting::fn_sym, 21) <= 1e-8);
    CHECK(max_gram_error(make_grid(p, 32, MeasureTag::lebesgue_plus), Setting::fn_plus, 16) <= 1e-8);
  }
}

TEST_CASE("inner product basics") {
  const auto g = make_grid({0.0, 0.0}, 16, MeasureTag::mu_plus);
  const auto one = GridFunction::sample(g, Setting::poly_plus, [](double) { return 1.0; });
  CHECK(inner_product(one, one).real() == doctest::Approx(1.0).epsilon(1e-13));
  const auto s = make_grid({1.5, -0.7}, 24, MeasureTag::mu_full);
  const auto f = GridFunction::sample(s, Setting::poly_sym, [](double t) { return std::complex<double>(std::cos(t), t); });
  const auto h = GridFunction::sample(s, Setting::poly_sym, [](double t) { return std::complex<double>(t * t, -std::sin(2 * t)); });
  const auto fh = inner_product(f, h), hf = inner_product(h, f);
  CHECK(fh.real() == doctest::Approx(hf.real()));
  CHECK(fh.imag() == doctest::Approx(-hf.imag()));
  for (std::size_t n = 0; n < 10; ++n) {
    const auto phi = basis_on(s, Setting::poly_sym, n);
    CHECK(inner_product(phi, phi).real() == doctest::Approx(1.0).epsilon(1e-12));
  }
  const auto other = make_grid({1.5, -0.7}, 20, MeasureTag::mu_full);
  CHECK_THROWS_AS(inner_product(f, GridFunction::sample(other, Setting::poly_sym, [](double) { return 1.0; })),
                  ConfigError);
  CHECK_THROWS_AS(GridFunction::sample(s, Setting::fn_sym, [](double) { return 1.0; }), ConfigError);
}

TEST_CASE("even and odd parts on symmetric grids") {
  const auto g = make_grid({-0.7, -0.6}, 24, MeasureTag::mu_full);
  const auto f = GridFunction::sample(g, Setting::poly_sym, [](double t) { return std::exp(t) * std::cos(3 * t); });
  const auto e = f.even_part(), o = f.odd_part();
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(std::abs(e.values[i] + o.values[i] - f.values[i]) < 1e-14);
  // even projection of an odd function is orthogonal to the even basis elements
  const auto odd = GridFunction::sample(g, Setting::poly_sym, [](double t) { return std::sin(t) * (2 + std::cos(t)); });
  const auto proj = odd.even_part();
  for (std::size_t n = 0; n < 20; n += 2) CHECK(std::abs(inner_product(proj, basis_on(g, Setting::poly_sym, n))) <= 1e-12);
  const auto plain = make_grid({-0.7, -0.6}, 24, MeasureTag::mu_plus);
  CHECK_THROWS_AS(GridFunction::sample(plain, Setting::poly_plus, [](double) { return 1.0; }).even_part(), ConfigError);
  const auto half = f.positive_half();
  CHECK(half.size() == 24);
  CHECK(half.setting == Setting::poly_plus);
  CHECK(half.grid->nodes.front() > 0.0);
}

TEST_CASE("grid JSON round trip") {
  const ThetaGrid g = theta_grid({1.5, -0.7}, 12, MeasureTag::lebesgue_full);
  const ThetaGrid h = grid_from_json(grid_to_json(g));
  CHECK(h.nodes == g.nodes);
  CHECK(h.weights == g.weights);
  CHECK(h.measure == g.measure);
  CHECK(h.symmetric);
  CHECK(h.alpha == 1.5);
  CHECK_THROWS_AS(grid_from_json("{\"schema\": 3}"), ConfigError);
}

TEST_CASE("t-grid reproduces incomplete gamma integrals") {
  for (double w : {1.0, 2.0, 3.0, 4.0, 6.0, 8.0}) {
    const TGrid g = make_tgrid(1e-4, 40.0, 16, w);
    double v = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) v += g.weights[i] * std::exp(-2.0 * g.nodes[i]);
    // int_{a}^{b} t^{w-1} e^{-2t} dt = 2^{-w} [gamma(w, 2b) - gamma(w, 2a)]
    const double ref =
        std::pow(2.0, -w) * (boost::math::tgamma_lower(w, 80.0) - boost::math::tgamma_lower(w, 2e-4));
    CHECK(v == doctest::Approx(ref).epsilon(1e-6));
    // refinement changes the value by less than the tolerance
    const TGrid fine = make_tgrid(1e-4, 40.0, 32, w);
    double vf = 0.0;
    for (std::size_t i = 0; i < fine.size(); ++i) vf += fine.weights[i] * std::exp(-2.0 * fine.nodes[i]);
    CHECK(vf == doctest::Approx(v).epsilon(1e-6));
  }
  CHECK_THROWS_AS(make_tgrid(1e-4, 40.0, 8, 1.0), ConfigError);
  CHECK_THROWS_AS(make_tgrid(1.0, 0.5, 16, 1.0), ConfigError);
}

TEST_CASE("t-norms") {
  const TGrid g = make_tgrid(1e-4, 40.0, 16, 2.0);
  std::vector<double> s, c, h;
  for (double t : g.nodes) {
    s.push_back(std::exp(-t));
    c.push_back(3.5);
    h.push_back(std::exp(-t / 2));
  }
  CHECK(t_norm(s, 2.0, g) == doctest::Approx(0.5).epsilon(2e-4));
  CHECK(t_norm(c, INFINITY, g) == 3.5);
  CHECK(t_norm(h, INFINITY, g) == std::exp(-g.t_min / 2));
  s[3] = NAN;
  CHECK_THROWS_AS(t_norm(s, 2.0, g), NumericError);
}
