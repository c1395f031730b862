#include "symjac/quad.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <numbers>
#include <queue>

#include "symjac/errors.hpp"

namespace symjac {

namespace {

constexpr double kPi = std::numbers::pi;

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = fc * kWgk[7], gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    const double s = f(c - x) + f(c + x);
    kron += kWgk[j] * s;
    if (j % 2 == 1) gauss += kWg[j / 2] * s;
  }
  return {a, b, kron * h, std::abs((kron - gauss) * h)};
}

}  // namespace

IntegrationResult integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                            double rel_tol, int max_intervals) {
  if (a == b) return {0.0, 0.0};
  std::priority_queue<Segment> heap;
  Segment first = gk15(f, a, b);
  double total = first.value, err = first.error;
  heap.push(first);
  int count = 1;
  while (err > std::max(abs_tol, rel_tol * std::abs(total)) && count < max_intervals) {
    const Segment s = heap.top();
    heap.pop();
    const double m = 0.5 * (s.a + s.b);
    const Segment l = gk15(f, s.a, m), r = gk15(f, m, s.b);
    total += l.value + r.value - s.value;
    err += l.error + r.error - s.error;
    heap.push(l);
    heap.push(r);
    ++count;
  }
  if (!std::isfinite(total)) throw NumericError("adaptive quadrature produced a non-finite value");
  // recompute sums to avoid drift from incremental updates
  total = 0.0;
  err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  return {total, err};
}

std::string to_string(MeasureTag m) {
  switch (m) {
    case MeasureTag::mu_plus: return "mu_plus";
    case MeasureTag::mu_full: return "mu";
    case MeasureTag::lebesgue_plus: return "dtheta_plus";
    case MeasureTag::lebesgue_full: return "dtheta";
  }
  return "?";
}

MeasureTag measure_from_string(const std::string& s) {
  if (s == "mu_plus") return MeasureTag::mu_plus;
  if (s == "mu") return MeasureTag::mu_full;
  if (s == "dtheta_plus") return MeasureTag::lebesgue_plus;
  if (s == "dtheta") return MeasureTag::lebesgue_full;
  throw ConfigError("unknown measure tag: " + s);
}

namespace {

// p_m(cos theta) and its theta-derivative, orthonormal in dmu+.
struct PolyEval {
  const Recurrence& base;
  const Recurrence& shifted;
  std::size_t m;
  std::vector<double> buf;

  std::pair<double, double> operator()(double theta) {
    const double x = std::cos(theta);
    buf.resize(m + 1);
    base.values(x, m + 1, buf.data());
    const double value = buf[m];
    shifted.values(x, m, buf.data());
    const double deriv = -0.5 * base.sqrt_gap(m) * std::sin(theta) * buf[m - 1];
    return {value, deriv};
  }
};

bool newton_polish(PolyEval& ev, double& theta) {
  for (int it = 0; it < 100; ++it) {
    const auto [f, df] = ev(theta);
    if (df == 0.0 || !std::isfinite(f)) return false;
    double step = f / df;
    // keep iterates inside (0, pi)
    while (theta - step <= 0.0 || theta - step >= kPi) step *= 0.5;
    theta -= step;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(theta))) return true;
  }
  return true;
}

bool nodes_valid(const std::vector<double>& t, std::size_t m) {
  if (t.size() != m) return false;
  for (std::size_t i = 0; i < m; ++i) {
    if (!(t[i] > 0.0 && t[i] < kPi)) return false;
    if (i > 0 && !(t[i] > t[i - 1] * (1.0 + 1e-12))) return false;
  }
  return true;
}

std::vector<double> newton_nodes(PolyEval& ev, const JacobiParams& p, std::size_t m) {
  std::vector<double> t(m);
  const double big_n = static_cast<double>(m) + p.shift();
  for (std::size_t i = 0; i < m; ++i) {
    double guess = (static_cast<double>(i + 1) + 0.5 * p.alpha() - 0.25) * kPi / big_n;
    guess = std::clamp(guess, 1e-3 / big_n, kPi - 1e-3 / big_n);
    if (!newton_polish(ev, guess)) return {};
    t[i] = guess;
  }
  std::sort(t.begin(), t.end());
  return t;
}

// Fallback: bracket sign changes on a fine scan, then bisect and polish.
std::vector<double> scan_nodes(PolyEval& ev, std::size_t m) {
  const std::size_t n_scan = 64 * m + 64;
  std::vector<double> t;
  double a = 0.0;
  double fa = ev(1e-14).first;
  for (std::size_t j = 1; j <= n_scan; ++j) {
    double b = kPi * static_cast<double>(j) / static_cast<double>(n_scan);
    if (j == n_scan) b = kPi - 1e-14;
    const double fb = ev(b).first;
    if (fa * fb < 0.0) {
      double lo = a, hi = b, flo = fa;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = ev(mid).first;
        if (flo * fm <= 0.0) {
          hi = mid;
        } else {
          lo = mid;
          flo = fm;
        }
      }
      double root = 0.5 * (lo + hi);
      newton_polish(ev, root);
      t.push_back(root);
    }
    a = b;
    fa = fb;
  }
  std::sort(t.begin(), t.end());
  return t;
}

}  // namespace

ThetaGrid gauss_jacobi_grid(const JacobiParams& p, std::size_t order) {
  if (order < 1) throw ConfigError("Gauss-Jacobi order must be >= 1");
  if (order > kMaxGaussOrder) throw ConfigError("Gauss-Jacobi order above cap 512");
  const auto base = recurrence_for(p, order + 1);
  const auto shifted = recurrence_for(p.shifted(1), order + 1);
  PolyEval ev{*base, *shifted, order, {}};
  std::vector<double> t = newton_nodes(ev, p, order);
  if (!nodes_valid(t, order)) t = scan_nodes(ev, order);
  if (!nodes_valid(t, order)) throw NumericError("Gauss-Jacobi node computation failed to converge");

  ThetaGrid g;
  g.measure = MeasureTag::mu_plus;
  g.alpha = p.alpha();
  g.beta = p.beta();
  g.order = order;
  g.nodes = t;
  g.weights.resize(order);
  std::vector<double> v(order);
  for (std::size_t i = 0; i < order; ++i) {
    // Christoffel numbers of the orthonormal family
    base->values(std::cos(t[i]), order, v.data());
    double s = 0.0;
    for (double x : v) s += x * x;
    g.weights[i] = 1.0 / s;
  }
  return g;
}

ThetaGrid theta_grid(const JacobiParams& p, std::size_t order, MeasureTag measure) {
  const ThetaGrid plus = gauss_jacobi_grid(p, order);
  ThetaGrid g = plus;
  g.measure = measure;
  g.symmetric = is_symmetric(measure);
  const bool lebesgue = measure == MeasureTag::lebesgue_plus || measure == MeasureTag::lebesgue_full;
  std::vector<double> w = plus.weights;
  if (lebesgue)
    for (std::size_t i = 0; i < order; ++i) {
      const double ps = psi(p, plus.nodes[i]);
      w[i] /= ps * ps;
    }
  if (!g.symmetric) {
    g.weights = w;
    return g;
  }
  g.nodes.assign(2 * order, 0.0);
  g.weights.assign(2 * order, 0.0);
  for (std::size_t i = 0; i < order; ++i) {
    g.nodes[order + i] = plus.nodes[i];
    g.weights[order + i] = w[i];
    g.nodes[order - 1 - i] = -plus.nodes[i];
    g.weights[order - 1 - i] = w[i];
  }
  return g;
}

std::shared_ptr<const ThetaGrid> make_grid(const JacobiParams& p, std::size_t order, MeasureTag measure) {
  return std::make_shared<const ThetaGrid>(theta_grid(p, order, measure));
}

std::string grid_to_json(const ThetaGrid& g) {
  nlohmann::json j;
  j["schema"] = "symjac.theta_grid/1";
  j["measure"] = to_string(g.measure);
  j["symmetric"] = g.symmetric;
  j["params"] = {{"alpha", g.alpha}, {"beta", g.beta}};
  j["order"] = g.order;
  j["nodes"] = g.nodes;
  j["weights"] = g.weights;
  return j.dump(2);
}

ThetaGrid grid_from_json(const std::string& text) {
  ThetaGrid g;
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("schema").get<std::string>() != "symjac.theta_grid/1") throw ConfigError("unsupported grid schema");
    g.measure = measure_from_string(j.at("measure").get<std::string>());
    g.symmetric = j.at("symmetric").get<bool>();
    g.alpha = j.at("params").at("alpha").get<double>();
    g.beta = j.at("params").at("beta").get<double>();
    g.order = j.at("order").get<std::size_t>();
    g.nodes = j.at("nodes").get<std::vector<double>>();
    g.weights = j.at("weights").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed grid JSON: ") + e.what());
  }
  if (g.nodes.size() != g.weights.size()) throw ConfigError("grid nodes/weights length mismatch");
  for (double w : g.weights)
    if (!(w > 0.0)) throw ConfigError("grid weights must be positive");
  return g;
}

TGrid make_tgrid(double t_min, double t_max, int points_per_decade, double weight_exponent) {
  if (!(t_min > 0.0) || !(t_max > t_min)) throw ConfigError("t-grid requires 0 < t_min < t_max");
  if (points_per_decade < 16) throw ConfigError("t-grid needs at least 16 points per decade");
  if (!(weight_exponent >= 1.0)) throw ConfigError("t-grid weight exponent must be >= 1");
  TGrid g;
  g.t_min = t_min;
  g.t_max = t_max;
  g.points_per_decade = points_per_decade;
  const double span = std::log(t_max / t_min);
  const auto intervals = std::max<std::size_t>(
      8, static_cast<std::size_t>(std::ceil(points_per_decade * std::log10(t_max / t_min) - 1e-9)));
  const double h = span / static_cast<double>(intervals);
  g.nodes.resize(intervals + 1);
  for (std::size_t j = 0; j <= intervals; ++j) g.nodes[j] = t_min * std::exp(h * static_cast<double>(j));
  g.nodes.back() = t_max;
  return reweight(g, weight_exponent);
}

TGrid reweight(const TGrid& src, double weight_exponent) {
  TGrid g = src;
  g.weight_exponent = weight_exponent;
  const std::size_t n = g.nodes.size();
  const double h = std::log(g.t_max / g.t_min) / static_cast<double>(n - 1);
  // trapezoid in u = log t with third-order Gregory end corrections
  static constexpr double kEnd[3] = {3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0};
  g.weights.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    double c = 1.0;
    if (j < 3) c = kEnd[j];
    if (n - 1 - j < 3) c = kEnd[n - 1 - j];
    g.weights[j] = c * h * std::pow(g.nodes[j], weight_exponent);
  }
  return g;
}

double t_norm(const std::vector<double>& samples, double p, const TGrid& grid) {
  if (samples.size() != grid.size()) throw ConfigError("t_norm: sample count does not match the grid");
  for (double s : samples)
    if (std::isnan(s)) throw NumericError("t_norm: NaN sample");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double s : samples) m = std::max(m, std::abs(s));
    return m;
  }
  double acc = 0.0;
  if (p == 1.0) {
    for (std::size_t j = 0; j < samples.size(); ++j) acc += grid.weights[j] * std::abs(samples[j]);
    return acc;
  }
  if (p == 2.0) {
    for (std::size_t j = 0; j < samples.size(); ++j) acc += grid.weights[j] * samples[j] * samples[j];
    return std::sqrt(acc);
  }
  for (std::size_t j = 0; j < samples.size(); ++j) acc += grid.weights[j] * std::pow(std::abs(samples[j]), p);
  return std::pow(acc, 1.0 / p);
}

std::string to_string(Setting s) {
  switch (s) {
    case Setting::poly_plus: return "poly+";
    case Setting::poly_sym: return "poly-sym";
    case Setting::fn_plus: return "fn+";
    case Setting::fn_sym: return "fn-sym";
  }
  return "?";
}

Setting setting_from_string(const std::string& s) {
  if (s == "poly+") return Setting::poly_plus;
  if (s == "poly-sym") return Setting::poly_sym;
  if (s == "fn+") return Setting::fn_plus;
  if (s == "fn-sym") return Setting::fn_sym;
  throw ConfigError("unknown setting: " + s);
}

MeasureTag measure_of(Setting s) {
  switch (s) {
    case Setting::poly_plus: return MeasureTag::mu_plus;
    case Setting::poly_sym: return MeasureTag::mu_full;
    case Setting::fn_plus: return MeasureTag::lebesgue_plus;
    case Setting::fn_sym: return MeasureTag::lebesgue_full;
  }
  return MeasureTag::mu_plus;
}

BasisKind basis_of(Setting s) {
  switch (s) {
    case Setting::poly_plus: return BasisKind::trig_poly;
    case Setting::poly_sym: return BasisKind::sym_poly;
    case Setting::fn_plus: return BasisKind::jacobi_fn;
    case Setting::fn_sym: return BasisKind::sym_fn;
  }
  return BasisKind::sym_poly;
}

GridFunction GridFunction::sample(std::shared_ptr<const ThetaGrid> grid, Setting s,
                                  const std::function<std::complex<double>(double)>& f) {
  if (grid->measure != measure_of(s)) throw ConfigError("grid measure does not match the setting");
  GridFunction g{grid, {}, s};
  g.values.reserve(grid->size());
  for (double t : grid->nodes) g.values.push_back(f(t));
  return g;
}

namespace {

GridFunction parity_part(const GridFunction& f, double sign) {
  if (!f.grid->symmetric) throw ConfigError("even/odd split needs a symmetric grid");
  GridFunction g = f;
  for (std::size_t i = 0; i < f.size(); ++i)
    g.values[i] = 0.5 * (f.values[i] + sign * f.values[f.grid->mirror(i)]);
  return g;
}

}  // namespace

GridFunction GridFunction::even_part() const { return parity_part(*this, 1.0); }
GridFunction GridFunction::odd_part() const { return parity_part(*this, -1.0); }

GridFunction GridFunction::positive_half() const {
  if (!grid->symmetric) throw ConfigError("positive_half needs a symmetric grid");
  auto half = std::make_shared<ThetaGrid>(*grid);
  const std::size_t m = grid->size() / 2;
  half->symmetric = false;
  half->measure = grid->measure == MeasureTag::mu_full ? MeasureTag::mu_plus : MeasureTag::lebesgue_plus;
  half->nodes.assign(grid->nodes.begin() + static_cast<long>(m), grid->nodes.end());
  half->weights.assign(grid->weights.begin() + static_cast<long>(m), grid->weights.end());
  GridFunction g{half, std::vector<std::complex<double>>(values.begin() + static_cast<long>(m), values.end()),
                 setting == Setting::poly_sym ? Setting::poly_plus : Setting::fn_plus};
  return g;
}

std::complex<double> inner_product(const GridFunction& f, const GridFunction& g) {
  if (f.grid != g.grid && (f.grid->nodes != g.grid->nodes || f.grid->weights != g.grid->weights))
    throw ConfigError("inner product of functions on different grids");
  std::complex<double> s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f.grid->weights[i] * f.values[i] * std::conj(g.values[i]);
  return s;
}

double l2_norm(const GridFunction& f) { return std::sqrt(std::abs(inner_product(f, f))); }

}  // namespace symjac
