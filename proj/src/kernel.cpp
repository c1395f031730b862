#include "symjac/kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <string>

#include "symjac/errors.hpp"

namespace symjac {

namespace {

constexpr double kPi = std::numbers::pi;

std::string short_number(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

void require_angle(double theta, bool half) {
  if (half ? !(theta > 0.0 && theta < kPi) : !(std::abs(theta) < kPi))
    throw DomainError("kernel angle outside its domain: " + short_number(theta));
}

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

}  // namespace

double derivative_growth(const KernelOrders& o) { return o.t_order + o.chain + o.theta + o.phi; }

std::size_t truncation_terms(const JacobiParams& p, double t, const TruncationConfig& cfg, double extra_growth) {
  if (!(t >= cfg.t_floor)) throw DomainError("kernel evaluation below t_floor refused: t = " + short_number(t));
  if (!(cfg.eps_tail > 0.0 && cfg.eps_tail < 1.0)) throw ConfigError("eps_tail must lie in (0, 1)");
  const double c = p.shift();
  // sup |Phi_n|^2 grows like n^{2 max(a,b) + 1}; the geometric tail adds 1/(1 - e^{-t})
  const double q = 2.0 * std::max({p.alpha(), p.beta(), -0.5}) + 1.0 + extra_growth;
  const double log_eps = std::log(cfg.eps_tail) + std::log1p(-std::exp(-t));
  const auto tail_ok = [&](double n) { return -t * (n + c) + q * std::log(n + 1.0) < log_eps; };
  double n = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double next = std::max(1.0, std::ceil((q * std::log(n + 1.0) - log_eps) / t - c));
    if (next <= n) break;
    n = next;
    if (n > 4.0 * static_cast<double>(cfg.n_cap)) break;
  }
  while (!tail_ok(n) && n <= static_cast<double>(cfg.n_cap)) n += 1.0;
  if (n > static_cast<double>(cfg.n_cap))
    throw NumericError("series truncation cap reached at t = " + short_number(t));
  return static_cast<std::size_t>(n);
}

PairTables::PairTables(const JacobiParams& p) : params_(p) {}

void PairTables::compute(double theta, double phi, std::size_t count) {
  if (!base_ || base_->size() < count + 3) {
    base_ = recurrence_for(params_, count + 3);
    shifted_ = recurrence_for(params_.shifted(1), count + 3);
  }
  theta_.compute(*base_, *shifted_, theta, 2 * count);
  phi_.compute(*base_, *shifted_, phi, 2 * count);
  count_ = count;
}

void kernel_coefficients(const PairTables& tab, Part part, bool symmetrized, const KernelOrders& o, double* out) {
  const JacobiParams& p = tab.params();
  const Recurrence& rec = tab.base();
  const SymTable& th = tab.at_theta();
  const SymTable& ph = tab.at_phi();
  const std::size_t count = tab.count();
  const int n_ch = o.chain;
  const bool odd_chain = n_ch % 2 == 1;
  const double even_sign = symmetrized && (n_ch / 2) % 2 == 1 ? -1.0 : 1.0;
  const double odd_sign = symmetrized && ((n_ch + 1) / 2) % 2 == 1 ? -1.0 : 1.0;
  const double c = p.shift();
  const auto theta_factor = [&](std::size_t m) { return o.theta ? th.dphi(m) : th.phi(m); };
  const auto phi_factor = [&](std::size_t n) { return o.phi ? ph.dphi(n) : ph.phi(n); };
  for (std::size_t j = 0; j < count; ++j) {
    const double g = rec.sqrt_gap(j);
    const double mu_pow = ipow(g * g, n_ch / 2);
    double v = 0.0;
    if (part != Part::odd) {
      const std::size_t n = 2 * j;
      if (!odd_chain)
        v += even_sign * mu_pow * theta_factor(n) * phi_factor(n);
      else if (j > 0)
        v -= even_sign * mu_pow * g * theta_factor(n - 1) * phi_factor(n);
    }
    if (part != Part::even && j > 0) {
      const std::size_t n = 2 * j - 1;
      if (!odd_chain)
        v += odd_sign * mu_pow * theta_factor(n) * phi_factor(n);
      else
        v -= odd_sign * mu_pow * g * theta_factor(n + 1) * phi_factor(n);
    }
    if (o.t_order > 0) v *= ipow(-std::abs(static_cast<double>(j) + c), o.t_order);
    out[j] = v;
  }
}

void sum_exponential_series(const JacobiParams& p, const std::vector<const double*>& coefs,
                            const std::vector<double>& t, const std::vector<std::size_t>& terms,
                            std::vector<std::vector<double>>& out) {
  const std::size_t n_ch = coefs.size();
  const double c = p.shift();
  out.assign(n_ch, std::vector<double>(t.size(), 0.0));
  std::vector<std::array<double, 4>> acc(n_ch);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double ti = t[i];
    const std::size_t n = terms[i];
    if (n == 0) continue;
    const double e_first = std::exp(-ti * std::abs(c));
    for (std::size_t ch = 0; ch < n_ch; ++ch) acc[ch] = {coefs[ch][0] * e_first, 0.0, 0.0, 0.0};
    // j >= 1: exp(-t (j + c)) advanced geometrically, re-anchored per block
    const double r = std::exp(-ti);
    const double r4 = r * r * r * r;
    std::size_t j = 1;
    constexpr std::size_t kBlock = 256;
    while (j + 3 < n) {
      double e0 = std::exp(-ti * (static_cast<double>(j) + c));
      double e1 = e0 * r, e2 = e1 * r, e3 = e2 * r;
      const std::size_t stop = std::min(n - 3, j + kBlock);
      for (; j < stop; j += 4) {
        for (std::size_t ch = 0; ch < n_ch; ++ch) {
          const double* a = coefs[ch] + j;
          auto& s = acc[ch];
          s[0] += a[0] * e0;
          s[1] += a[1] * e1;
          s[2] += a[2] * e2;
          s[3] += a[3] * e3;
        }
        e0 *= r4;
        e1 *= r4;
        e2 *= r4;
        e3 *= r4;
      }
    }
    for (; j < n; ++j) {
      const double e = std::exp(-ti * (static_cast<double>(j) + c));
      for (std::size_t ch = 0; ch < n_ch; ++ch) acc[ch][0] += coefs[ch][j] * e;
    }
    for (std::size_t ch = 0; ch < n_ch; ++ch) out[ch][i] = (acc[ch][0] + acc[ch][1]) + (acc[ch][2] + acc[ch][3]);
  }
}

KernelHandle::KernelHandle(const JacobiParams& p, KernelKind kind, TruncationConfig cfg, OddPath odd_path)
    : params_(p), kind_(kind), cfg_(cfg), odd_path_(odd_path) {
  if (!(cfg.t_floor > 0.0)) throw ConfigError("t_floor must be positive");
}

double KernelHandle::derivative(const KernelOrders& o, double t, double theta, double phi) const {
  return path(o, {t}, theta, phi)[0];
}

namespace {

void validate_orders(const KernelOrders& o, KernelKind kind) {
  if (o.t_order < 0 || o.chain < 0) throw ConfigError("derivative orders must be nonnegative");
  if (o.theta < 0 || o.theta > 1 || o.phi < 0 || o.phi > 1)
    throw ConfigError("plain angle derivatives are limited to order 1");
  if (o.variant) {
    const bool ok = (kind == KernelKind::even || kind == KernelKind::nonsym || kind == KernelKind::fn_nonsym)
                        ? *o.variant == ChainVariant::even
                        : kind == KernelKind::odd && *o.variant == ChainVariant::odd;
    if (!ok) throw ConfigError("chain variant does not match the kernel part");
  }
}

// Series of one part with plain derivative orders (a, b) at the two angles.
std::vector<std::vector<double>> part_series(const JacobiParams& p, Part part, bool symmetrized,
                                             const KernelOrders& o, const std::vector<double>& t, double theta,
                                             double phi, const TruncationConfig& cfg, bool absolute) {
  std::vector<std::size_t> terms(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) terms[i] = truncation_terms(p, t[i], cfg, derivative_growth(o));
  const std::size_t count = *std::max_element(terms.begin(), terms.end());
  PairTables tab(p);
  tab.compute(theta, phi, count);
  std::vector<std::vector<double>> coefs;
  std::vector<const double*> ptr;
  for (int a = 0; a <= o.theta; ++a)
    for (int b = 0; b <= o.phi; ++b) {
      KernelOrders q = o;
      q.theta = a;
      q.phi = b;
      coefs.emplace_back(count);
      kernel_coefficients(tab, part, symmetrized, q, coefs.back().data());
      if (absolute)
        for (double& c : coefs.back()) c = std::abs(c);
    }
  for (const auto& v : coefs) ptr.push_back(v.data());
  std::vector<std::vector<double>> out;
  sum_exponential_series(p, ptr, t, terms, out);
  return out;  // index a * (phi + 1) + b
}

}  // namespace

std::vector<double> KernelHandle::path(const KernelOrders& o, const std::vector<double>& t, double theta,
                                       double phi) const {
  return evaluate(o, t, theta, phi, false);
}

std::vector<double> KernelHandle::magnitude(const KernelOrders& o, const std::vector<double>& t, double theta,
                                            double phi) const {
  return evaluate(o, t, theta, phi, true);
}

std::vector<double> KernelHandle::evaluate(const KernelOrders& o, const std::vector<double>& t, double theta,
                                           double phi, bool absolute) const {
  validate_orders(o, kind_);
  if (t.empty()) return {};
  const bool half = kind_ == KernelKind::nonsym || kind_ == KernelKind::fn_nonsym;
  require_angle(theta, half);
  require_angle(phi, half);

  if (kind_ == KernelKind::odd && odd_path_ == OddPath::shift && o.chain == 0 && o.theta == 0 && o.phi == 0) {
    KernelOrders q;
    q.t_order = o.t_order;
    auto s = part_series(params_.shifted(1), Part::even, false, q, t, theta, phi, cfg_, absolute);
    std::vector<double> out = s[0];
    double f = 0.25 * std::sin(theta) * std::sin(phi);
    if (absolute) f = std::abs(f);
    for (double& v : out) v *= f;
    return out;
  }

  Part part = Part::both;
  bool symmetrized = false;
  double scale = 1.0;
  const bool fn = kind_ == KernelKind::fn_nonsym || kind_ == KernelKind::fn_sym;
  switch (kind_) {
    case KernelKind::sym:
    case KernelKind::fn_sym:
      symmetrized = true;
      break;
    case KernelKind::even:
      part = Part::even;
      break;
    case KernelKind::odd:
      part = Part::odd;
      break;
    case KernelKind::nonsym:
    case KernelKind::fn_nonsym:
      part = Part::even;
      scale = 2.0;
      break;
  }
  auto s = part_series(params_, part, symmetrized, o, t, theta, phi, cfg_, absolute);
  std::vector<double> out(t.size(), 0.0);
  if (!fn) {
    const std::size_t idx = static_cast<std::size_t>(o.theta * (o.phi + 1) + o.phi);
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = scale * s[idx][i];
    return out;
  }
  // psi(theta) psi(phi) G: plain derivatives pick up psi'/psi = rho/2
  const double w = psi(params_, theta) * psi(params_, phi);
  const double rt = o.theta ? 0.5 * rho(params_, theta) : 0.0;
  const double rp = o.phi ? 0.5 * rho(params_, phi) : 0.0;
  const int nb = o.phi + 1;
  for (std::size_t i = 0; i < t.size(); ++i) {
    double v = 0.0;
    for (int a = 0; a <= o.theta; ++a)
      for (int b = 0; b <= o.phi; ++b) {
        const double fa = (o.theta && a == 0) ? rt : 1.0;
        const double fb = (o.phi && b == 0) ? rp : 1.0;
        const double term = fa * fb * s[static_cast<std::size_t>(a * nb + b)][i];
        v += absolute ? std::abs(term) : term;
      }
    out[i] = scale * (absolute ? std::abs(w) : w) * v;
  }
  return out;
}

double poisson_kernel(const KernelHandle& h, double t, double theta, double phi) { return h.value(t, theta, phi); }

double kernel_derivative(const KernelHandle& h, const KernelOrders& o, double t, double theta, double phi) {
  return h.derivative(o, t, theta, phi);
}

namespace {

TGrid integration_grid(const TruncationConfig& cfg, const TIntegration& ti, double weight_exponent) {
  const double t_min = ti.t_min > 0.0 ? ti.t_min : cfg.t_floor;
  if (t_min < cfg.t_floor) throw DomainError("t-integration below t_floor refused");
  return make_tgrid(t_min, ti.t_max, ti.points_per_decade, weight_exponent);
}

void check_decay(const std::vector<double>& s, const TGrid& g, double rate) {
  // the tail of the integrand must fall off at least like exp(-rate t)
  const std::size_t last = g.size() - 1;
  std::size_t mid = last;
  while (mid > 0 && g.nodes[mid] > 0.5 * g.t_max) --mid;
  const double expected = std::abs(s[mid]) * std::exp(-rate * (g.nodes[last] - g.nodes[mid]));
  if (std::abs(s[last]) > 1.001 * expected + 1e-250)
    throw NumericError("t-integrand fails its expected exponential decay");
}

}  // namespace

double riesz_kernel(const JacobiParams& p, int n, double theta, double phi, const TruncationConfig& cfg,
                    int theta_deriv, int phi_deriv, const TIntegration& ti) {
  if (n < 1) throw ConfigError("Riesz order must be >= 1");
  if (theta == phi) throw DomainError("Riesz kernel is singular on the diagonal");
  require_angle(theta, false);
  require_angle(phi, false);
  const TGrid g = integration_grid(cfg, ti, n);
  KernelOrders o;
  o.chain = n;
  o.variant = ChainVariant::odd;
  o.theta = theta_deriv;
  o.phi = phi_deriv;
  const KernelHandle h(p, KernelKind::odd, cfg, OddPath::series);
  const auto s = h.path(o, g.nodes, theta, phi);
  check_decay(s, g, sqrt_lambda(p, 1));
  double acc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) acc += g.weights[i] * s[i];
  return acc / std::tgamma(n);
}

double DiscreteMeasure::weighted_variation(const JacobiParams& p) const {
  double v = 0.0;
  for (const auto& [t, a] : atoms) v += std::abs(a) * std::exp(-t * std::sqrt(p.lambda0()));
  return v;
}

std::complex<double> DiscreteMeasure::transform(double z) const {
  std::complex<double> m = 0.0;
  for (const auto& [t, a] : atoms) m += a * std::exp(-t * z);
  return m;
}

double multiplier_kernel(const JacobiParams& p, const LaplaceMultiplier& m, double theta, double phi,
                         const TruncationConfig& cfg, int theta_deriv, int phi_deriv, const TIntegration& ti) {
  if (!std::isfinite(m.sup_bound)) throw ConfigError("Laplace multiplier needs a finite sup bound");
  if (theta == phi) throw DomainError("multiplier kernel is singular on the diagonal");
  const TGrid g = integration_grid(cfg, ti, 1.0);
  KernelOrders o;
  o.t_order = 1;
  o.theta = theta_deriv;
  o.phi = phi_deriv;
  const KernelHandle h(p, KernelKind::odd, cfg, OddPath::series);
  const auto s = h.path(o, g.nodes, theta, phi);
  double acc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double v = m.phi(g.nodes[i]);
    if (!(std::abs(v) <= m.sup_bound)) throw ConfigError("Laplace multiplier exceeds its declared sup bound");
    acc += g.weights[i] * s[i] * v;
  }
  return -acc;
}

std::complex<double> multiplier_kernel(const JacobiParams& p, const DiscreteMeasure& nu, double theta, double phi,
                                       const TruncationConfig& cfg, int theta_deriv, int phi_deriv) {
  if (nu.atoms.empty()) return 0.0;
  std::vector<double> t;
  for (const auto& a : nu.atoms) t.push_back(a.first);
  KernelOrders o;
  o.theta = theta_deriv;
  o.phi = phi_deriv;
  const KernelHandle h(p, KernelKind::odd, cfg, theta_deriv || phi_deriv ? OddPath::series : OddPath::shift);
  const auto s = h.path(o, t, theta, phi);
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) acc += nu.atoms[i].second * s[i];
  return acc;
}

std::vector<double> laplace_coefficients(const JacobiParams& p, int k) {
  // iterate c <- (d_t^2 - lambda_0) c, stored by powers of d_t^2
  std::vector<double> poly{1.0};
  for (int i = 0; i < k; ++i) {
    std::vector<double> next(poly.size() + 1, 0.0);
    for (std::size_t j = 0; j < poly.size(); ++j) {
      next[j + 1] += poly[j];
      next[j] -= p.lambda0() * poly[j];
    }
    poly = next;
  }
  // c_j multiplies d_t^{2(k-j)}
  std::reverse(poly.begin(), poly.end());
  return poly;
}

}  // namespace symjac
