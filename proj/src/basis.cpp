#include "symjac/basis.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>

#include "symjac/errors.hpp"

namespace symjac {

namespace {

constexpr double kPi = std::numbers::pi;

void require_open_circle(double theta) {
  if (!(std::abs(theta) < kPi)) throw DomainError("angle outside (-pi, pi): " + std::to_string(theta));
}

void require_half_interval(double theta) {
  if (!(theta > 0.0 && theta < kPi)) throw DomainError("angle outside (0, pi): " + std::to_string(theta));
}

}  // namespace

JacobiParams::JacobiParams(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  if (!(alpha > -1.0) || !(beta > -1.0) || !std::isfinite(alpha) || !std::isfinite(beta))
    throw DomainError("type parameters must satisfy alpha, beta > -1");
}

EigenData eigen(const JacobiParams& p, std::size_t n) {
  const double s = static_cast<double>(n) + p.shift();
  return {n, s * s, half_index(n)};
}

double sqrt_lambda(const JacobiParams& p, std::size_t n) { return std::abs(static_cast<double>(n) + p.shift()); }

double lambda_gap(const JacobiParams& p, std::size_t n) {
  const double x = static_cast<double>(n);
  return x * (x + p.alpha() + p.beta() + 1.0);
}

double psi(const JacobiParams& p, double theta) {
  require_open_circle(theta);
  return std::pow(std::abs(std::sin(0.5 * theta)), p.alpha() + 0.5) * std::pow(std::cos(0.5 * theta), p.beta() + 0.5);
}

Jet psi_jet(const JacobiParams& p, double theta, int order) {
  require_open_circle(theta);
  if (theta == 0.0) throw DomainError("psi is not smooth at 0");
  const Jet u = Jet::variable(order, theta) * 0.5;
  Jet s = sin(u);
  if (s.value() < 0.0) s *= -1.0;
  return exp(log(s) * (p.alpha() + 0.5) + log(cos(u)) * (p.beta() + 0.5));
}

double rho(const JacobiParams& p, double theta) {
  const double s = std::sin(theta);
  if (s == 0.0 || !(std::abs(theta) < kPi)) throw DomainError("rho is singular at 0 and +-pi");
  return (p.alpha() - p.beta() + (p.alpha() + p.beta() + 1.0) * std::cos(theta)) / s;
}

Jet rho_jet(const JacobiParams& p, double theta, int order) {
  if (std::sin(theta) == 0.0 || !(std::abs(theta) < kPi)) throw DomainError("rho is singular at 0 and +-pi");
  const Jet x = Jet::variable(order, theta);
  return (cos(x) * (p.alpha() + p.beta() + 1.0) + (p.alpha() - p.beta())) / sin(x);
}

double jacobi_poly(const JacobiParams& p, std::size_t n, double x) {
  if (!(std::abs(x) <= 1.0)) throw DomainError("jacobi_poly: |x| > 1");
  const double a = p.alpha(), b = p.beta();
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = (a + 1.0) + 0.5 * (a + b + 2.0) * (x - 1.0);
  for (std::size_t k = 2; k <= n; ++k) {
    const double m = static_cast<double>(k);
    const double s = 2.0 * m + a + b;
    const double a1 = 2.0 * m * (m + a + b) * (s - 2.0);
    const double a2 = (s - 1.0) * (a * a - b * b);
    const double a3 = (s - 2.0) * (s - 1.0) * s;
    const double a4 = 2.0 * (m + a - 1.0) * (m + b - 1.0) * s;
    const double next = ((a2 + a3 * x) * cur - a4 * prev) / a1;
    prev = cur;
    cur = next;
  }
  return cur;
}

double total_mass_plus(const JacobiParams& p) {
  return std::exp(std::lgamma(p.alpha() + 1.0) + std::lgamma(p.beta() + 1.0) - std::lgamma(p.alpha() + p.beta() + 2.0));
}

double norm_constant(const JacobiParams& p, std::size_t n) {
  if (n == 0) return 1.0 / std::sqrt(total_mass_plus(p));
  const double m = static_cast<double>(n), a = p.alpha(), b = p.beta();
  const double log_c2 = std::log(2.0 * m + a + b + 1.0) + std::lgamma(m + a + b + 1.0) + std::lgamma(m + 1.0) -
                        std::lgamma(m + a + 1.0) - std::lgamma(m + b + 1.0);
  return std::exp(0.5 * log_c2);
}

Recurrence::Recurrence(const JacobiParams& p, std::size_t count)
    : params_(p), p0_(1.0 / std::sqrt(total_mass_plus(p))) {
  const double a = p.alpha(), b = p.beta();
  const std::size_t n_max = std::max<std::size_t>(count, 2);
  a_.assign(n_max + 1, 0.0);
  inv_a_.assign(n_max + 1, 0.0);
  b_.assign(n_max, 0.0);
  sqrt_gap_.assign(n_max + 1, 0.0);
  b_[0] = (b - a) / (a + b + 2.0);
  for (std::size_t n = 1; n < n_max; ++n) {
    const double s = 2.0 * static_cast<double>(n) + a + b;
    b_[n] = (b * b - a * a) / (s * (s + 2.0));
  }
  a_[1] = std::sqrt(4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b) * (2.0 + a + b) * (3.0 + a + b)));
  for (std::size_t n = 2; n <= n_max; ++n) {
    const double m = static_cast<double>(n);
    const double s = 2.0 * m + a + b;
    a_[n] = std::sqrt(4.0 * m * (m + a) * (m + b) * (m + a + b) / (s * s * (s + 1.0) * (s - 1.0)));
  }
  for (std::size_t n = 1; n <= n_max; ++n) inv_a_[n] = 1.0 / a_[n];
  for (std::size_t n = 0; n <= n_max; ++n) sqrt_gap_[n] = std::sqrt(lambda_gap(p, n));
}

void Recurrence::values(double x, std::size_t count, double* out) const {
  if (count == 0) return;
  if (count > size()) throw NumericError("recurrence table too short");
  double p_prev = 0.0, p_cur = p0_;
  out[0] = p_cur;
  for (std::size_t n = 0; n + 1 < count; ++n) {
    const double next = ((x - b_[n]) * p_cur - a_[n] * p_prev) * inv_a_[n + 1];
    p_prev = p_cur;
    p_cur = next;
    out[n + 1] = p_cur;
  }
}

std::vector<Jet> Recurrence::jets(double theta, std::size_t count, int order) const {
  if (count > size()) throw NumericError("recurrence table too short");
  std::vector<Jet> out;
  out.reserve(count);
  if (count == 0) return out;
  const Jet x = cos(Jet::variable(order, theta));
  out.emplace_back(order, p0_);
  Jet prev(order, 0.0);
  for (std::size_t n = 0; n + 1 < count; ++n) {
    Jet next = ((x - b_[n]) * out[n] - prev * a_[n]) * inv_a_[n + 1];
    prev = out[n];
    out.push_back(std::move(next));
  }
  return out;
}

std::shared_ptr<const Recurrence> recurrence_for(const JacobiParams& p, std::size_t count) {
  static std::mutex mutex;
  static std::map<std::pair<double, double>, std::shared_ptr<const Recurrence>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{p.alpha(), p.beta()}];
  if (!slot || slot->size() < count) {
    const std::size_t grown = std::max(count, slot ? 2 * slot->size() : std::size_t{64});
    slot = std::make_shared<const Recurrence>(p, grown);
  }
  return slot;
}

Parity BasisElement::parity() const {
  if (kind == BasisKind::trig_poly || kind == BasisKind::jacobi_fn) return Parity::even;
  return index % 2 == 0 ? Parity::even : Parity::odd;
}

std::vector<Jet> basis_jets(const JacobiParams& p, BasisKind kind, double theta, std::size_t count, int order) {
  if (count == 0) return {};
  std::vector<Jet> out;
  if (kind == BasisKind::trig_poly || kind == BasisKind::jacobi_fn) {
    out = recurrence_for(p, count)->jets(theta, count, order);
    if (kind == BasisKind::jacobi_fn) {
      const Jet w = psi_jet(p, theta, order);
      for (Jet& j : out) j = j * w;
    }
    return out;
  }
  const std::size_t half = (count + 1) / 2;
  const auto P = recurrence_for(p, half)->jets(theta, half, order);
  const auto Q = recurrence_for(p.shifted(1), half)->jets(theta, half, order);
  const Jet s = sin(Jet::variable(order, theta));
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    const std::size_t k = n / 2;
    out.push_back(n % 2 == 0 ? P[k] * SymTable::kInvSqrt2 : s * Q[k] * SymTable::kHalfInvSqrt2);
  }
  if (kind == BasisKind::sym_fn) {
    const Jet w = psi_jet(p, theta, order);
    for (Jet& j : out) j = j * w;
  }
  return out;
}

Jet eval_basis_jet(const BasisElement& e, double theta, int order) {
  if (e.kind == BasisKind::trig_poly || e.kind == BasisKind::jacobi_fn)
    require_half_interval(theta);
  else
    require_open_circle(theta);
  return basis_jets(e.params, e.kind, theta, e.index + 1, order)[e.index];
}

double eval_basis(const BasisElement& e, double theta) {
  const JacobiParams& p = e.params;
  switch (e.kind) {
    case BasisKind::trig_poly:
    case BasisKind::jacobi_fn: {
      require_half_interval(theta);
      std::vector<double> v(e.index + 1);
      recurrence_for(p, e.index + 1)->values(std::cos(theta), e.index + 1, v.data());
      return e.kind == BasisKind::trig_poly ? v.back() : psi(p, theta) * v.back();
    }
    case BasisKind::sym_poly:
    case BasisKind::sym_fn: {
      require_open_circle(theta);
      const std::size_t k = e.index / 2;
      std::vector<double> v(k + 1);
      double phi;
      if (e.index % 2 == 0) {
        recurrence_for(p, k + 1)->values(std::cos(theta), k + 1, v.data());
        phi = v.back() * SymTable::kInvSqrt2;
      } else {
        recurrence_for(p.shifted(1), k + 1)->values(std::cos(theta), k + 1, v.data());
        phi = std::sin(theta) * v.back() * SymTable::kHalfInvSqrt2;
      }
      if (e.kind == BasisKind::sym_poly) return phi;
      if (theta == 0.0) {
        // limit of psi * Phi_n at 0
        if (e.index % 2 == 1 || p.alpha() > -0.5) return 0.0;
        if (p.alpha() == -0.5) return phi;
        throw DomainError("Theta_n has no finite value at 0 for alpha < -1/2");
      }
      return psi(p, theta) * phi;
    }
  }
  throw DomainError("unknown basis kind");
}

PointJets with_parity(const Jet& at, Parity parity) {
  Jet mirror = at.reflect();
  if (parity == Parity::odd) mirror *= -1.0;
  return {at, std::move(mirror)};
}

PointJets apply_derivative(DerivKind k, const JacobiParams& p, double theta, const PointJets& f) {
  const int order = f.at.order();
  if (order < 1) throw ConfigError("derivative of an order-0 jet");
  const Jet d_at = f.at.differentiate();
  const Jet d_mirror = f.mirror.differentiate();
  if (k == DerivKind::delta) return {d_at, d_mirror};
  const Jet r_at = rho_jet(p, theta, order - 1);
  const Jet r_mirror = -r_at.reflect();
  switch (k) {
    case DerivKind::delta_star:
      return {-d_at - r_at * f.at, -d_mirror - r_mirror * f.mirror};
    case DerivKind::D:
      return {d_at - r_at * f.at * 0.5, d_mirror - r_mirror * f.mirror * 0.5};
    case DerivKind::D_star:
      return {-d_at - r_at * f.at * 0.5, -d_mirror - r_mirror * f.mirror * 0.5};
    case DerivKind::sym: {
      const Jet odd_at = (f.at - f.mirror.reflect()) * 0.5;
      const Jet odd_mirror = (f.mirror - f.at.reflect()) * 0.5;
      return {d_at + r_at * odd_at, d_mirror + r_mirror * odd_mirror};
    }
    case DerivKind::sym_fn:
      return {d_at - r_at * f.mirror.reflect() * 0.5, d_mirror - r_mirror * f.at.reflect() * 0.5};
    default:
      break;
  }
  throw ConfigError("unknown derivative kind");
}

double apply_derivative(DerivKind k, const BasisElement& e, double theta) {
  const Jet j = eval_basis_jet(e, theta, 1);
  return apply_derivative(k, e.params, theta, with_parity(j, e.parity())).at.value();
}

PointJets interlaced_chain(ChainVariant v, int n, const JacobiParams& p, double theta, const PointJets& f, bool fn) {
  if (n < 0) throw ConfigError("chain length must be nonnegative");
  PointJets g = f;
  const DerivKind plain = fn ? DerivKind::D : DerivKind::delta;
  const DerivKind adjoint = fn ? DerivKind::D_star : DerivKind::delta_star;
  for (int i = 0; i < n; ++i) {
    const bool use_plain = (v == ChainVariant::even) == (i % 2 == 0);
    g = apply_derivative(use_plain ? plain : adjoint, p, theta, g);
  }
  return g;
}

BasisImage sym_power_image(const JacobiParams& p, int n_derivs, std::size_t n) {
  BasisImage img{1.0, n};
  for (int i = 0; i < n_derivs; ++i) {
    const std::size_t k = img.index / 2;
    if (img.index % 2 == 0) {
      if (k == 0) return {0.0, 0};
      img = {-img.coef * std::sqrt(lambda_gap(p, k)), img.index - 1};
    } else {
      img = {img.coef * std::sqrt(lambda_gap(p, k + 1)), img.index + 1};
    }
  }
  return img;
}

BasisImage chain_image(const JacobiParams& p, int n_derivs, std::size_t n) {
  BasisImage img = sym_power_image(p, n_derivs, n);
  const int flips = (n % 2 == 0) ? n_derivs / 2 : (n_derivs + 1) / 2;
  if (flips % 2 == 1) img.coef = -img.coef;
  return img;
}

void SymTable::compute(const Recurrence& base, const Recurrence& shifted, double theta, std::size_t count) {
  const JacobiParams& p = base.params();
  theta_ = theta;
  sin_ = std::sin(theta);
  const double c = std::cos(theta);
  g_ = p.alpha() - p.beta() + (p.alpha() + p.beta() + 1.0) * c;
  count_ = count;
  base_ = &base;
  const std::size_t k_max = count / 2 + 1;
  P_.resize(k_max + 1);
  Q_.resize(k_max + 1);
  base.values(c, k_max + 1, P_.data());
  shifted.values(c, k_max + 1, Q_.data());
}

double SymTable::dphi(std::size_t n) const {
  const std::size_t k = n / 2;
  if (n % 2 == 0) return k == 0 ? 0.0 : -base_->sqrt_gap(k) * sin_ * Q_[k - 1] * kHalfInvSqrt2;
  return base_->sqrt_gap(k + 1) * P_[k + 1] * kInvSqrt2 - g_ * Q_[k] * kHalfInvSqrt2;
}

}  // namespace symjac
