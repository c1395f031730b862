#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "symjac/jet.hpp"

namespace symjac {

// Type parameters (alpha, beta), both > -1.
class JacobiParams {
 public:
  JacobiParams(double alpha, double beta);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  JacobiParams shifted(int k) const { return {alpha_ + k, beta_ + k}; }

  // (alpha+beta+1)/2, so that lambda_n = (n + shift)^2.
  double shift() const { return 0.5 * (alpha_ + beta_ + 1.0); }
  double lambda0() const { return shift() * shift(); }

  bool operator==(const JacobiParams&) const = default;

 private:
  double alpha_;
  double beta_;
};

struct EigenData {
  std::size_t n;
  double lambda;
  std::size_t half_index;
};

EigenData eigen(const JacobiParams& p, std::size_t n);
inline std::size_t half_index(std::size_t n) { return (n + 1) / 2; }
// sqrt(lambda_n) = |n + (alpha+beta+1)/2|
double sqrt_lambda(const JacobiParams& p, std::size_t n);
// lambda_n - lambda_0 = n (n + alpha + beta + 1)
double lambda_gap(const JacobiParams& p, std::size_t n);

// |sin(theta/2)|^{alpha+1/2} cos(theta/2)^{beta+1/2} on (-pi, pi)
double psi(const JacobiParams& p, double theta);
Jet psi_jet(const JacobiParams& p, double theta, int order);
// (alpha - beta + (alpha+beta+1) cos theta) / sin theta = 2 psi'/psi
double rho(const JacobiParams& p, double theta);
Jet rho_jet(const JacobiParams& p, double theta, int order);

// Classical Jacobi polynomial by forward recurrence.
double jacobi_poly(const JacobiParams& p, std::size_t n, double x);
// c_n with c_n P_n(cos) of unit norm in L^2(dmu+).
double norm_constant(const JacobiParams& p, std::size_t n);
// Total mass of dmu+ = B(alpha+1, beta+1).
double total_mass_plus(const JacobiParams& p);

// Three-term recurrence x p_n = a_{n+1} p_{n+1} + b_n p_n + a_n p_{n-1} of the
// orthonormal polynomials, tabulated up to degree `count - 1`.
class Recurrence {
 public:
  Recurrence(const JacobiParams& p, std::size_t count);

  const JacobiParams& params() const { return params_; }
  std::size_t size() const { return b_.size(); }
  double p0() const { return p0_; }
  double a(std::size_t n) const { return a_[n]; }
  double b(std::size_t n) const { return b_[n]; }
  // sqrt(n (n + alpha + beta + 1))
  double sqrt_gap(std::size_t n) const { return sqrt_gap_[n]; }

  // p_0..p_{count-1} at x (count <= size()).
  void values(double x, std::size_t count, double* out) const;
  // Jets in theta of p_k(cos theta), k < count.
  std::vector<Jet> jets(double theta, std::size_t count, int order) const;

 private:
  JacobiParams params_;
  double p0_;
  std::vector<double> a_, inv_a_, b_, sqrt_gap_;
};

// Shared, lazily grown recurrence tables; thread-safe.
std::shared_ptr<const Recurrence> recurrence_for(const JacobiParams& p, std::size_t count);

enum class BasisKind { trig_poly, jacobi_fn, sym_poly, sym_fn };
enum class Parity { even, odd };

struct BasisElement {
  JacobiParams params;
  std::size_t index;
  BasisKind kind;

  Parity parity() const;
};

// Pointwise value; throws DomainError outside the natural domain.
double eval_basis(const BasisElement& e, double theta);
Jet eval_basis_jet(const BasisElement& e, double theta, int order);
// Jets of elements 0..count-1 of one kind at theta.
std::vector<Jet> basis_jets(const JacobiParams& p, BasisKind kind, double theta, std::size_t count, int order);

// Expansions of a function about theta and about -theta; the symmetrized
// derivatives need both because they act on even and odd parts separately.
struct PointJets {
  Jet at;
  Jet mirror;
};

// Jets of a function with known parity.
PointJets with_parity(const Jet& at, Parity parity);

// delta = d/dtheta, delta* = -d/dtheta - rho, D = d - rho/2, D* = -d - rho/2,
// sym = f' + rho f_odd, sym_fn = f' - (rho/2) f(-.)
enum class DerivKind { delta, delta_star, D, D_star, sym, sym_fn };

PointJets apply_derivative(DerivKind k, const JacobiParams& p, double theta, const PointJets& f);
double apply_derivative(DerivKind k, const BasisElement& e, double theta);

enum class ChainVariant { even, odd };
// even: ...delta delta* delta (N factors, delta rightmost); odd: ...delta* delta delta*.
// fn = true uses D, D* in place of delta, delta*.
PointJets interlaced_chain(ChainVariant v, int n, const JacobiParams& p, double theta, const PointJets& f,
                           bool fn = false);

// Closed-form action of the symmetrized derivative on the symmetrized basis:
// sym^N Phi_n = coef * Phi_index.
struct BasisImage {
  double coef;
  std::size_t index;
};
BasisImage sym_power_image(const JacobiParams& p, int n_derivs, std::size_t n);
// Interlaced chain on Phi_n (even chain for even n, odd chain for odd n).
BasisImage chain_image(const JacobiParams& p, int n_derivs, std::size_t n);

// Values and first theta-derivatives of Phi_0..Phi_{count-1} at one angle.
class SymTable {
 public:
  SymTable() = default;
  void compute(const Recurrence& base, const Recurrence& shifted, double theta, std::size_t count);

  std::size_t size() const { return count_; }
  double phi(std::size_t n) const {
    const std::size_t k = n / 2;
    return (n % 2 == 0) ? P_[k] * kInvSqrt2 : sin_ * Q_[k] * kHalfInvSqrt2;
  }
  double dphi(std::size_t n) const;
  double poly(std::size_t k) const { return P_[k]; }
  double shifted_poly(std::size_t k) const { return Q_[k]; }
  double theta() const { return theta_; }

  static constexpr double kInvSqrt2 = 0.70710678118654752440;
  static constexpr double kHalfInvSqrt2 = 0.35355339059327376220;

 private:
  double theta_ = 0.0, sin_ = 0.0, g_ = 0.0;
  std::size_t count_ = 0;
  const Recurrence* base_ = nullptr;
  std::vector<double> P_, Q_;
};

}  // namespace symjac
