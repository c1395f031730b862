#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "symjac/kernel.hpp"
#include "symjac/quad.hpp"

namespace symjac {

enum class OperatorKind { semigroup, maximal, square, riesz, mult_laplace, mult_stieltjes };
std::string to_string(OperatorKind k);
OperatorKind operator_kind_from_string(const std::string& s);

// How N theta-derivatives act on basis elements: the symmetrized power (D^N on
// (-pi,pi)), the interlaced chain ...delta delta* delta, or the plain power
// d^N (conjugated by Psi in the function setting).
enum class DerivativeForm { symmetrized, interlaced, plain };

// t-sampling for the maximal operator and the quadrature form of square functions.
struct TSampling {
  double t_min = 1e-3;
  double t_max = 40.0;
  int points_per_decade = 16;
};

struct OperatorSpec {
  OperatorKind kind = OperatorKind::semigroup;
  double t = 1.0;  // semigroup time
  int M = 0;       // t-derivatives (square)
  int N = 0;       // theta-derivatives (square, riesz)
  std::optional<DerivativeForm> form;  // default: symmetrized on (-pi,pi), interlaced on (0,pi)
  LaplaceMultiplier laplace;
  DiscreteMeasure stieltjes;
  TSampling sampling;
  // square functions: t-quadrature instead of the exact pairwise closed form
  bool square_by_quadrature = false;

  void validate() const;
};

// m_phi(z) = int_0^inf z e^{-tz} phi(t) dt, with m_phi(0) = 0.
double laplace_multiplier_value(const LaplaceMultiplier& m, double z);

struct ApplyOptions {
  // expansion length; default keeps every element integrated exactly by the grid
  std::optional<std::size_t> terms;
  // relative L^2 energy allowed outside the kept span
  double tail_tolerance = 1e-8;
};

// First K+1 coefficients <f, B_n> in the setting's orthonormal basis.
std::vector<std::complex<double>> expand(const GridFunction& f, std::size_t K);
// Largest K for which expand is exact on the grid.
std::size_t resolution_limit(const ThetaGrid& g, Setting s);

// The operator in f's own setting. Settings on (0,pi) give the non-symmetrized
// operators: poly+ with the polynomial system, fn+ with the Jacobi functions.
GridFunction apply(const OperatorSpec& spec, const GridFunction& f, const ApplyOptions& opt = {});

// The restricted operators of the even (H_t, R_N, ...) or odd (~H_t, ~R_N, ...)
// part, on a poly+ function: series over Phi_{2n} or Phi_{2n+1} with the
// unnormalized <f, Phi_k>_{dmu+} coefficients and the interlaced chains.
GridFunction apply_restricted(Part which, const OperatorSpec& spec, const GridFunction& f,
                              const ApplyOptions& opt = {});

// Function-setting operator computed through the polynomial one:
// Psi * T(f / Psi).
GridFunction transfer_function_setting(const OperatorSpec& spec, const GridFunction& f,
                                       const ApplyOptions& opt = {});

// Operators (a)-(f) of the non-symmetrized function setting.
enum class NonsymOperator { riesz, interlaced_riesz, multiplier, maximal, square, interlaced_square };
NonsymOperator nonsym_operator_from_string(const std::string& s);  // "a".."f"
GridFunction nonsym_operator(NonsymOperator which, OperatorSpec spec, const GridFunction& f,
                             const ApplyOptions& opt = {});

}  // namespace symjac
