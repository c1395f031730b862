#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "symjac/basis.hpp"
#include "symjac/quad.hpp"

namespace symjac {

struct TruncationConfig {
  double eps_tail = 1e-10;
  // Large enough for t_floor = 1e-4 with alpha, beta up to ~4 and a few derivatives.
  std::size_t n_cap = 4'000'000;
  double t_floor = 1e-4;
};

struct KernelOrders {
  int t_order = 0;  // d/dt applications
  int chain = 0;    // interlaced (or symmetrized) derivative chain length in theta
  std::optional<ChainVariant> variant;
  int theta = 0;  // plain d/dtheta after the chain: 0 or 1
  int phi = 0;    // plain d/dphi: 0 or 1
};

// Number of pair indices k kept at time t: the smallest N with
// exp(-t (N + (a+b+1)/2)) (N+1)^q / (1 - exp(-t)) < eps_tail,
// q = 2 max(a, b, -1/2) + 1.
// `extra_growth` raises the polynomial exponent for differentiated series.
std::size_t truncation_terms(const JacobiParams& p, double t, const TruncationConfig& cfg, double extra_growth = 0.0);
// Growth exponent added for a derivative request.
double derivative_growth(const KernelOrders& o);

// sym: full symmetrized kernel; even / odd: its even and odd parts;
// nonsym: non-symmetrized polynomial kernel on (0,pi)^2;
// fn_nonsym / fn_sym: the Jacobi-function counterparts (psi-weighted).
enum class KernelKind { sym, even, odd, nonsym, fn_nonsym, fn_sym };
enum class OddPath { shift, series };



// Series representation sum_j c_j exp(-t s_j), s_j = |j + (a+b+1)/2|: index j
// collects Phi_{2j} (even part) and Phi_{2j-1} (odd part), both with
// eigenvalue lambda_j.
class PairTables {
 public:
  explicit PairTables(const JacobiParams& p);
  const JacobiParams& params() const { return params_; }
  // Tables for pair indices j < count at the two angles.
  void compute(double theta, double phi, std::size_t count);
  std::size_t count() const { return count_; }
  const SymTable& at_theta() const { return theta_; }
  const SymTable& at_phi() const { return phi_; }
  const Recurrence& base() const { return *base_; }

 private:
  JacobiParams params_;
  std::shared_ptr<const Recurrence> base_, shifted_;
  SymTable theta_, phi_;
  std::size_t count_ = 0;
};

enum class Part { even, odd, both };

// Coefficients c_j (j < count) for d_t^M [chain_N, then d_theta^a] d_phi^b
// of the chosen part; `symmetrized` picks the symmetrized derivative power
// over the interlaced chains.
void kernel_coefficients(const PairTables& tab, Part part, bool symmetrized, const KernelOrders& o, double* out);

// out[c][i] = sum_{j < terms[i]} coefs[c][j] exp(-t[i] s_j)
void sum_exponential_series(const JacobiParams& p, const std::vector<const double*>& coefs,
                            const std::vector<double>& t, const std::vector<std::size_t>& terms,
                            std::vector<std::vector<double>>& out);

class KernelHandle {
 public:
  KernelHandle(const JacobiParams& p, KernelKind kind, TruncationConfig cfg = {}, OddPath odd_path = OddPath::shift);

  const JacobiParams& params() const { return params_; }
  KernelKind kind() const { return kind_; }
  const TruncationConfig& config() const { return cfg_; }

  double value(double t, double theta, double phi) const { return derivative({}, t, theta, phi); }
  double derivative(const KernelOrders& o, double t, double theta, double phi) const;
  // Values at several times; the basis tables are shared.
  std::vector<double> path(const KernelOrders& o, const std::vector<double>& t, double theta, double phi) const;
  // The same truncated series with every term replaced by its absolute value:
  // the scale against which rounding in `path` should be judged.
  std::vector<double> magnitude(const KernelOrders& o, const std::vector<double>& t, double theta,
                                double phi) const;

 private:
  std::vector<double> evaluate(const KernelOrders& o, const std::vector<double>& t, double theta, double phi,
                               bool absolute) const;

  JacobiParams params_;
  KernelKind kind_;
  TruncationConfig cfg_;
  OddPath odd_path_;
};

double poisson_kernel(const KernelHandle& h, double t, double theta, double phi);
double kernel_derivative(const KernelHandle& h, const KernelOrders& o, double t, double theta, double phi);

// t-quadrature options for kernels defined by integrals in t.
struct TIntegration {
  double t_min = 0.0;  // 0 means cfg.t_floor
  double t_max = 40.0;
  int points_per_decade = 16;
};

// Riesz kernel of order N >= 1 of the odd part: the t-integral of the odd
// interlaced chain applied to the odd kernel, weighted t^{N-1}/Gamma(N).
// theta_deriv / phi_deriv add plain derivatives (0 or 1).
double riesz_kernel(const JacobiParams& p, int n, double theta, double phi, const TruncationConfig& cfg = {},
                    int theta_deriv = 0, int phi_deriv = 0, const TIntegration& ti = {});

struct LaplaceMultiplier {
  std::function<double(double)> phi;
  double sup_bound;
};

struct DiscreteMeasure {
  std::vector<std::pair<double, std::complex<double>>> atoms;  // (t_j, a_j)
  // sum |a_j| exp(-t_j sqrt(lambda_0))
  double weighted_variation(const JacobiParams& p) const;
  // m(z) = sum a_j exp(-t_j z)
  std::complex<double> transform(double z) const;
};

// -int d_t K_t phi(t) dt for the odd kernel K.
double multiplier_kernel(const JacobiParams& p, const LaplaceMultiplier& m, double theta, double phi,
                         const TruncationConfig& cfg = {}, int theta_deriv = 0, int phi_deriv = 0,
                         const TIntegration& ti = {});
// sum a_j K_{t_j} for the odd kernel K.
std::complex<double> multiplier_kernel(const JacobiParams& p, const DiscreteMeasure& nu, double theta, double phi,
                                       const TruncationConfig& cfg = {}, int theta_deriv = 0, int phi_deriv = 0);

// Coefficients c_j of the iterated Laplace reduction
// chain_{2k} K = sum_{j=0}^{k} c_j d_t^{2(k-j)} K, i.e. (d_t^2 - lambda_0)^k.
std::vector<double> laplace_coefficients(const JacobiParams& p, int k);

}  // namespace symjac
