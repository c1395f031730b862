#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symjac/kernel.hpp"
#include "symjac/measure.hpp"
#include "symjac/operator.hpp"

namespace symjac {

enum class Verdict { pass, fail, unstable, informational };
std::string to_string(Verdict v);

struct SamplePoint {
  double t = std::numeric_limits<double>::quiet_NaN();
  double theta = std::numeric_limits<double>::quiet_NaN();
  double phi = std::numeric_limits<double>::quiet_NaN();
};

struct EstimateReport {
  std::string claim;
  std::string suite;
  std::optional<JacobiParams> params;
  std::string description;
  double max_ratio = 0.0;  // the reported statistic: sup of a ratio, a residual, a norm
  SamplePoint argmax;
  std::vector<double> trajectory;  // statistic per refinement level
  std::optional<double> bound;     // required upper bound on the statistic, when one is claimed
  double drift = 1.0;              // largest ratio between consecutive levels (>= 1)
  Verdict verdict = Verdict::pass;
  bool gating = true;
  std::string notes;
  double seconds = 0.0;  // wall time; kept out of the serialized report
};

enum class Profile { quick, full };
std::string to_string(Profile p);
Profile profile_from_string(const std::string& s);

// (theta, phi) pairs off the diagonal, closed under swapping: pairs stratified
// by the distance of theta to the nearest endpoint and by |theta - phi|
// relative to it, plus far pairs between interior centers and points close to
// the endpoints. Levels are nested.
struct SweepSpec {
  int levels = 2;
  int base_depth = 4;     // centers pi 2^-k and pi (1 - 2^-k), k = 2 .. base_depth + level
  int base_interior = 8;  // uniform centers at level 0, doubled per level
  int ratio_depth = 4;    // |theta - phi| / min(theta, pi - theta) = 2^i, i = -(ratio_depth + level) .. 2
  int endpoint_depth = 8;  // far pairs reach pi 2^-k and pi (1 - 2^-k), k <= endpoint_depth + level
  double guard = 1e-3;    // |theta - phi| >= max(guard, 3 t_floor)
  double t_scale = 20.0;  // t-range per pair starts at max(t_floor, |theta - phi| / t_scale)
  double t_max = 40.0;
  int points_per_decade = 16;
  double drift_factor = 2.0;
  // Sweep statistics below this are t-quadrature noise; drift is measured on max(value, floor).
  double noise_floor = 1e-5;
  TruncationConfig truncation;

  std::vector<std::pair<double, double>> pairs(int level) const;
  double t_low(double theta, double phi) const;
};

// One application of the growth lemma (growth = true) or of its 1/|theta - phi|
// variant, with the norm taken in L^p(t^{W-1} dt); p = inf is allowed.
struct LemmaInstance {
  bool growth = true;
  int L = 0, N = 0, M = 0;
  double W = 1.0;
  int gamma1 = 1, gamma2 = 1;
  double p = 1.0;
  std::vector<std::string> uses;  // kernels whose estimates invoke this instance

  bool hypothesis_holds() const;
  std::string key() const;
};
LemmaInstance make_lemma_instance(bool growth, int L, int N, int M, double W, int gamma1, int gamma2, double p);
// Every distinct instance invoked by the kernel estimates.
std::vector<LemmaInstance> lemma_fixture();

std::vector<JacobiParams> standard_parameter_pairs();

struct LpCase {
  std::string label;
  Setting setting = Setting::poly_sym;
  JacobiParams params{0.0, 0.0};
  OperatorSpec spec;
  double exponent = 2.0;
  PowerWeight weight{0.0, 0.0};
  bool negative_control = false;
};

struct VerifyConfig {
  Profile profile = Profile::quick;
  std::vector<JacobiParams> params;  // empty: the five standard pairs
  std::uint64_t seed = 1;
  TruncationConfig truncation;
  std::optional<double> exponent;
  std::optional<PowerWeight> weight;
  std::optional<Setting> setting;
  std::optional<OperatorKind> lp_kind;
  std::optional<double> t_min, t_max;
  std::optional<std::size_t> grid;

  SweepSpec sweep() const;
  std::vector<JacobiParams> parameter_pairs() const;
};

std::vector<EstimateReport> check_sharp_lemma_abc(std::size_t n);
EstimateReport check_ball_comparability(const JacobiParams& p, double xi, const SweepSpec& s);
// Growth and gradient sweeps of the Riesz kernels of orders 1 and 2 of the odd
// part, a single-atom Laplace-Stieltjes multiplier kernel, and the vector
// kernels of both parts; plus finite-difference smoothness forms (informational).
std::vector<EstimateReport> check_standard_estimates(const JacobiParams& p, const SweepSpec& s);
EstimateReport check_domination(const JacobiParams& p, const SweepSpec& s);
std::vector<EstimateReport> check_lemma_gr_new(const JacobiParams& p, const std::vector<LemmaInstance>& inst,
                                               const SweepSpec& s);
EstimateReport check_laplace_identities(const JacobiParams& p, const TruncationConfig& cfg);
std::vector<EstimateReport> empirical_lp_sweep(const std::vector<LpCase>& cases, const std::vector<std::size_t>& orders,
                                               std::uint64_t seed);
std::vector<LpCase> default_lp_cases();

std::vector<std::string> suite_names();
std::vector<EstimateReport> run_suite(const std::string& name, const VerifyConfig& cfg);

bool gating_passed(const std::vector<EstimateReport>& reports);
// Reports as a versioned JSON document; `config` is embedded verbatim as the run header.
std::string reports_to_json(const std::vector<EstimateReport>& reports, const std::string& config_json);
std::string reports_table(const std::vector<EstimateReport>& reports);

}  // namespace symjac
