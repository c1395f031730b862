#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "symjac/errors.hpp"
#include "symjac/operator.hpp"
#include "symjac/parallel.hpp"
#include "symjac/verify.hpp"

using namespace symjac;
using json = nlohmann::ordered_json;

namespace {

struct RunConfig {
  std::string command, target;
  double alpha = 0.0, beta = 0.0;
  std::string setting = "poly-sym";
  std::string kind;
  std::size_t n = 3;
  double t = 0.5;
  int M = 0, N = 0;
  std::optional<double> theta, phi;
  std::optional<double> exponent, weight_r, weight_s, t_min, t_max;
  double eps_tail = TruncationConfig{}.eps_tail;
  std::size_t grid = 256;
  bool grid_set = false;
  std::uint64_t seed = 1;
  std::string profile = "quick";
  bool params_set = false;
  std::string out;
  unsigned threads = 0;

  // Everything that determines the output; the output path and worker cap do not.
  json header() const {
    json j;
    j["command"] = command;
    j["target"] = target;
    j["alpha"] = alpha;
    j["beta"] = beta;
    j["setting"] = setting;
    if (!kind.empty()) j["kind"] = kind;
    j["n"] = n;
    j["t"] = t;
    j["M"] = M;
    j["N"] = N;
    j["theta"] = theta ? json(*theta) : json(nullptr);
    j["phi"] = phi ? json(*phi) : json(nullptr);
    j["p"] = exponent ? json(*exponent) : json(nullptr);
    j["weight_r"] = weight_r ? json(*weight_r) : json(nullptr);
    j["weight_s"] = weight_s ? json(*weight_s) : json(nullptr);
    j["t_min"] = t_min ? json(*t_min) : json(nullptr);
    j["t_max"] = t_max ? json(*t_max) : json(nullptr);
    j["eps_tail"] = eps_tail;
    j["grid"] = grid;
    j["seed"] = seed;
    j["profile"] = profile;
    return j;
  }

  TruncationConfig truncation() const {
    TruncationConfig c;
    c.eps_tail = eps_tail;
    if (t_min) c.t_floor = std::min(c.t_floor, *t_min);
    return c;
  }
};

BasisKind basis_kind_from_string(const std::string& s) {
  if (s == "trig_poly") return BasisKind::trig_poly;
  if (s == "jacobi_fn") return BasisKind::jacobi_fn;
  if (s == "sym_poly") return BasisKind::sym_poly;
  if (s == "sym_fn") return BasisKind::sym_fn;
  throw ConfigError("basis kind must be trig_poly, jacobi_fn, sym_poly or sym_fn, got " + s);
}

KernelKind kernel_kind_from_string(const std::string& s) {
  if (s == "sym") return KernelKind::sym;
  if (s == "even") return KernelKind::even;
  if (s == "odd") return KernelKind::odd;
  if (s == "nonsym") return KernelKind::nonsym;
  if (s == "fn_nonsym") return KernelKind::fn_nonsym;
  if (s == "fn_sym") return KernelKind::fn_sym;
  throw ConfigError("kernel kind must be sym, even, odd, nonsym, fn_nonsym or fn_sym, got " + s);
}

bool symmetric_domain(BasisKind k) { return k == BasisKind::sym_poly || k == BasisKind::sym_fn; }
bool symmetric_domain(KernelKind k) { return k != KernelKind::nonsym && k != KernelKind::fn_nonsym; }

// Midpoints of `count` equal cells of (-pi, pi) or (0, pi).
std::vector<double> uniform_angles(std::size_t count, bool symmetric) {
  const double a = symmetric ? -std::numbers::pi : 0.0, b = std::numbers::pi;
  std::vector<double> x(count);
  for (std::size_t i = 0; i < count; ++i) x[i] = a + (b - a) * (static_cast<double>(i) + 0.5) / count;
  return x;
}

class CsvWriter {
 public:
  CsvWriter(const RunConfig& cfg, const std::vector<std::string>& columns) {
    os_ << std::setprecision(17);
    os_ << "# " << cfg.header().dump() << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) os_ << (i ? "," : "") << columns[i];
    os_ << "\n";
  }
  void row(std::initializer_list<double> v) {
    bool first = true;
    for (double x : v) {
      os_ << (first ? "" : ",") << x;
      first = false;
    }
    os_ << "\n";
  }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file " + cfg.out);
  f << text;
}

int eval_basis_cmd(RunConfig& cfg) {
  if (cfg.kind.empty()) cfg.kind = "sym_poly";
  const BasisElement e{{cfg.alpha, cfg.beta}, cfg.n, basis_kind_from_string(cfg.kind)};
  CsvWriter csv(cfg, {"theta", "value"});
  for (double x : uniform_angles(cfg.grid, symmetric_domain(e.kind))) csv.row({x, eval_basis(e, x)});
  emit(cfg, csv.str());
  return 0;
}

int eval_kernel_cmd(RunConfig& cfg) {
  if (cfg.kind.empty()) cfg.kind = "sym";
  const KernelKind kind = kernel_kind_from_string(cfg.kind);
  const KernelHandle h({cfg.alpha, cfg.beta}, kind, cfg.truncation());
  if (!(cfg.t > 0.0)) throw ConfigError("--t must be positive");
  const double theta = cfg.theta.value_or(1.0);
  CsvWriter csv(cfg, {"t", "theta", "phi", "value"});
  if (cfg.phi) {
    csv.row({cfg.t, theta, *cfg.phi, h.value(cfg.t, theta, *cfg.phi)});
  } else {
    const auto phis = uniform_angles(cfg.grid, symmetric_domain(kind));
    std::vector<double> v(phis.size());
    parallel_for(phis.size(), [&](std::size_t i) { v[i] = h.value(cfg.t, theta, phis[i]); });
    for (std::size_t i = 0; i < phis.size(); ++i) csv.row({cfg.t, theta, phis[i], v[i]});
  }
  emit(cfg, csv.str());
  return 0;
}

// The test function is the basis element --n of the setting, sampled on a
// Gauss grid with --grid nodes.
int eval_operator_cmd(RunConfig& cfg) {
  if (cfg.kind.empty()) cfg.kind = "semigroup";
  const JacobiParams p{cfg.alpha, cfg.beta};
  const Setting s = setting_from_string(cfg.setting);
  if (is_symmetric(s) && cfg.grid % 2) throw ConfigError("--grid must be even in a symmetrized setting");
  const std::size_t order = is_symmetric(s) ? cfg.grid / 2 : cfg.grid;
  if (order < 1 || order > kMaxGaussOrder) throw ConfigError("--grid out of range");
  OperatorSpec spec;
  spec.kind = operator_kind_from_string(cfg.kind);
  spec.t = cfg.t;
  spec.M = cfg.M;
  spec.N = cfg.N;
  if (cfg.t_min) spec.sampling.t_min = *cfg.t_min;
  if (cfg.t_max) spec.sampling.t_max = *cfg.t_max;
  if (spec.kind == OperatorKind::mult_stieltjes) spec.stieltjes.atoms = {{cfg.t, 1.0}};
  if (spec.kind == OperatorKind::mult_laplace) spec.laplace = {[](double u) { return std::cos(u); }, 1.0};
  const auto g = make_grid(p, order, measure_of(s));
  const BasisElement e{p, cfg.n, basis_of(s)};
  const GridFunction f =
      GridFunction::sample(g, s, [&](double x) { return std::complex<double>(eval_basis(e, x)); });
  const GridFunction r = apply(spec, f);
  CsvWriter csv(cfg, {"theta", "input", "re", "im"});
  for (std::size_t i = 0; i < r.size(); ++i)
    csv.row({g->nodes[i], f.values[i].real(), r.values[i].real(), r.values[i].imag()});
  emit(cfg, csv.str());
  return 0;
}

int verify_cmd(const RunConfig& cfg) {
  VerifyConfig vc;
  vc.profile = profile_from_string(cfg.profile);
  if (cfg.params_set) vc.params = {{cfg.alpha, cfg.beta}};
  vc.seed = cfg.seed;
  vc.truncation = cfg.truncation();
  vc.exponent = cfg.exponent;
  if (cfg.weight_r || cfg.weight_s) vc.weight = PowerWeight{cfg.weight_r.value_or(0.0), cfg.weight_s.value_or(0.0)};
  if (!cfg.kind.empty()) vc.lp_kind = operator_kind_from_string(cfg.kind);
  if (cfg.setting != "poly-sym") vc.setting = setting_from_string(cfg.setting);
  vc.t_min = cfg.t_min;
  vc.t_max = cfg.t_max;
  if (cfg.grid_set) vc.grid = cfg.grid;
  const auto reports = run_suite(cfg.target, vc);
  const std::string doc = reports_to_json(reports, cfg.header().dump());
  if (cfg.out.empty()) {
    std::cout << doc;
    std::cerr << reports_table(reports);
  } else {
    emit(cfg, doc);
    std::cout << reports_table(reports);
  }
  return gating_passed(reports) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetrized Jacobi expansions: evaluation and estimate verification"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* c) {
    c->add_option("--alpha", cfg.alpha, "type parameter alpha > -1");
    c->add_option("--beta", cfg.beta, "type parameter beta > -1");
    c->add_option("--setting", cfg.setting, "poly+, poly-sym, fn+ or fn-sym")
        ->check(CLI::IsMember({"poly+", "poly-sym", "fn+", "fn-sym"}));
    c->add_option("--kind", cfg.kind, "basis, kernel or operator kind");
    c->add_option("--n", cfg.n, "basis index");
    c->add_option("--t", cfg.t, "time (semigroup, kernel, unit atom)");
    c->add_option("--M", cfg.M, "t-derivatives");
    c->add_option("--N", cfg.N, "theta-derivatives");
    c->add_option("--theta", cfg.theta, "first angle");
    c->add_option("--phi", cfg.phi, "second angle");
    c->add_option("--p", cfg.exponent, "L^p exponent");
    c->add_option("--weight-r", cfg.weight_r, "weight exponent at 0");
    c->add_option("--weight-s", cfg.weight_s, "weight exponent at pi");
    c->add_option("--t-min", cfg.t_min, "smallest time sampled");
    c->add_option("--t-max", cfg.t_max, "largest time sampled");
    c->add_option("--eps-tail", cfg.eps_tail, "series truncation tolerance");
    c->add_option("--seed", cfg.seed, "random seed");
    c->add_option("--out", cfg.out, "output file (default stdout)");
    c->add_option("--threads", cfg.threads, "worker cap (0: hardware)");
    c->add_option("--profile", cfg.profile, "quick or full")->check(CLI::IsMember({"quick", "full"}));
    c->add_flag_callback("--quick", [&] { cfg.profile = "quick"; }, "same as --profile quick");
    c->add_flag_callback("--full", [&] { cfg.profile = "full"; }, "same as --profile full");
  };

  auto* eval = app.add_subcommand("eval", "write values as CSV with a JSON header line");
  eval->add_option("target", cfg.target, "basis, kernel or operator")
      ->required()
      ->check(CLI::IsMember({"basis", "kernel", "operator"}));
  eval->add_option("--grid", cfg.grid, "number of sample points");
  common(eval);

  auto* verify = app.add_subcommand("verify", "run a verification suite and write a JSON report");
  std::string suites;
  for (const auto& s : suite_names()) suites += (suites.empty() ? "" : ", ") + s;
  verify->add_option("target", cfg.target, suites)->required()->check(CLI::IsMember(suite_names()));
  verify->add_option("--grid", cfg.grid, "grid order for the L^p sweep");
  common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  cfg.command = eval->parsed() ? "eval" : "verify";
  cfg.grid_set = (eval->parsed() ? eval : verify)->count("--grid") > 0;
  cfg.params_set = (eval->parsed() ? eval : verify)->count("--alpha") + (eval->parsed() ? eval : verify)->count("--beta") > 0;

  try {
    set_thread_limit(cfg.threads);
    JacobiParams{cfg.alpha, cfg.beta};
    if (cfg.command == "eval") {
      if (cfg.grid < 1) throw ConfigError("--grid must be positive");
      if (cfg.target == "basis") return eval_basis_cmd(cfg);
      if (cfg.target == "kernel") return eval_kernel_cmd(cfg);
      return eval_operator_cmd(cfg);
    }
    return verify_cmd(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
