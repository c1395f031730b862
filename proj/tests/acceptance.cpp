// Runs the ten acceptance criteria and prints one PASS/FAIL line per criterion.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "symjac/verify.hpp"

using namespace symjac;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void verdict(int id, const std::string& what, bool ok, double seconds, double budget, const std::string& detail) {
  const bool in_time = seconds <= budget;
  const bool pass = ok && in_time;
  if (!pass) ++failures;
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(1);
  os << "criterion " << id << ": " << (pass ? "PASS" : "FAIL") << "  " << what << "  [" << detail << "; " << seconds
     << " s of " << budget << " s" << (in_time ? "" : ", over budget") << "]";
  std::cout << os.str() << std::endl;
}

struct Selection {
  bool ok = true;
  std::size_t count = 0;
  double worst = 0.0;  // largest statistic / bound, or drift when no bound
  double seconds = 0.0;
  std::string first_failure;
};

// Every gating report whose claim starts with one of `prefixes`.
Selection select(const std::vector<EstimateReport>& reps, const std::vector<std::string>& prefixes) {
  Selection s;
  for (const auto& r : reps) {
    const bool hit = std::any_of(prefixes.begin(), prefixes.end(),
                                 [&](const std::string& p) { return r.claim.rfind(p, 0) == 0; });
    if (!hit || !r.gating) continue;
    ++s.count;
    s.seconds += r.seconds;
    s.worst = std::max(s.worst, r.bound ? (*r.bound > 0 ? r.max_ratio / *r.bound : r.max_ratio) : r.drift);
    if (r.verdict != Verdict::pass && s.ok) {
      s.ok = false;
      std::ostringstream os;
      os << r.claim;
      if (r.params) os << " at (" << r.params->alpha() << "," << r.params->beta() << ")";
      os << " is " << to_string(r.verdict);
      s.first_failure = os.str();
    }
  }
  if (s.count == 0) s.ok = false;
  return s;
}

std::string describe(const Selection& s, const std::string& worst_label) {
  std::ostringstream os;
  os.precision(3);
  os << s.count << " reports, " << worst_label << " " << s.worst;
  if (!s.ok) os << "; " << (s.first_failure.empty() ? "no reports" : s.first_failure);
  return os.str();
}

// Every listed claim must appear once per standard parameter pair.
bool covers_all_pairs(const std::vector<EstimateReport>& reps, const std::vector<std::string>& claims) {
  for (const auto& c : claims) {
    std::set<std::pair<double, double>> seen;
    for (const auto& r : reps)
      if (r.claim == c && r.params) seen.insert({r.params->alpha(), r.params->beta()});
    if (seen.size() != standard_parameter_pairs().size()) return false;
  }
  return true;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SYMJAC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

}  // namespace

int main() {
  VerifyConfig full;
  full.profile = Profile::full;

  {
    const auto t0 = Clock::now();
    const auto reps = check_sharp_lemma_abc(1024);
    const double sec = since(t0);
    const Selection s = select(reps, {"sharp."});
    const bool attained = reps.size() == 3 && std::abs(reps[1].max_ratio - 1.0 / 16) <= 1e-12 / 16 &&
                          reps[1].argmax.theta == reps[1].argmax.phi;
    verdict(1, "sharp constants 1/(4 pi), 1/16, 1/pi on a 1024^2 grid, (b) attained on the diagonal",
            s.ok && s.count == 3 && attained, sec, 10, describe(s, "max statistic/bound"));
  }

  std::vector<EstimateReport> identities;
  {
    VerifyConfig cfg;
    identities = run_suite("identities", cfg);
  }
  {
    const Selection s = select(identities, {"orthonormality"});
    verdict(2, "orthonormality of Phi_n (dmu), P_n (dmu+), Theta_n (dtheta), m, n <= 20, to 1e-8",
            s.ok && covers_all_pairs(identities, {"orthonormality"}), s.seconds, 30,
            describe(s, "max residual/bound"));
  }
  {
    const Selection s = select(identities, {"eigen-residual", "conjugation", "semigroup-law"});
    verdict(3, "eigenfunction residual, Psi-conjugation and semigroup law",
            s.ok && covers_all_pairs(identities, {"eigen-residual", "conjugation", "semigroup-law"}), s.seconds, 60,
            describe(s, "max residual/bound"));
  }
  {
    const Selection s = select(identities, {"odd-kernel-paths", "laplace-reductions"});
    verdict(4, "odd kernel by series vs shift identity (1e-8); chains vs Laplace reductions, N <= 4 (1e-6)",
            s.ok && covers_all_pairs(identities, {"odd-kernel-paths", "laplace-reductions"}), s.seconds, 120,
            describe(s, "max residual/bound"));
  }
  {
    const auto t0 = Clock::now();
    const auto reps = run_suite("domination", full);
    const double sec = since(t0);
    const Selection s = select(reps, {"domination"});
    verdict(5, "domination |~H_t| <= C H_t, refinement drift < 2, five parameter pairs",
            s.ok && covers_all_pairs(reps, {"domination"}), sec, 120, describe(s, "max drift"));
  }
  {
    const auto t0 = Clock::now();
    const auto reps = run_suite("standard-estimates", full);
    const double sec = since(t0);
    std::vector<std::string> claims;
    for (const std::string k : {"riesz1", "riesz2", "stieltjes-atom", "vector-even-M1N0", "vector-odd-M1N0",
                                "vector-even-M0N1", "vector-odd-M0N1", "vector-even-M1N1", "vector-odd-M1N1"})
      for (const std::string e : {".gr", ".grad"}) claims.push_back(k + e);
    const Selection s = select(reps, claims);
    verdict(6, "growth and gradient estimates of the Riesz, single-atom and vector kernels, full profile",
            s.ok && s.count == claims.size() * 5 && covers_all_pairs(reps, claims), sec, 15 * 60,
            describe(s, "max drift"));
  }
  {
    const Selection s = select(identities, {"square-closed-form", "riesz2-closed-form", "unit-atom-multiplier"});
    verdict(7, "square(M,0), riesz(2) closed forms and unit-atom multiplier = semigroup",
            s.ok && covers_all_pairs(identities, {"square-closed-form", "riesz2-closed-form", "unit-atom-multiplier"}),
            s.seconds, 30, describe(s, "max residual/bound"));
  }
  {
    const Selection s = select(identities, {"weight-classes"});
    verdict(8, "A_p/B_p equivalence on 10^4 samples and the exact w_{0,0} window", s.ok && s.count == 1, s.seconds, 5,
            describe(s, "mismatches"));
  }
  {
    const auto t0 = Clock::now();
    const auto reps = run_suite("lemma-ratios", full);
    const double sec = since(t0);
    const Selection s = select(reps, {"lemma."});
    verdict(9, "lemma ratio sweeps for every instance in the fixture, full profile",
            s.ok && s.count == lemma_fixture().size() * 5, sec, 10 * 60, describe(s, "max drift"));
  }
  {
    const auto t0 = Clock::now();
    const int a = run_cli("verify all --quick --seed 7 --out acceptance_all_1.json");
    const double first = since(t0);
    const int b = run_cli("verify all --quick --seed 7 --out acceptance_all_2.json");
    const std::string ja = slurp("acceptance_all_1.json"), jb = slurp("acceptance_all_2.json");
    const bool same = !ja.empty() && ja == jb;
    std::ostringstream d;
    d.precision(1);
    d.setf(std::ios::fixed);
    d << "exit codes " << a << ", " << b << "; " << ja.size() << " bytes, " << (same ? "identical" : "different")
      << "; one run " << first << " s";
    verdict(10, "verify all --quick twice with the same seed gives byte-identical reports", same && a == 0 && b == 0,
            first, 5 * 60, d.str());
  }

  std::cout << (failures == 0 ? "all criteria PASS" : std::to_string(failures) + " criteria FAIL") << std::endl;
  return failures == 0 ? 0 : 1;
}
