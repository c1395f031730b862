#include "symjac/operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "symjac/errors.hpp"
#include "symjac/parallel.hpp"

namespace symjac {

std::string to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::semigroup: return "semigroup";
    case OperatorKind::maximal: return "maximal";
    case OperatorKind::square: return "square";
    case OperatorKind::riesz: return "riesz";
    case OperatorKind::mult_laplace: return "mult_laplace";
    case OperatorKind::mult_stieltjes: return "mult_stieltjes";
  }
  return "?";
}

OperatorKind operator_kind_from_string(const std::string& s) {
  for (OperatorKind k : {OperatorKind::semigroup, OperatorKind::maximal, OperatorKind::square, OperatorKind::riesz,
                         OperatorKind::mult_laplace, OperatorKind::mult_stieltjes})
    if (to_string(k) == s) return k;
  throw ConfigError("unknown operator kind: " + s);
}

NonsymOperator nonsym_operator_from_string(const std::string& s) {
  static const char* names[] = {"a", "b", "c", "d", "e", "f"};
  for (int i = 0; i < 6; ++i)
    if (s == names[i]) return static_cast<NonsymOperator>(i);
  throw ConfigError("non-symmetrized operator must be one of a..f, got " + s);
}

void OperatorSpec::validate() const {
  if (M < 0 || N < 0) throw ConfigError("derivative orders must be nonnegative");
  switch (kind) {
    case OperatorKind::semigroup:
      if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("semigroup time must be finite and >= 0");
      break;
    case OperatorKind::square:
      if (M + N == 0) throw ConfigError("square function needs M + N > 0");
      break;
    case OperatorKind::riesz:
      if (N < 1) throw ConfigError("Riesz transform needs N >= 1");
      break;
    case OperatorKind::mult_laplace:
      if (!laplace.phi) throw ConfigError("Laplace multiplier needs a function phi");
      if (!std::isfinite(laplace.sup_bound)) throw ConfigError("Laplace multiplier needs a finite sup bound");
      break;
    case OperatorKind::mult_stieltjes:
      for (const auto& [tj, a] : stieltjes.atoms)
        if (!(tj > 0.0) || !std::isfinite(tj) || !std::isfinite(std::abs(a)))
          throw ConfigError("Stieltjes atoms need finite t_j > 0 and finite weights");
      break;
    case OperatorKind::maximal:
      break;
  }
  if (kind == OperatorKind::maximal || (kind == OperatorKind::square && square_by_quadrature))
    if (!(sampling.t_min > 0.0 && sampling.t_max > sampling.t_min))
      throw ConfigError("t-sampling needs 0 < t_min < t_max");
}

double laplace_multiplier_value(const LaplaceMultiplier& m, double z) {
  if (z <= 0.0) return 0.0;
  // z int e^{-tz} phi(t) dt = int e^{-u} phi(u / z) du
  const auto r = integrate(
      [&](double u) {
        const double v = m.phi(u / z);
        if (!(std::abs(v) <= m.sup_bound)) throw ConfigError("Laplace multiplier exceeds its declared sup bound");
        return std::exp(-u) * v;
      },
      0.0, 60.0, 1e-14, 1e-12, 20000);
  return r.value;
}

namespace {

enum class Family { sym_poly, sym_fn, plus_poly, plus_fn, restricted_even, restricted_odd };

Family family_of(Setting s) {
  switch (s) {
    case Setting::poly_sym: return Family::sym_poly;
    case Setting::fn_sym: return Family::sym_fn;
    case Setting::poly_plus: return Family::plus_poly;
    case Setting::fn_plus: return Family::plus_fn;
  }
  return Family::sym_poly;
}

bool symmetric_family(Family f) { return f == Family::sym_poly || f == Family::sym_fn; }
bool function_family(Family f) { return f == Family::sym_fn || f == Family::plus_fn; }

// Largest index n whose products with every kept element are integrated exactly.
std::size_t family_limit(Family f, std::size_t order) {
  if (order < 2) throw ConfigError("grid order too small for a spectral expansion");
  switch (f) {
    case Family::sym_poly:
    case Family::sym_fn: return 2 * order - 2;
    case Family::restricted_odd: return order - 2;
    default: return order - 1;
  }
}

// Squared norm of element n in the measure of the grid.
double family_norm2(Family f) {
  return (f == Family::restricted_even || f == Family::restricted_odd) ? 0.5 : 1.0;
}

double family_sqrt_eigen(Family f, const JacobiParams& p, std::size_t n) {
  switch (f) {
    case Family::sym_poly:
    case Family::sym_fn: return sqrt_lambda(p, half_index(n));
    case Family::restricted_odd: return sqrt_lambda(p, n + 1);
    default: return sqrt_lambda(p, n);
  }
}

// Phi_0..Phi_{count-1} at theta.
std::vector<double> sym_values(const JacobiParams& p, double theta, std::size_t count) {
  const std::size_t half = count / 2 + 1;
  std::vector<double> P(half), Q(half), out(count);
  const double c = std::cos(theta), s = std::sin(theta);
  recurrence_for(p, half)->values(c, half, P.data());
  recurrence_for(p.shifted(1), half)->values(c, half, Q.data());
  for (std::size_t n = 0; n < count; ++n)
    out[n] = n % 2 == 0 ? P[n / 2] * SymTable::kInvSqrt2 : s * Q[n / 2] * SymTable::kHalfInvSqrt2;
  return out;
}

std::vector<double> family_values(Family f, const JacobiParams& p, double theta, std::size_t count) {
  std::vector<double> out(count);
  switch (f) {
    case Family::sym_poly:
    case Family::sym_fn: {
      out = sym_values(p, theta, count);
      break;
    }
    case Family::plus_poly:
    case Family::plus_fn:
      recurrence_for(p, count)->values(std::cos(theta), count, out.data());
      break;
    case Family::restricted_even:
    case Family::restricted_odd: {
      const std::size_t shift = f == Family::restricted_odd ? 1 : 0;
      const auto all = sym_values(p, theta, 2 * count + 1);
      for (std::size_t n = 0; n < count; ++n) out[n] = all[2 * n + shift];
      break;
    }
  }
  if (function_family(f)) {
    const double w = psi(p, theta);
    for (double& v : out) v *= w;
  }
  return out;
}

// Values at theta of the N-th derivative (in the given form) of elements 0..count-1.
std::vector<double> family_derived(Family f, const JacobiParams& p, DerivativeForm form, int n_derivs, double theta,
                                   std::size_t count) {
  if (n_derivs == 0) return family_values(f, p, theta, count);
  std::vector<double> out(count, 0.0);
  if (symmetric_family(f)) {
    if (form != DerivativeForm::symmetrized)
      throw ConfigError("symmetrized settings only support the symmetrized derivative");
    const auto phi = sym_values(p, theta, count + static_cast<std::size_t>(n_derivs) + 1);
    for (std::size_t n = 0; n < count; ++n) {
      const BasisImage img = sym_power_image(p, n_derivs, n);
      out[n] = img.coef == 0.0 ? 0.0 : img.coef * phi[img.index];
    }
  } else if (form == DerivativeForm::symmetrized) {
    throw ConfigError("the symmetrized derivative needs a setting on (-pi, pi)");
  } else if (form == DerivativeForm::interlaced) {
    const auto phi = sym_values(p, theta, 2 * count + static_cast<std::size_t>(n_derivs) + 2);
    const bool odd = f == Family::restricted_odd;
    const double scale = (f == Family::plus_poly || f == Family::plus_fn) ? std::sqrt(2.0) : 1.0;
    for (std::size_t n = 0; n < count; ++n) {
      const BasisImage img = chain_image(p, n_derivs, 2 * n + (odd ? 1 : 0));
      out[n] = img.coef == 0.0 ? 0.0 : scale * img.coef * phi[img.index];
    }
  } else {
    if (f != Family::plus_poly && f != Family::plus_fn)
      throw ConfigError("plain derivative powers are defined for the non-symmetrized settings only");
    const auto jets = recurrence_for(p, count)->jets(theta, count, n_derivs);
    for (std::size_t n = 0; n < count; ++n) out[n] = jets[n].derivative(n_derivs);
  }
  if (function_family(f)) {
    const double w = psi(p, theta);
    for (double& v : out) v *= w;
  }
  return out;
}

using Complex = std::complex<double>;

GridFunction run(Family fam, const OperatorSpec& spec, const GridFunction& f, const ApplyOptions& opt) {
  spec.validate();
  const ThetaGrid& g = *f.grid;
  const JacobiParams p = g.params();
  const std::size_t limit = family_limit(fam, g.order);
  const std::size_t K = opt.terms.value_or(limit);
  if (K > limit)
    throw ConfigError("expansion length " + std::to_string(K) + " exceeds the grid resolution limit " +
                      std::to_string(limit));
  const std::size_t count = K + 1;
  const std::size_t nodes = g.size();

  std::vector<std::vector<double>> E(nodes);
  parallel_for(nodes, [&](std::size_t i) { E[i] = family_values(fam, p, g.nodes[i], count); });

  std::vector<Complex> c(count, 0.0);
  double energy = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    const Complex wf = g.weights[i] * f.values[i];
    energy += g.weights[i] * std::norm(f.values[i]);
    for (std::size_t n = 0; n < count; ++n) c[n] += wf * E[i][n];
  }
  double captured = 0.0;
  for (const Complex& v : c) captured += std::norm(v) / family_norm2(fam);
  if (energy > 0.0 && energy - captured > opt.tail_tolerance * energy)
    throw NumericError("spectral truncation leaves relative tail energy " +
                       std::to_string((energy - captured) / energy));

  std::vector<double> s(count);
  for (std::size_t n = 0; n < count; ++n) s[n] = family_sqrt_eigen(fam, p, n);

  const DerivativeForm form =
      spec.form.value_or(symmetric_family(fam) ? DerivativeForm::symmetrized : DerivativeForm::interlaced);
  const bool derived = spec.kind == OperatorKind::square || spec.kind == OperatorKind::riesz;
  std::vector<std::vector<double>> G;
  if (derived && spec.N > 0) {
    G.resize(nodes);
    parallel_for(nodes, [&](std::size_t i) { G[i] = family_derived(fam, p, form, spec.N, g.nodes[i], count); });
  }
  const auto& table = G.empty() ? E : G;

  GridFunction out{f.grid, std::vector<Complex>(nodes, 0.0), f.setting};
  auto synthesize = [&](const std::vector<Complex>& a) {
    for (std::size_t i = 0; i < nodes; ++i) {
      Complex v = 0.0;
      for (std::size_t n = 0; n < count; ++n) v += a[n] * table[i][n];
      out.values[i] = v;
    }
  };

  switch (spec.kind) {
    case OperatorKind::semigroup:
    case OperatorKind::riesz:
    case OperatorKind::mult_laplace:
    case OperatorKind::mult_stieltjes: {
      std::vector<Complex> a(count, 0.0);
      for (std::size_t n = 0; n < count; ++n) {
        Complex m;
        switch (spec.kind) {
          case OperatorKind::semigroup: m = std::exp(-spec.t * s[n]); break;
          case OperatorKind::riesz: m = s[n] > 0.0 ? std::pow(s[n], -spec.N) : 0.0; break;
          case OperatorKind::mult_laplace: m = laplace_multiplier_value(spec.laplace, s[n]); break;
          default: m = spec.stieltjes.transform(s[n]); break;
        }
        a[n] = m * c[n];
      }
      synthesize(a);
      break;
    }
    case OperatorKind::maximal: {
      const TGrid tg = make_tgrid(spec.sampling.t_min, spec.sampling.t_max, spec.sampling.points_per_decade, 1.0);
      std::vector<double> best(nodes, 0.0);
      std::vector<Complex> a(count);
      std::vector<double> times = tg.nodes;
      times.push_back(std::numeric_limits<double>::infinity());  // the t -> inf limit
      for (double t : times) {
        for (std::size_t n = 0; n < count; ++n) a[n] = s[n] == 0.0 ? c[n] : std::exp(-t * s[n]) * c[n];
        synthesize(a);
        for (std::size_t i = 0; i < nodes; ++i) best[i] = std::max(best[i], std::abs(out.values[i]));
      }
      for (std::size_t i = 0; i < nodes; ++i) out.values[i] = best[i];
      break;
    }
    case OperatorKind::square: {
      const int W = 2 * spec.M + 2 * spec.N;
      std::vector<Complex> a(count, 0.0);
      for (std::size_t n = 0; n < count; ++n)
        if (s[n] > 0.0) a[n] = std::pow(-s[n], spec.M) * c[n];
      if (spec.square_by_quadrature) {
        const TGrid tg =
            make_tgrid(spec.sampling.t_min, spec.sampling.t_max, spec.sampling.points_per_decade, W);
        std::vector<std::vector<double>> traj(nodes, std::vector<double>(tg.size()));
        std::vector<Complex> at(count);
        for (std::size_t j = 0; j < tg.size(); ++j) {
          for (std::size_t n = 0; n < count; ++n) at[n] = std::exp(-tg.nodes[j] * s[n]) * a[n];
          synthesize(at);
          for (std::size_t i = 0; i < nodes; ++i) traj[i][j] = std::abs(out.values[i]);
        }
        for (std::size_t i = 0; i < nodes; ++i) out.values[i] = t_norm(traj[i], 2.0, tg);
      } else {
        // int_0^inf t^{W-1} e^{-t (s_n + s_m)} dt = Gamma(W) / (s_n + s_m)^W
        const double gw = std::tgamma(W);
        std::vector<double> kmat(count * count, 0.0);
        for (std::size_t n = 0; n < count; ++n)
          for (std::size_t m = 0; m < count; ++m)
            if (s[n] > 0.0 && s[m] > 0.0) kmat[n * count + m] = gw * std::pow(s[n] + s[m], -W);
        parallel_for(nodes, [&](std::size_t i) {
          std::vector<Complex> v(count);
          for (std::size_t n = 0; n < count; ++n) v[n] = a[n] * table[i][n];
          double acc = 0.0;
          for (std::size_t n = 0; n < count; ++n) {
            if (v[n] == 0.0) continue;
            Complex row = 0.0;
            for (std::size_t m = 0; m < count; ++m) row += std::conj(v[m]) * kmat[n * count + m];
            acc += (v[n] * row).real();
          }
          out.values[i] = std::sqrt(std::max(acc, 0.0));
        });
      }
      break;
    }
  }
  return out;
}

}  // namespace

std::size_t resolution_limit(const ThetaGrid& g, Setting s) { return family_limit(family_of(s), g.order); }

std::vector<std::complex<double>> expand(const GridFunction& f, std::size_t K) {
  const ThetaGrid& g = *f.grid;
  const Family fam = family_of(f.setting);
  if (K > family_limit(fam, g.order))
    throw ConfigError("expansion length exceeds the grid resolution limit");
  std::vector<Complex> c(K + 1, 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto e = family_values(fam, g.params(), g.nodes[i], K + 1);
    const Complex wf = g.weights[i] * f.values[i];
    for (std::size_t n = 0; n <= K; ++n) c[n] += wf * e[n];
  }
  return c;
}

GridFunction apply(const OperatorSpec& spec, const GridFunction& f, const ApplyOptions& opt) {
  if (f.grid->measure != measure_of(f.setting)) throw ConfigError("grid measure does not match the setting");
  return run(family_of(f.setting), spec, f, opt);
}

GridFunction apply_restricted(Part which, const OperatorSpec& spec, const GridFunction& f, const ApplyOptions& opt) {
  if (f.setting != Setting::poly_plus || f.grid->measure != MeasureTag::mu_plus)
    throw ConfigError("restricted operators act on poly+ functions");
  if (which == Part::both) throw ConfigError("restricted operators need the even or the odd part");
  if (spec.form && *spec.form != DerivativeForm::interlaced)
    throw ConfigError("restricted operators use the interlaced derivatives");
  return run(which == Part::even ? Family::restricted_even : Family::restricted_odd, spec, f, opt);
}

GridFunction transfer_function_setting(const OperatorSpec& spec, const GridFunction& f, const ApplyOptions& opt) {
  if (!is_function_setting(f.setting)) throw ConfigError("transference needs a function-setting input");
  const ThetaGrid& g = *f.grid;
  const JacobiParams p = g.params();
  const Setting poly = f.setting == Setting::fn_sym ? Setting::poly_sym : Setting::poly_plus;
  auto pg = make_grid(p, g.order, measure_of(poly));
  GridFunction h{pg, std::vector<Complex>(g.size()), poly};
  std::vector<double> w(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    w[i] = psi(p, g.nodes[i]);
    h.values[i] = f.values[i] / w[i];
    if (!std::isfinite(std::abs(h.values[i])) || !(w[i] > 0.0) || !std::isfinite(w[i]))
      throw NumericError("singular weight overflow in the Psi-conjugation at theta = " +
                         std::to_string(g.nodes[i]));
  }
  GridFunction r = apply(spec, h, opt);
  GridFunction out{f.grid, std::move(r.values), f.setting};
  for (std::size_t i = 0; i < g.size(); ++i) out.values[i] *= w[i];
  return out;
}

GridFunction nonsym_operator(NonsymOperator which, OperatorSpec spec, const GridFunction& f,
                             const ApplyOptions& opt) {
  if (f.setting != Setting::fn_plus) throw ConfigError("operators (a)-(f) act in the fn+ setting");
  switch (which) {
    case NonsymOperator::riesz:
      spec.kind = OperatorKind::riesz;
      spec.form = DerivativeForm::plain;
      break;
    case NonsymOperator::interlaced_riesz:
      spec.kind = OperatorKind::riesz;
      spec.form = DerivativeForm::interlaced;
      break;
    case NonsymOperator::multiplier:
      if (spec.kind != OperatorKind::mult_laplace && spec.kind != OperatorKind::mult_stieltjes)
        throw ConfigError("operator (c) needs a Laplace or Laplace-Stieltjes multiplier");
      break;
    case NonsymOperator::maximal:
      spec.kind = OperatorKind::maximal;
      break;
    case NonsymOperator::square:
      spec.kind = OperatorKind::square;
      spec.form = DerivativeForm::plain;
      break;
    case NonsymOperator::interlaced_square:
      spec.kind = OperatorKind::square;
      spec.form = DerivativeForm::interlaced;
      break;
  }
  return apply(spec, f, opt);
}

}  // namespace symjac
