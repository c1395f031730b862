#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "symjac/basis.hpp"

namespace symjac {

struct IntegrationResult {
  double value;
  double error;
};

// Globally adaptive Gauss-Kronrod (7/15) on a finite interval.
IntegrationResult integrate(const std::function<double(double)>& f, double a, double b, double abs_tol = 1e-14,
                            double rel_tol = 1e-12, int max_intervals = 4000);

// dmu+ on (0,pi), dmu on (-pi,pi), d(theta) on (0,pi), d(theta) on (-pi,pi)
enum class MeasureTag { mu_plus, mu_full, lebesgue_plus, lebesgue_full };
std::string to_string(MeasureTag m);
MeasureTag measure_from_string(const std::string& s);
inline bool is_symmetric(MeasureTag m) { return m == MeasureTag::mu_full || m == MeasureTag::lebesgue_full; }

struct ThetaGrid {
  MeasureTag measure = MeasureTag::mu_plus;
  bool symmetric = false;
  double alpha = 0.0, beta = 0.0;
  std::size_t order = 0;  // Gauss-Jacobi order on (0,pi)
  std::vector<double> nodes;  // ascending
  std::vector<double> weights;

  JacobiParams params() const { return {alpha, beta}; }
  std::size_t size() const { return nodes.size(); }
  // Index of the node at -nodes[i] (symmetric grids only).
  std::size_t mirror(std::size_t i) const { return nodes.size() - 1 - i; }
};

constexpr std::size_t kMaxGaussOrder = 512;

// Gauss rule for dmu+ in theta: nodes are the zeros of P_order(cos theta).
ThetaGrid gauss_jacobi_grid(const JacobiParams& p, std::size_t order);
// The same nodes carried to any of the four measures (mirrored for full ones).
ThetaGrid theta_grid(const JacobiParams& p, std::size_t order, MeasureTag measure);
std::shared_ptr<const ThetaGrid> make_grid(const JacobiParams& p, std::size_t order, MeasureTag measure);

std::string grid_to_json(const ThetaGrid& g);
ThetaGrid grid_from_json(const std::string& text);

// Log-uniform grid on [t_min, t_max] with weights for the measure t^{W-1} dt.
struct TGrid {
  double t_min = 1e-4, t_max = 40.0;
  int points_per_decade = 16;
  double weight_exponent = 1.0;
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

TGrid make_tgrid(double t_min, double t_max, int points_per_decade, double weight_exponent);
// Same nodes, weights for another exponent.
TGrid reweight(const TGrid& g, double weight_exponent);

// p in {1, 2, inf}; p = inf is the grid maximum.
double t_norm(const std::vector<double>& samples, double p, const TGrid& grid);

enum class Setting { poly_plus, poly_sym, fn_plus, fn_sym };
std::string to_string(Setting s);
Setting setting_from_string(const std::string& s);
MeasureTag measure_of(Setting s);
BasisKind basis_of(Setting s);
inline bool is_symmetric(Setting s) { return s == Setting::poly_sym || s == Setting::fn_sym; }
inline bool is_function_setting(Setting s) { return s == Setting::fn_plus || s == Setting::fn_sym; }

struct GridFunction {
  std::shared_ptr<const ThetaGrid> grid;
  std::vector<std::complex<double>> values;
  Setting setting = Setting::poly_sym;

  std::size_t size() const { return values.size(); }
  static GridFunction sample(std::shared_ptr<const ThetaGrid> grid, Setting s,
                             const std::function<std::complex<double>(double)>& f);
  GridFunction even_part() const;
  GridFunction odd_part() const;
  // Values on the positive half of a symmetric grid.
  GridFunction positive_half() const;
};

// Conjugate-linear in the second argument.
std::complex<double> inner_product(const GridFunction& f, const GridFunction& g);
double l2_norm(const GridFunction& f);

}  // namespace symjac
