#pragma once

#include "symjac/basis.hpp"

namespace symjac {

// Density of dmu (restricted = false, theta in (-pi,pi)) or dmu+ (theta in (0,pi)).
double mu_density(const JacobiParams& p, double theta, bool restricted = false);

struct Ball {
  double center;
  double radius;

  Ball(double center, double radius);
  // (center - radius, center + radius) intersected with (0, pi)
  double lower() const;
  double upper() const;
};

// dmu+ of the realized interval, by adaptive quadrature.
double ball_measure(const JacobiParams& p, const Ball& b);
// dmu+ of an arbitrary subinterval [a, b] of [0, pi].
double interval_measure(const JacobiParams& p, double a, double b);

// w_{r,s}(theta) = |sin(theta/2)|^r cos(theta/2)^s
struct PowerWeight {
  double r;
  double s;

  double operator()(double theta) const;
};

struct ClassOptions {
  // slack applied to strict inequalities when inputs are not recognized as rationals
  double boundary_tolerance = 0.0;
};

bool ap_membership(const JacobiParams& p, const PowerWeight& w, double exponent, const ClassOptions& o = {});
bool bp_membership(const JacobiParams& p, const PowerWeight& w, double exponent, const ClassOptions& o = {});

}  // namespace symjac
