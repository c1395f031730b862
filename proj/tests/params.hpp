#pragma once

#include <vector>

#include "symjac/basis.hpp"

// Parameter pairs exercised throughout the tests.
inline std::vector<symjac::JacobiParams> standard_params() {
  return {{0.0, 0.0}, {-0.5, -0.5}, {1.5, -0.7}, {-0.7, -0.6}, {2.5, 3.5}};
}
