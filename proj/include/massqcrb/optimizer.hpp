#pragma once

#include <cstdint>

#include "massqcrb/state.hpp"

namespace massqcrb {

struct OptimizationReport {
  StateVector best_state;
  double best_f = 0.0;    // value of the quadratic-coefficient form (<= 0)
  int restarts_used = 0;
  bool converged = false; // every restart met the tolerance before the cap
  double spread = 0.0;    // range of the per-restart optima
};

// Multi-start projected ascent of |fisher_f| over normalized complex
// coefficient vectors supported on levels 0..max_level.  Start points are
// the equal-weight two-mode state, the top level alone, and seeded random
// draws; identical arguments give bitwise-identical reports regardless of
// scheduling.
OptimizationReport optimize_state(int max_level, double tau, int restarts,
                                  std::uint64_t seed, double tol = 1e-10);

// Late-time sensitivity proxy tau^2 * Var(n): the coefficient form's
// magnitude approaches it from above once tau dominates every oscillation.
double variance_certificate(const StateVector& state, double tau_large);

}  // namespace massqcrb
