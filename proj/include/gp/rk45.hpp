#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace gp {

// Adaptive Dormand-Prince 5(4) embedded pair with error-per-unit-step
// control: a step of size h is accepted when the weighted embedded error
// estimate stays below tol * h. Dense output between accepted steps is
// cubic Hermite on the stored endpoint derivatives (FSAL stages).
using Derivative =
    std::function<void(double t, const std::vector<double>& y,
                       std::vector<double>& dydt)>;

struct Rk45Report {
    std::size_t steps_accepted = 0;
    std::size_t steps_rejected = 0;
    double max_error_per_unit = 0.0; // max accepted err/h, <= tol
};

// Integrates y' = f(t, y) from t0 to t_end, filling states_at_grid with
// the solution at each requested grid time (ascending, inside [t0,
// t_end]). step_errors, when given, receives the per-accepted-step error
// estimates. Throws IntegratorError with the failure time when the step
// size underflows.
Rk45Report rk45_dense(const Derivative& f, std::vector<double> y0, double t0,
                      double t_end, double tol,
                      const std::vector<double>& t_grid,
                      std::vector<std::vector<double>>& states_at_grid,
                      std::vector<double>* step_errors = nullptr);

} // namespace gp
