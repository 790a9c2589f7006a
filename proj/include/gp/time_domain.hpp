#pragma once

#include <cstddef>
#include <vector>

#include "gp/kernel.hpp"
#include "gp/numerics.hpp"

namespace gp {

// Exact linear ODE realization of the mode-n memory equation
//
//     theta' = -n^2 sum_k a_k y_k,   y_k' = theta - b_k y_k,
//
// via the auxiliary variables y_k(t) = int_0^t e^{-b_k(t-s)} theta(s) ds.
// The (M+1)x(M+1) state matrix A has eigenvalues exactly at the zeros of
// the truncated G_n, which makes it the independent spectrum oracle.
struct OdeReduction {
    unsigned n = 0;
    std::size_t M = 0;
    std::vector<double> A; // row-major, (M+1)^2 entries
    std::vector<Complex> eigenvalues; // sorted by (Re, Im)

    double at(std::size_t row, std::size_t col) const {
        return A[row * (M + 1) + col];
    }
};

OdeReduction reduce_to_ode(const ExponentialSumKernel& kernel, unsigned n);

// eig(A) sorted by (Re, Im); must coincide with the union of the real
// branches and the conjugate pair after matching.
std::vector<Complex> spectrum_oracle(const ExponentialSumKernel& kernel,
                                     unsigned n);

// Trajectories on an explicit time grid. For a single-mode run theta_n
// has one row and error_estimate holds the per-accepted-step local error
// estimates; for field reconstruction theta_n has one row per mode,
// error_estimate one max-error entry per mode, and theta_xt one row per
// x sample.
struct SimulationResult {
    std::vector<double> t_grid;
    std::vector<std::vector<double>> theta_n;
    std::vector<std::vector<double>> theta_xt;
    std::vector<double> error_estimate;
    double tail_bound = 0.0; // l2 tail of xi times the sup-norm factor
};

SimulationResult simulate_mode(const ExponentialSumKernel& kernel, unsigned n,
                               double xi_n, double t_end, double tol,
                               std::size_t grid_points = 201);
SimulationResult simulate_mode(const ExponentialSumKernel& kernel, unsigned n,
                               double xi_n, double tol,
                               const std::vector<double>& t_grid);

// theta(x,t) = sum_{n<=n_max} theta_n(t) sqrt(2/pi) sin(n x). xi supplies
// xi_1..xi_{n_max}; xi_tail_l2 bounds the l2 mass of the dropped modes
// and is only reported, not propagated.
SimulationResult reconstruct_field(const ExponentialSumKernel& kernel,
                                   const std::vector<double>& xi,
                                   std::size_t n_max,
                                   const std::vector<double>& x_samples,
                                   const std::vector<double>& t_grid,
                                   double tol, double xi_tail_l2 = 0.0);

} // namespace gp
