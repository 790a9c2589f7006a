#include "gp/time_domain.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "gp/errors.hpp"
#include "gp/polynomial.hpp"
#include "gp/rk45.hpp"

namespace gp {

OdeReduction reduce_to_ode(const ExponentialSumKernel& kernel, unsigned n) {
    if (n == 0) throw InvalidArgument("mode index must be positive");
    const std::size_t M = kernel.size();
    const double n2 = static_cast<double>(n) * static_cast<double>(n);

    OdeReduction red;
    red.n = n;
    red.M = M;
    red.A.assign((M + 1) * (M + 1), 0.0);
    for (std::size_t k = 0; k < M; ++k) {
        red.A[0 * (M + 1) + (k + 1)] = -n2 * kernel.amplitudes()[k];
        red.A[(k + 1) * (M + 1) + 0] = 1.0;
        red.A[(k + 1) * (M + 1) + (k + 1)] = -kernel.rates()[k];
    }

    Eigen::MatrixXd A(static_cast<Eigen::Index>(M + 1),
                      static_cast<Eigen::Index>(M + 1));
    for (std::size_t r = 0; r <= M; ++r)
        for (std::size_t c = 0; c <= M; ++c)
            A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                red.at(r, c);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(A, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw Error("dense eigensolve did not converge");

    red.eigenvalues.resize(M + 1);
    for (std::size_t i = 0; i <= M; ++i)
        red.eigenvalues[i] = solver.eigenvalues()(static_cast<Eigen::Index>(i));
    sort_spectrum(red.eigenvalues);
    return red;
}

std::vector<Complex> spectrum_oracle(const ExponentialSumKernel& kernel,
                                     unsigned n) {
    return reduce_to_ode(kernel, n).eigenvalues;
}

namespace {

std::vector<double> uniform_grid(double t_end, std::size_t points) {
    if (points < 2) throw InvalidArgument("grid needs at least two points");
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i)
        grid[i] = t_end * static_cast<double>(i) / static_cast<double>(points - 1);
    grid.back() = t_end;
    return grid;
}

} // namespace

SimulationResult simulate_mode(const ExponentialSumKernel& kernel, unsigned n,
                               double xi_n, double tol,
                               const std::vector<double>& t_grid) {
    if (n == 0) throw InvalidArgument("mode index must be positive");
    if (t_grid.empty()) throw InvalidArgument("empty time grid");
    const double t_end = t_grid.back();
    if (!(t_end > 0.0)) throw InvalidArgument("t_end must be positive");

    const std::size_t M = kernel.size();
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    const auto& a = kernel.amplitudes();
    const auto& b = kernel.rates();

    const Derivative deriv = [&](double, const std::vector<double>& y,
                                 std::vector<double>& dydt) {
        CompensatedSum s;
        for (std::size_t k = 0; k < M; ++k) s.add(a[k] * y[k + 1]);
        dydt.resize(M + 1);
        dydt[0] = -n2 * s.value();
        for (std::size_t k = 0; k < M; ++k)
            dydt[k + 1] = y[0] - b[k] * y[k + 1];
    };

    std::vector<double> y0(M + 1, 0.0);
    y0[0] = xi_n;

    SimulationResult result;
    result.t_grid = t_grid;
    std::vector<std::vector<double>> states;
    rk45_dense(deriv, y0, 0.0, t_end, tol, t_grid, states,
               &result.error_estimate);

    result.theta_n.emplace_back();
    result.theta_n[0].reserve(t_grid.size());
    for (const auto& state : states) result.theta_n[0].push_back(state[0]);
    return result;
}

SimulationResult simulate_mode(const ExponentialSumKernel& kernel, unsigned n,
                               double xi_n, double t_end, double tol,
                               std::size_t grid_points) {
    return simulate_mode(kernel, n, xi_n, tol, uniform_grid(t_end, grid_points));
}

SimulationResult reconstruct_field(const ExponentialSumKernel& kernel,
                                   const std::vector<double>& xi,
                                   std::size_t n_max,
                                   const std::vector<double>& x_samples,
                                   const std::vector<double>& t_grid,
                                   double tol, double xi_tail_l2) {
    if (xi.size() != n_max)
        throw InvalidArgument("xi must supply exactly n_max coefficients");
    if (n_max == 0) throw InvalidArgument("need at least one mode");
    for (double x : x_samples)
        if (!(x > 0.0 && x < std::numbers::pi))
            throw InvalidArgument("x samples must lie in (0, pi)");

    SimulationResult result;
    result.t_grid = t_grid;
    result.theta_n.resize(n_max);
    result.error_estimate.resize(n_max, 0.0);

    for (std::size_t m = 0; m < n_max; ++m) {
        SimulationResult mode = simulate_mode(
            kernel, static_cast<unsigned>(m + 1), xi[m], tol, t_grid);
        result.theta_n[m] = std::move(mode.theta_n[0]);
        for (double e : mode.error_estimate)
            result.error_estimate[m] = std::max(result.error_estimate[m], e);
    }

    const double norm = std::sqrt(2.0 / std::numbers::pi);
    result.theta_xt.assign(x_samples.size(),
                           std::vector<double>(t_grid.size(), 0.0));
    for (std::size_t xi_idx = 0; xi_idx < x_samples.size(); ++xi_idx) {
        for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
            CompensatedSum s;
            for (std::size_t m = 0; m < n_max; ++m)
                s.add(result.theta_n[m][ti] * norm *
                      std::sin(static_cast<double>(m + 1) * x_samples[xi_idx]));
            result.theta_xt[xi_idx][ti] = s.value();
        }
    }
    result.tail_bound = xi_tail_l2 * norm;
    return result;
}

} // namespace gp
