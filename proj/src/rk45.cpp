#include "gp/rk45.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gp/errors.hpp"
#include "gp/numerics.hpp"

namespace gp {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// y5 - y4 coefficients (applied to k1..k6 and the FSAL stage k7).
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

void hermite(const std::vector<double>& y0, const std::vector<double>& f0,
             const std::vector<double>& y1, const std::vector<double>& f1,
             double h, double theta, std::vector<double>& out) {
    const double t2 = theta * theta, t3 = t2 * theta;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + theta;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    out.resize(y0.size());
    for (std::size_t i = 0; i < y0.size(); ++i)
        out[i] = h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i];
}

} // namespace

Rk45Report rk45_dense(const Derivative& f, std::vector<double> y0, double t0,
                      double t_end, double tol,
                      const std::vector<double>& t_grid,
                      std::vector<std::vector<double>>& states_at_grid,
                      std::vector<double>* step_errors) {
    if (!(t_end > t0)) throw InvalidArgument("t_end must exceed t0");
    if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (t_grid[i] < t0 || t_grid[i] > t_end)
            throw InvalidArgument("grid time outside integration range");
        if (i > 0 && t_grid[i] <= t_grid[i - 1])
            throw InvalidArgument("grid times must be strictly ascending");
    }

    const std::size_t dim = y0.size();
    states_at_grid.assign(t_grid.size(), {});
    std::size_t grid_pos = 0;
    while (grid_pos < t_grid.size() && t_grid[grid_pos] <= t0) {
        states_at_grid[grid_pos] = y0;
        ++grid_pos;
    }

    std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim),
        k7(dim), ytmp(dim), ynext(dim);
    f(t0, y0, k1);

    double t = t0;
    double h = (t_end - t0) / 100.0;
    {
        double fmag = 0.0, ymag = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            fmag = std::max(fmag, std::abs(k1[i]));
            ymag = std::max(ymag, std::abs(y0[i]));
        }
        if (fmag > 0.0) h = std::min(h, 0.01 * (1.0 + ymag) / fmag);
    }

    Rk45Report report;
    const double h_floor = 1e-14 * std::max(1.0, std::abs(t_end - t0));
    constexpr std::size_t kMaxSteps = 50'000'000;

    while (t < t_end) {
        if (report.steps_accepted + report.steps_rejected > kMaxSteps)
            throw IntegratorError("step budget exhausted at t = " +
                                      format_sci17(t),
                                  t);
        h = std::min(h, t_end - t);
        if (h < h_floor)
            throw IntegratorError("step size underflow at t = " +
                                      format_sci17(t),
                                  t);

        for (std::size_t i = 0; i < dim; ++i)
            ytmp[i] = y0[i] + h * a21 * k1[i];
        f(t + c2 * h, ytmp, k2);
        for (std::size_t i = 0; i < dim; ++i)
            ytmp[i] = y0[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(t + c3 * h, ytmp, k3);
        for (std::size_t i = 0; i < dim; ++i)
            ytmp[i] = y0[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(t + c4 * h, ytmp, k4);
        for (std::size_t i = 0; i < dim; ++i)
            ytmp[i] = y0[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] +
                                   a54 * k4[i]);
        f(t + c5 * h, ytmp, k5);
        for (std::size_t i = 0; i < dim; ++i)
            ytmp[i] = y0[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                                   a64 * k4[i] + a65 * k5[i]);
        f(t + h, ytmp, k6);
        for (std::size_t i = 0; i < dim; ++i)
            ynext[i] = y0[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                                    b5 * k5[i] + b6 * k6[i]);
        f(t + h, ynext, k7);

        double err = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                                  e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double w =
                1.0 + std::max(std::abs(y0[i]), std::abs(ynext[i]));
            err = std::max(err, std::abs(e) / w);
        }

        if (err <= tol * h) {
            // Fill grid points covered by [t, t+h] via cubic Hermite.
            while (grid_pos < t_grid.size() && t_grid[grid_pos] <= t + h) {
                const double theta = (t_grid[grid_pos] - t) / h;
                hermite(y0, k1, ynext, k7, h, theta, states_at_grid[grid_pos]);
                ++grid_pos;
            }
            t += h;
            y0.swap(ynext);
            k1.swap(k7); // FSAL
            ++report.steps_accepted;
            report.max_error_per_unit =
                std::max(report.max_error_per_unit, err / h);
            if (step_errors) step_errors->push_back(err);
        } else {
            ++report.steps_rejected;
        }

        // err ~ C h^5, err/h targeted at tol: exponent 1/4.
        const double scale =
            err > 0.0 ? 0.9 * std::pow(tol * h / err, 0.25) : 5.0;
        h *= std::clamp(scale, 0.2, 5.0);
    }

    while (grid_pos < t_grid.size()) {
        states_at_grid[grid_pos] = y0;
        ++grid_pos;
    }
    return report;
}

} // namespace gp
