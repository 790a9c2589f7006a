#include "gp/numerics.hpp"

#include <cstdio>
#include <limits>

namespace gp {

std::string format_sci17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

double bracketed_root(const std::function<double(double)>& f,
                      const std::function<double(double)>& df,
                      double lo, double hi, double f_lo, double f_hi,
                      double width_factor) {
    if (!(lo < hi) || !(f_lo * f_hi < 0.0))
        return std::numeric_limits<double>::quiet_NaN();

    const double target = width_factor * (hi - lo);

    // Phase 1: plain bisection down to a fraction of the initial width.
    while (hi - lo > target) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break; // width at rounding floor
        double f_mid = f(mid);
        if (f_mid == 0.0) return mid;
        if ((f_lo < 0.0) == (f_mid < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }

    // Phase 2: Newton from the midpoint, retreating to bisection whenever
    // the step escapes the bracket or fails to shrink |f|.
    double x = 0.5 * (lo + hi);
    double fx = f(x);
    if (fx == 0.0) return x;
    double best_x = x, best_f = std::abs(fx);

    for (int iter = 0; iter < 120; ++iter) {
        // Keep the bracket current.
        if ((f_lo < 0.0) == (fx < 0.0)) {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
            f_hi = fx;
        }
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() *
                           std::max(1.0, std::max(std::abs(lo), std::abs(hi))))
            break;

        double d = df(x);
        double x_next;
        if (d != 0.0) {
            x_next = x - fx / d;
            if (!(x_next > lo && x_next < hi)) x_next = 0.5 * (lo + hi);
        } else {
            x_next = 0.5 * (lo + hi);
        }
        if (x_next == x) break;
        x = x_next;
        fx = f(x);
        if (fx == 0.0) return x;
        if (std::abs(fx) < best_f) {
            best_f = std::abs(fx);
            best_x = x;
        }
    }
    return std::abs(fx) <= best_f ? x : best_x;
}

std::optional<Complex> complex_newton(const std::function<Complex(Complex)>& g,
                                      const std::function<Complex(Complex)>& dg,
                                      Complex seed, double tol, int max_iter) {
    Complex z = seed;
    Complex gz = g(z);
    if (std::abs(gz) <= tol) return z;

    for (int iter = 0; iter < max_iter; ++iter) {
        Complex d = dg(z);
        if (d == Complex(0.0, 0.0)) return std::nullopt;
        Complex step = gz / d;
        Complex z_next = z - step;
        Complex g_next = g(z_next);

        // Damping: halve the step while |g| grows.
        int halvings = 0;
        while (std::abs(g_next) > std::abs(gz) && halvings < 6) {
            step *= 0.5;
            z_next = z - step;
            g_next = g(z_next);
            ++halvings;
        }
        if (std::abs(g_next) > std::abs(gz) && halvings == 6)
            return std::nullopt;

        z = z_next;
        gz = g_next;
        if (std::abs(gz) <= tol) {
            // Two polishing steps; quadratic convergence makes them cheap
            // and the residual lands near the conditioning floor.
            for (int polish = 0; polish < 2; ++polish) {
                Complex dp = dg(z);
                if (dp == Complex(0.0, 0.0)) break;
                Complex z_p = z - g(z) / dp;
                Complex g_p = g(z_p);
                if (std::abs(g_p) <= std::abs(gz)) {
                    z = z_p;
                    gz = g_p;
                }
            }
            return z;
        }
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            return std::nullopt;
    }
    return std::nullopt;
}

} // namespace gp
