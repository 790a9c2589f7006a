#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <string>

namespace gp {

using Complex = std::complex<double>;

// Neumaier compensated accumulator. Summation order is the caller's
// responsibility; the accumulator only removes rounding drift so that
// reported residuals reproduce across platforms.
class CompensatedSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Scientific notation with 17 significant digits: round-trip exact for
// doubles and byte-stable across runs.
std::string format_sci17(double x);

// Root of f on a bracket [lo, hi] with f(lo) and f(hi) of opposite sign.
// Bisection narrows the bracket to width_factor times the initial width,
// then Newton steps refine, falling back to bisection whenever a step
// would leave the bracket (poles sit next to every bracket we solve in).
// Returns the abscissa with |f| smallest among the final iterates.
double bracketed_root(const std::function<double(double)>& f,
                      const std::function<double(double)>& df,
                      double lo, double hi, double f_lo, double f_hi,
                      double width_factor = 1e-3);

// Damped Newton iteration for a complex zero of g. Steps that increase
// |g| are halved a few times before the iteration is declared divergent.
// Returns the root when |g(z)| <= tol, nullopt otherwise.
std::optional<Complex> complex_newton(const std::function<Complex(Complex)>& g,
                                      const std::function<Complex(Complex)>& dg,
                                      Complex seed, double tol,
                                      int max_iter = 80);

} // namespace gp
