#include "gp/real_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gp/errors.hpp"

namespace gp {

Complex eval_G(const ExponentialSumKernel& kernel, unsigned n, Complex z) {
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    return z + n2 * kernel.eval_K(z);
}

Complex eval_G_derivative(const ExponentialSumKernel& kernel, unsigned n,
                          Complex z) {
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    return 1.0 + n2 * kernel.eval_K_derivative(z);
}

double eval_K_real(const ExponentialSumKernel& kernel, double x) {
    const double tol = kernel.pole_tolerance(Complex(x, 0.0));
    CompensatedSum s;
    for (std::size_t i = 0; i < kernel.size(); ++i) {
        const double d = x + kernel.rates()[i];
        if (std::abs(d) < tol)
            throw PoleProximityError("K evaluated within pole tolerance of -b_" +
                                     std::to_string(i + 1));
        s.add(kernel.amplitudes()[i] / d);
    }
    return s.value();
}

double eval_K_real_derivative(const ExponentialSumKernel& kernel, double x) {
    const double tol = kernel.pole_tolerance(Complex(x, 0.0));
    CompensatedSum s;
    for (std::size_t i = 0; i < kernel.size(); ++i) {
        const double d = x + kernel.rates()[i];
        if (std::abs(d) < tol)
            throw PoleProximityError("K' evaluated within pole tolerance of -b_" +
                                     std::to_string(i + 1));
        s.add(-kernel.amplitudes()[i] / (d * d));
    }
    return s.value();
}

double eval_G_real(const ExponentialSumKernel& kernel, unsigned n, double x) {
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    return x + n2 * eval_K_real(kernel, x);
}

double eval_G_real_derivative(const ExponentialSumKernel& kernel, unsigned n,
                              double x) {
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    return 1.0 + n2 * eval_K_real_derivative(kernel, x);
}

RealZeroLadder find_mu(const ExponentialSumKernel& kernel, std::size_t J) {
    if (J + 1 > kernel.size())
        throw InvalidArgument("mu ladder needs J+1 stored terms");
    RealZeroLadder ladder;
    const auto& b = kernel.rates();
    for (std::size_t j = 0; j < J; ++j) {
        const double width = b[j + 1] - b[j];
        // m -> K(-m) rises from -inf to +inf across (b_j, b_{j+1});
        // nudge the endpoints off the poles until both signs certify.
        const auto f = [&](double m) { return eval_K_real(kernel, -m); };
        const auto df = [&](double m) {
            return -eval_K_real_derivative(kernel, -m);
        };

        // Probes may not start inside the evaluation guard, which scales
        // with |z| while the interval does not.
        const double guard_lo =
            4.0 * kernel.pole_tolerance(Complex(-b[j], 0.0));
        const double guard_hi =
            4.0 * kernel.pole_tolerance(Complex(-b[j + 1], 0.0));

        double eps = 1e-9;
        double lo = b[j] + std::max(eps * width, guard_lo);
        double f_lo = f(lo);
        while (f_lo >= 0.0 && eps > 1e-14) {
            eps /= 8.0;
            const double next = b[j] + std::max(eps * width, guard_lo);
            if (next == lo) break;
            lo = next;
            f_lo = f(lo);
        }
        eps = 1e-9;
        double hi = b[j + 1] - std::max(eps * width, guard_hi);
        double f_hi = f(hi);
        while (f_hi <= 0.0 && eps > 1e-14) {
            eps /= 8.0;
            const double next = b[j + 1] - std::max(eps * width, guard_hi);
            if (next == hi) break;
            hi = next;
            f_hi = f(hi);
        }
        if (!(f_lo < 0.0 && f_hi > 0.0))
            throw BracketError("no sign change for mu_" + std::to_string(j + 1) +
                               " in (" + format_sci17(b[j]) + ", " +
                               format_sci17(b[j + 1]) + ")");

        const double mu = bracketed_root(f, df, lo, hi, f_lo, f_hi);
        const double res = std::abs(f(mu));
        // Roundoff in evaluating K scales with the absolute-value sum.
        CompensatedSum cond;
        for (std::size_t k = 0; k < kernel.size(); ++k)
            cond.add(kernel.amplitudes()[k] / std::abs(kernel.rates()[k] - mu));
        if (res > 1e-8 * std::max(1.0, cond.value()))
            throw RootNotFoundError("mu_" + std::to_string(j + 1) +
                                    " residual too large: " + format_sci17(res));
        ladder.mu.push_back(mu);
        ladder.brackets.emplace_back(b[j], b[j + 1]);
        ladder.residuals.push_back(res);
    }
    return ladder;
}

RealZeroLadder find_mu(const ExponentialSumKernel& kernel) {
    return find_mu(kernel, kernel.size() - 1);
}

std::vector<RealBranch> find_lambda_real(const ExponentialSumKernel& kernel,
                                         unsigned n,
                                         const RealZeroLadder& ladder,
                                         double tol_root) {
    if (n == 0) throw InvalidArgument("mode index must be positive");
    const auto& b = kernel.rates();
    if (ladder.mu.size() + 1 > kernel.size())
        throw InvalidArgument("ladder exceeds kernel size");

    std::vector<RealBranch> branches;
    branches.reserve(ladder.mu.size());
    const double n2 = static_cast<double>(n) * static_cast<double>(n);

    for (std::size_t j = 0; j < ladder.mu.size(); ++j) {
        const double mu = ladder.mu[j];
        const double pole = b[j + 1];
        const double width = pole - mu;
        const auto f = [&](double x) { return eval_G_real(kernel, n, x); };
        const auto df = [&](double x) {
            return eval_G_real_derivative(kernel, n, x);
        };

        // G_n(-mu_j) = -mu_j + n^2 K(-mu_j); the K residual there is at
        // machine level, so this end is negative outright.
        const double hi = -mu;
        const double f_hi = f(hi);
        if (f_hi >= 0.0)
            throw BracketError("G_n not negative at -mu_" + std::to_string(j + 1));

        // Pole end: G_n -> +inf as x -> -b_{j+1} from the right. Same
        // guard clearance as above; the mu-to-pole interval can be
        // orders of magnitude narrower than |b_{j+1}| itself.
        const double guard = 4.0 * kernel.pole_tolerance(Complex(-pole, 0.0));
        double eps = 1e-9;
        double lo = -pole + std::max(eps * width, guard);
        double f_lo = f(lo);
        while (f_lo <= 0.0 && eps > 1e-14) {
            eps /= 8.0;
            const double next = -pole + std::max(eps * width, guard);
            if (next == lo) break;
            lo = next;
            f_lo = f(lo);
        }
        if (f_lo <= 0.0)
            throw BracketError("G_n not positive near pole -b_" +
                               std::to_string(j + 2));

        RealBranch br;
        br.n = n;
        br.j = j + 1;
        br.bracket_lo = lo;
        br.bracket_hi = hi;
        br.lambda = bracketed_root(f, df, lo, hi, f_lo, f_hi);
        br.residual = std::abs(f(br.lambda));
        br.truncation_sensitive = j + 2 == kernel.size();
        const double scale = std::max(
            {1.0, std::abs(br.lambda),
             n2 * std::abs(eval_K_real(kernel, br.lambda))});
        // Low-n branches sit within a_j n^2 / |lambda| of the pole, where
        // |G'| is enormous and one ulp of lambda moves G by |G'| ulp(|lambda|).
        // That representability floor is the best any double root can do.
        const double floor_resid =
            8.0 * std::numeric_limits<double>::epsilon() *
            std::max(1.0, std::abs(br.lambda)) *
            std::abs(eval_G_real_derivative(kernel, n, br.lambda));
        if (br.residual > tol_root * scale + floor_resid)
            throw RootNotFoundError("branch " + std::to_string(j + 1) +
                                    " residual too large: " +
                                    format_sci17(br.residual));
        branches.push_back(br);
    }
    return branches;
}

MonotoneReport verify_monotone_in_n(const ExponentialSumKernel& kernel,
                                    std::size_t j, unsigned n_max) {
    if (j < 1 || j + 1 > kernel.size())
        throw InvalidArgument("branch index out of range");
    if (n_max < 1) throw InvalidArgument("n_max must be positive");

    const RealZeroLadder ladder = find_mu(kernel, j);
    const double mu = ladder.mu[j - 1];

    MonotoneReport report;
    double prev_lambda = 0.0;
    for (unsigned n = 1; n <= n_max; ++n) {
        const auto branches = find_lambda_real(kernel, n, ladder);
        const double lam = branches[j - 1].lambda;
        report.limit_gap.push_back(std::abs(lam + mu));
        if (n > 1) {
            if (!(lam > prev_lambda) && report.monotone) {
                report.monotone = false;
                report.first_violation_n = n;
            }
            const std::size_t i = report.limit_gap.size() - 1;
            if (!(report.limit_gap[i] < report.limit_gap[i - 1]) &&
                report.gaps_decreasing) {
                report.gaps_decreasing = false;
                if (report.first_violation_n == 0) report.first_violation_n = n;
            }
        }
        prev_lambda = lam;
    }
    return report;
}

} // namespace gp
