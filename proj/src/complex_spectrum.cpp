#include "gp/complex_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "gp/errors.hpp"
#include "gp/polynomial.hpp"

namespace gp {

namespace {

constexpr int kMaxSubdivisionDepth = 30;
constexpr std::size_t kMaxEvaluations = 4'000'000;

double guard_distance(unsigned n, double alpha) {
    return 1e-6 * std::max(1.0, static_cast<double>(n) * alpha);
}

struct PhaseTracker {
    const std::function<Complex(Complex)>& fn;
    CompensatedSum turn;
    std::size_t evaluations = 0;

    Complex eval(Complex z) {
        if (++evaluations > kMaxEvaluations)
            throw WindingError("evaluation budget exhausted on contour");
        const Complex v = fn(z);
        if (v == Complex(0.0, 0.0))
            throw WindingError("exact zero on contour at z = (" +
                               format_sci17(z.real()) + ", " +
                               format_sci17(z.imag()) + ")");
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw WindingError("non-finite boundary value");
        return v;
    }

    // Phase increment over [z0, z1], subdividing until each piece turns
    // by less than pi/2 so no winding can hide between samples.
    void segment(Complex z0, Complex f0, Complex z1, Complex f1, int depth) {
        double d = std::arg(f1) - std::arg(f0);
        if (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
        if (d <= -std::numbers::pi) d += 2.0 * std::numbers::pi;
        if (std::abs(d) < std::numbers::pi / 2.0) {
            turn.add(d);
            return;
        }
        if (depth >= kMaxSubdivisionDepth)
            throw WindingError("subdivision depth limit: zero or pole within "
                               "resolution of the contour");
        const Complex zm = 0.5 * (z0 + z1);
        const Complex fm = eval(zm);
        segment(z0, f0, zm, fm, depth + 1);
        segment(zm, fm, z1, f1, depth + 1);
    }
};

} // namespace

double Rectangle::boundary_distance(Complex z) const {
    const double dx_out =
        std::max({x_min - z.real(), z.real() - x_max, 0.0});
    const double dy_out =
        std::max({y_min - z.imag(), z.imag() - y_max, 0.0});
    if (dx_out > 0.0 || dy_out > 0.0) return std::hypot(dx_out, dy_out);
    return std::min({z.real() - x_min, x_max - z.real(), z.imag() - y_min,
                     y_max - z.imag()});
}

WindingResult winding_number(const std::function<Complex(Complex)>& fn,
                             const Rectangle& rect, std::size_t samples) {
    if (!(rect.x_min < rect.x_max && rect.y_min < rect.y_max))
        throw InvalidArgument("degenerate rectangle");
    if (samples < 4) throw InvalidArgument("need at least 4 samples per side");

    const Complex corners[5] = {
        {rect.x_max, rect.y_min}, {rect.x_max, rect.y_max},
        {rect.x_min, rect.y_max}, {rect.x_min, rect.y_min},
        {rect.x_max, rect.y_min}};

    PhaseTracker tracker{fn, {}, 0};
    Complex z_prev = corners[0];
    Complex f_prev = tracker.eval(z_prev);
    for (int side = 0; side < 4; ++side) {
        for (std::size_t i = 1; i <= samples; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(samples);
            const Complex z = corners[side] + t * (corners[side + 1] - corners[side]);
            const Complex f = tracker.eval(z);
            tracker.segment(z_prev, f_prev, z, f, 0);
            z_prev = z;
            f_prev = f;
        }
    }

    const double total = tracker.turn.value() / (2.0 * std::numbers::pi);
    WindingResult result;
    result.winding = static_cast<int>(std::llround(total));
    result.quality = std::abs(total - static_cast<double>(result.winding));
    result.evaluations = tracker.evaluations;
    if (result.quality >= 0.25)
        throw WindingError("winding total " + format_sci17(total) +
                           " too far from an integer");
    return result;
}

CountingContour build_counting_contour(const ExponentialSumKernel& kernel,
                                 unsigned n) {
    if (n == 0) throw InvalidArgument("mode index must be positive");
    const double alpha_sq = kernel.alpha_sq();
    const double nalpha = static_cast<double>(n) * kernel.alpha();
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    const auto& b = kernel.rates();

    for (std::size_t N = 1; N + 1 <= kernel.size(); ++N) {
        const double bN = b[N - 1];
        const double deltaN = b[N] - bN;
        if (!(bN * deltaN > 2.0 * alpha_sq * n2)) continue;
        const double X = 0.5 * (bN + b[N]);
        if (!(X > nalpha)) continue;

        CountingContour contour;
        contour.N_used = N;
        contour.rect = Rectangle{-X, X, -X, X};
        contour.checks.n1_satisfied = true;
        contour.checks.x_exceeds_nalpha = true;
        contour.checks.y_exceeds_nalpha = true;
        contour.checks.left_side_bound = 2.0 * alpha_sq / (bN * deltaN);
        contour.checks.horiz_side_bound = alpha_sq / X;
        contour.checks.right_side_bound = alpha_sq / X;
        return contour;
    }
    throw GapConditionError(
        "no admissible contour depth within the stored prefix (M = " +
        std::to_string(kernel.size()) + ", n = " + std::to_string(n) + ")");
}

ContourReport count_spectrum_in_rect(const ExponentialSumKernel& kernel,
                                     unsigned n, const Rectangle& rect,
                                     std::size_t samples) {
    if (n == 0) throw InvalidArgument("mode index must be positive");
    const double guard = guard_distance(n, kernel.alpha());

    ContourReport report;
    report.rect = rect;
    for (double bk : kernel.rates()) {
        const Complex pole(-bk, 0.0);
        if (rect.boundary_distance(pole) < guard)
            throw WindingError("pole -b within guard distance of the boundary");
        if (rect.contains(pole)) ++report.poles_inside;
    }

    const auto G = [&](Complex z) { return eval_G(kernel, n, z); };
    const WindingResult w = winding_number(G, rect, samples);
    report.winding = w.winding;
    report.winding_quality = w.quality;
    if (w.winding + static_cast<int>(report.poles_inside) < 0)
        throw WindingError("zero count below pole count: winding " +
                           std::to_string(w.winding));
    report.zeros_inside =
        static_cast<std::size_t>(w.winding + static_cast<int>(report.poles_inside));

    // Rouche premise n^2 |K(z)| < |z|, sampled per side; the dropped-tail
    // bound is charged against the measurement.
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    const std::size_t rs = std::max<std::size_t>(samples, 128);
    const Complex corners[5] = {
        {rect.x_max, rect.y_min}, {rect.x_max, rect.y_max},
        {rect.x_min, rect.y_max}, {rect.x_min, rect.y_min},
        {rect.x_max, rect.y_min}};
    for (int side = 0; side < 4; ++side) {
        double worst = 0.0;
        for (std::size_t i = 0; i <= rs; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(rs);
            const Complex z = corners[side] + t * (corners[side + 1] - corners[side]);
            const auto kv = kernel.eval_K_bounded(z);
            const double ratio =
                n2 * (std::abs(kv.value) + kv.tail_err) / std::abs(z);
            worst = std::max(worst, ratio);
        }
        report.bound_checks.measured_margin[side] = worst;
        report.rouche_margin = std::max(report.rouche_margin, worst);
    }
    return report;
}

ContourReport count_spectrum_in_contour(const ExponentialSumKernel& kernel,
                                        unsigned n) {
    const CountingContour contour = build_counting_contour(kernel, n);
    ContourReport report = count_spectrum_in_rect(kernel, n, contour.rect);
    const auto measured = report.bound_checks.measured_margin;
    report.bound_checks = contour.checks;
    std::copy(measured, measured + 4, report.bound_checks.measured_margin);

    if (report.rouche_margin >= 1.0)
        throw RoucheError("boundary sample violates n^2|K| < |z|: margin " +
                          format_sci17(report.rouche_margin));
    if (report.poles_inside != contour.N_used)
        throw WindingError("pole count " + std::to_string(report.poles_inside) +
                           " does not match contour depth " +
                           std::to_string(contour.N_used));
    if (report.zeros_inside != report.poles_inside + 1)
        throw WindingError("zero count " + std::to_string(report.zeros_inside) +
                           " != poles + 1 on the counting contour");
    return report;
}

namespace {

// Winding count of G_n over a pole-free box, retried on slightly inflated
// copies when a zero sits on the boundary.
WindingResult winding_with_retry(const std::function<Complex(Complex)>& fn,
                                 Rectangle box) {
    static constexpr double kInflate[4] = {1.0, 1.013, 0.988, 1.027};
    const double cx = 0.5 * (box.x_min + box.x_max);
    const double cy = 0.5 * (box.y_min + box.y_max);
    for (int attempt = 0; attempt < 4; ++attempt) {
        Rectangle r = box;
        const double s = kInflate[attempt];
        r.x_min = cx + (box.x_min - cx) * s;
        r.x_max = cx + (box.x_max - cx) * s;
        r.y_min = cy + (box.y_min - cy) * s;
        r.y_max = cy + (box.y_max - cy) * s;
        try {
            return winding_number(fn, r);
        } catch (const WindingError&) {
            if (attempt == 3) throw;
        }
    }
    throw WindingError("unreachable");
}

} // namespace

ComplexPair find_complex_pair(const ExponentialSumKernel& kernel, unsigned n,
                              double eps, double tol_root) {
    if (n == 0) throw InvalidArgument("mode index must be positive");
    if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("eps must be in (0,1)");

    const double an = static_cast<double>(n) * kernel.alpha();
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    const double tol = tol_root * std::max(1.0, n2);
    const double im_floor = 1e-8 * std::max(1.0, an);
    const auto G = [&](Complex z) { return eval_G(kernel, n, z); };
    const auto dG = [&](Complex z) { return eval_G_derivative(kernel, n, z); };

    ComplexPair pair;
    pair.n = n;
    const Rectangle eps_box{-eps * an, eps * an, an * (1.0 - eps),
                            an * (1.0 + eps)};
    pair.box_radius = 0.5 * std::hypot(eps_box.x_max - eps_box.x_min,
                                       eps_box.y_max - eps_box.y_min);

    std::optional<Complex> root = complex_newton(G, dG, Complex(0.0, an), tol);
    if (root && root->imag() < 0.0) root = std::conj(*root);
    if (root && root->imag() > im_floor && std::abs(G(*root)) <= tol) {
        pair.newton_converged = true;
        pair.lambda_plus = *root;
    } else {
        // Winding-guided bisection of the localization box. The box floor
        // sits at an(1-eps) > 0, so no pole of G_n is inside and the
        // winding is the zero count outright.
        Rectangle box = eps_box;
        WindingResult w = winding_with_retry(G, box);
        if (w.winding < 1)
            throw RootNotFoundError(
                "no zero in the localization box for mode " + std::to_string(n));
        int count = w.winding;
        static constexpr double kRatios[4] = {0.5, 0.53, 0.47, 0.61};

        while (std::max(box.x_max - box.x_min, box.y_max - box.y_min) >
               1e-6 * std::max(1.0, an)) {
            const bool split_x =
                (box.x_max - box.x_min) >= (box.y_max - box.y_min);
            bool advanced = false;
            for (double ratio : kRatios) {
                Rectangle lower = box;
                if (split_x)
                    lower.x_max = box.x_min + ratio * (box.x_max - box.x_min);
                else
                    lower.y_max = box.y_min + ratio * (box.y_max - box.y_min);
                try {
                    const WindingResult wl = winding_number(G, lower);
                    if (wl.winding >= 1) {
                        box = lower;
                        count = wl.winding;
                    } else {
                        if (split_x)
                            box.x_min = lower.x_max;
                        else
                            box.y_min = lower.y_max;
                        count -= wl.winding;
                    }
                    advanced = true;
                    break;
                } catch (const WindingError&) {
                    continue; // zero near the split line; jitter the ratio
                }
            }
            if (!advanced)
                throw WindingError("localization box split failed at every "
                                   "jittered ratio");
            if (count < 1)
                throw RootNotFoundError("zero lost during box bisection");
        }

        const Complex center(0.5 * (box.x_min + box.x_max),
                             0.5 * (box.y_min + box.y_max));
        root = complex_newton(G, dG, center, tol);
        if (!root || !(root->imag() > im_floor) || std::abs(G(*root)) > tol)
            throw RootNotFoundError(
                "refinement failed inside the localization box for mode " +
                std::to_string(n));
        pair.lambda_plus = *root;
        pair.box_radius = 0.5 * std::hypot(box.x_max - box.x_min,
                                           box.y_max - box.y_min);
    }

    pair.residual = std::abs(G(pair.lambda_plus));
    pair.lambda_minus = std::conj(pair.lambda_plus);
    pair.conj_residual = std::abs(G(pair.lambda_minus));
    if (pair.conj_residual > tol)
        throw RootNotFoundError("conjugate of the located pair is not a root");
    pair.rel_offset =
        std::abs(pair.lambda_plus - Complex(0.0, an)) / static_cast<double>(n);
    return pair;
}

SpectrumSlice analyze_mode(const ExponentialSumKernel& kernel, unsigned n,
                           const RealZeroLadder& ladder,
                           const AnalyzeOptions& opts) {
    SpectrumSlice slice;
    slice.n = n;
    slice.ladder = ladder;
    slice.real_branches = find_lambda_real(kernel, n, ladder, opts.tol_root);
    if (opts.want_pair)
        slice.pair = find_complex_pair(kernel, n, opts.eps, opts.tol_root);

    if (opts.want_contour) {
        try {
            slice.contour = build_counting_contour(kernel, n);
            slice.contour_report = count_spectrum_in_contour(kernel, n);
        } catch (const GapConditionError& e) {
            slice.contour.reset();
            slice.contour_report.reset();
            slice.contour_note = e.what();
        }
    }

    if (opts.want_oracle && kernel.size() <= opts.oracle_cap) {
        const auto roots = oracle_spectrum(kernel, n);
        const auto nearest = [&](Complex z) {
            double best = std::numeric_limits<double>::infinity();
            for (Complex r : roots) best = std::min(best, std::abs(z - r));
            return best;
        };
        for (const auto& br : slice.real_branches)
            slice.oracle_dist.push_back(nearest(Complex(br.lambda, 0.0)));
        if (slice.pair) slice.oracle_dist.push_back(nearest(slice.pair->lambda_plus));
    }
    return slice;
}

bool verify_left_half_plane(const SpectrumSlice& slice,
                            const ExponentialSumKernel& kernel, double tol) {
    for (const auto& br : slice.real_branches)
        if (!(br.lambda < -tol)) return false;
    if (slice.pair) {
        const double re = slice.pair->lambda_plus.real();
        if (kernel.is_constant()) {
            if (std::abs(re) > tol) return false;
        } else {
            if (!(re < -tol)) return false;
        }
    }
    return true;
}

} // namespace gp
