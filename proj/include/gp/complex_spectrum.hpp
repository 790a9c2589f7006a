#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gp/kernel.hpp"
#include "gp/numerics.hpp"
#include "gp/real_spectrum.hpp"

namespace gp {

// Complex-plane rectangle, boundary traversed counterclockwise.
struct Rectangle {
    double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0;

    bool contains(Complex z) const {
        return z.real() > x_min && z.real() < x_max && z.imag() > y_min &&
               z.imag() < y_max;
    }
    double boundary_distance(Complex z) const;
};

// Total change of arg fn around the rectangle boundary, in turns.
// Adaptive sampling: every segment is subdivided until the phase
// increment stays below pi/2, the increments are summed, and the total is
// rounded to the nearest integer. quality is the distance to that integer
// and must come back < 0.25 or the count is rejected.
struct WindingResult {
    int winding = 0;
    double quality = 0.0;
    std::size_t evaluations = 0;
};

WindingResult winding_number(const std::function<Complex(Complex)>& fn,
                             const Rectangle& rect, std::size_t samples = 16);

// The argument-principle counting contour: X = Y =
// (b_N + b_{N+1})/2 for the smallest N with b_N (b_{N+1} - b_N) > 2 alpha^2 n^2
// and X > n alpha (N advanced until both hold). The dropped-pole bound,
// the horizontal-side bound alpha^2/Y, and the right-side bound alpha^2/X
// are re-evaluated numerically and kept as evidence.
struct BoundChecks {
    bool n1_satisfied = false;    // b_N delta_N > 2 alpha^2 n^2
    bool x_exceeds_nalpha = false;
    bool y_exceeds_nalpha = false;
    double left_side_bound = 0.0;  // 2 alpha^2 / (b_N delta_N), times n^2 < 1
    double horiz_side_bound = 0.0; // alpha^2 / Y
    double right_side_bound = 0.0; // alpha^2 / X
    double measured_margin[4] = {0, 0, 0, 0}; // per-side max n^2|K(z)|/|z|
};

struct CountingContour {
    Rectangle rect;
    std::size_t N_used = 0;
    BoundChecks checks;
};

CountingContour build_counting_contour(const ExponentialSumKernel& kernel, unsigned n);

// Argument-principle count of G_n zeros inside a rectangle.
struct ContourReport {
    Rectangle rect;
    int winding = 0;
    std::size_t poles_inside = 0;
    std::size_t zeros_inside = 0;
    BoundChecks bound_checks;
    double winding_quality = 0.0;
    double rouche_margin = 0.0; // max over samples of n^2 |K(z)| / |z|
};

ContourReport count_spectrum_in_rect(const ExponentialSumKernel& kernel,
                                     unsigned n, const Rectangle& rect,
                                     std::size_t samples = 16);

// Same count on the counting contour, with the zeros = poles + 1 identity and
// the Rouche premise n^2 |K(z)| < |z| enforced on all four sides.
ContourReport count_spectrum_in_contour(const ExponentialSumKernel& kernel,
                                        unsigned n);

// The non-real conjugate pair near +-i alpha n. Newton from the seed
// i alpha n; when that fails the localization box with corners
// (+-eps alpha n, i alpha n (1 -+ eps)) is bisected by winding count until
// the zero is isolated, then polished. lambda_minus is verified conjugate
// by evaluating G_n there, not assumed.
struct ComplexPair {
    unsigned n = 0;
    Complex lambda_plus;
    Complex lambda_minus;
    double box_radius = 0.0; // half-diagonal of the localization box used
    double residual = 0.0;   // |G_n(lambda_plus)|
    double conj_residual = 0.0;
    double rel_offset = 0.0; // |lambda_plus - i alpha n| / n
    bool newton_converged = false;
};

ComplexPair find_complex_pair(const ExponentialSumKernel& kernel, unsigned n,
                              double eps = 0.25, double tol_root = 1e-10);

// Everything the solver knows about mode n. The contour report is absent
// when no admissible N exists in the stored prefix (slowly increasing
// rates); the oracle distance is absent above the shadow-oracle size cap.
struct SpectrumSlice {
    unsigned n = 0;
    RealZeroLadder ladder;
    std::vector<RealBranch> real_branches;
    std::optional<ComplexPair> pair;
    std::optional<CountingContour> contour;
    std::optional<ContourReport> contour_report;
    std::string contour_note; // why the contour is absent, when it is
    std::vector<double> oracle_dist; // per real branch, then the pair
};

struct AnalyzeOptions {
    bool want_contour = true;
    bool want_pair = true;
    bool want_oracle = true; // companion shadow oracle for M <= oracle_cap
    std::size_t oracle_cap = 12;
    double eps = 0.25;
    double tol_root = 1e-10;
};

SpectrumSlice analyze_mode(const ExponentialSumKernel& kernel, unsigned n,
                           const RealZeroLadder& ladder,
                           const AnalyzeOptions& opts = {});

// Re lambda <= 0 across the slice, strict except for the constant kernel
// whose pair sits exactly on the imaginary axis.
bool verify_left_half_plane(const SpectrumSlice& slice,
                            const ExponentialSumKernel& kernel,
                            double tol = 1e-12);

} // namespace gp
