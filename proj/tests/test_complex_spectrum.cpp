#include <cmath>
#include <complex>

#include "doctest.h"
#include "gp/complex_spectrum.hpp"
#include "gp/errors.hpp"
#include "gp/kernel.hpp"
#include "gp/polynomial.hpp"
#include "gp/real_spectrum.hpp"

using gp::Complex;
using gp::ExponentialSumKernel;
using gp::KernelFamily;
using gp::Rectangle;

namespace {

// a_k = (6/pi^2) k^{-2}, b_k = k: amplitude mass exactly 1 in the limit,
// the running example for the counting contour.
ExponentialSumKernel basel_kernel(std::size_t M) {
    const double A = 6.0 / (std::acos(-1.0) * std::acos(-1.0));
    return KernelFamily::power_law(A, 2.0, 1.0, 1.0).instantiate(M);
}

} // namespace

TEST_CASE("rectangle geometry") {
    const Rectangle r{-1.0, 1.0, -1.0, 1.0};
    CHECK(r.contains(Complex(0.0, 0.0)));
    CHECK(!r.contains(Complex(1.0, 0.0)));
    CHECK(!r.contains(Complex(2.0, 0.0)));
    CHECK(r.boundary_distance(Complex(0.0, 0.0)) == doctest::Approx(1.0));
    CHECK(r.boundary_distance(Complex(0.9, 0.0)) == doctest::Approx(0.1));
    CHECK(r.boundary_distance(Complex(2.0, 1.0)) == doctest::Approx(1.0));
}

TEST_CASE("winding numbers of model maps") {
    const Rectangle unit{-1.0, 1.0, -1.0, 1.0};
    const auto identity = [](Complex z) { return z; };
    CHECK(gp::winding_number(identity, unit).winding == 1);

    const auto square = [](Complex z) { return z * z; };
    CHECK(gp::winding_number(square, unit).winding == 2);

    const auto inv_pole = [](Complex z) { return 1.0 / (z + 1.0); };
    const Rectangle around_pole{-2.0, 0.0, -1.0, 1.0};
    CHECK(gp::winding_number(inv_pole, around_pole).winding == -1);

    const auto constant = [](Complex) { return Complex(1.0, 0.0); };
    CHECK(gp::winding_number(constant, unit).winding == 0);
}

TEST_CASE("winding rejects a zero sitting on the boundary") {
    const auto identity = [](Complex z) { return z; };
    const Rectangle touching{-1.0, 1.0, 0.0, 2.0};
    CHECK_THROWS_AS((void)gp::winding_number(identity, touching),
                    gp::WindingError);
}

TEST_CASE("counting contour depth for the unit-mass kernel") {
    const auto k = basel_kernel(40);
    CHECK(k.alpha_sq() == doctest::Approx(1.0).epsilon(5e-4));

    const auto c1 = gp::build_counting_contour(k, 1);
    CHECK(c1.N_used == 3);
    CHECK(c1.rect.x_max == doctest::Approx(3.5));
    CHECK(c1.rect.x_min == doctest::Approx(-3.5));
    CHECK(c1.checks.n1_satisfied);
    CHECK(c1.checks.left_side_bound < 1.0);

    const auto c3 = gp::build_counting_contour(k, 3);
    CHECK(c3.N_used == 19);
    CHECK(c3.rect.x_max == doctest::Approx(19.5));
}

TEST_CASE("argument principle on the counting contour") {
    const auto k = basel_kernel(40);
    for (unsigned n : {1u, 2u}) {
        const auto report = gp::count_spectrum_in_contour(k, n);
        CHECK(report.winding == 1);
        CHECK(report.poles_inside == report.zeros_inside - 1);
        CHECK(report.rouche_margin < 1.0);
        CHECK(report.winding_quality < 0.25);
    }
}

TEST_CASE("zero count in a fixed box for the cubic kernel") {
    // a = [2,1], b = [0,1]: all three mode-1 roots sit inside [-5,5]^2,
    // with both poles inside as well.
    const auto k = ExponentialSumKernel::finite({2.0, 1.0}, {0.0, 1.0});
    const Rectangle box{-5.0, 5.0, -5.0, 5.0};
    const auto report = gp::count_spectrum_in_rect(k, 1, box);
    CHECK(report.poles_inside == 2);
    CHECK(report.winding == 1);
    CHECK(report.zeros_inside == 3);
}

TEST_CASE("slowly increasing rates admit no counting contour") {
    const auto k = KernelFamily::log_rates(1.0, 2.0).instantiate(12);
    CHECK_THROWS_AS((void)gp::build_counting_contour(k, 1),
                    gp::GapConditionError);

    const auto ladder = gp::find_mu(k);
    const auto slice = gp::analyze_mode(k, 1, ladder);
    CHECK(!slice.contour.has_value());
    CHECK(!slice.contour_report.has_value());
    CHECK(!slice.contour_note.empty());
    CHECK(slice.pair.has_value());
}

TEST_CASE("constant kernel pair is exactly +-i alpha n") {
    const auto k = ExponentialSumKernel::finite({4.0}, {0.0});
    for (unsigned n : {1u, 3u, 7u}) {
        const auto pair = gp::find_complex_pair(k, n);
        CHECK(std::abs(pair.lambda_plus - Complex(0.0, 2.0 * n)) < 1e-10);
        CHECK(std::abs(pair.lambda_minus - Complex(0.0, -2.0 * n)) < 1e-10);
        CHECK(pair.newton_converged);
        CHECK(pair.rel_offset < 1e-10);
    }
}

TEST_CASE("pair location for the cubic kernel, frozen") {
    const auto k = ExponentialSumKernel::finite({2.0, 1.0}, {0.0, 1.0});
    const auto pair = gp::find_complex_pair(k, 1);
    CHECK(std::abs(pair.lambda_plus -
                   Complex(-0.14238738078245478, 1.66614757361205966)) < 1e-10);
    CHECK(pair.lambda_minus == std::conj(pair.lambda_plus));
    CHECK(pair.residual <= 1e-10);
    CHECK(pair.conj_residual <= 1e-10);
}

TEST_CASE("pair stays in the localization box and tracks i alpha n") {
    const auto k = ExponentialSumKernel::finite({2.0, 1.0}, {0.0, 1.0});
    const double alpha = k.alpha();
    double prev = 1e9;
    for (unsigned n : {4u, 8u, 16u, 32u}) {
        const auto pair = gp::find_complex_pair(k, n);
        const double an = alpha * n;
        CHECK(std::abs(pair.lambda_plus.real()) < 0.25 * an);
        CHECK(pair.lambda_plus.imag() > 0.75 * an);
        CHECK(pair.lambda_plus.imag() < 1.25 * an);
        const double gap = std::abs(std::abs(pair.lambda_plus) / an - 1.0);
        CHECK(gap < prev);
        prev = gap;
    }
}

TEST_CASE("epsilon box isolates exactly one zero") {
    const auto k = ExponentialSumKernel::finite({2.0, 1.0}, {0.0, 1.0});
    const double an = k.alpha();
    const Rectangle box{-0.25 * an, 0.25 * an, an * 0.75, an * 1.25};
    const auto G = [&](Complex z) { return gp::eval_G(k, 1, z); };
    const auto w = gp::winding_number(G, box);
    CHECK(w.winding == 1);
}

TEST_CASE("analyze_mode assembles branches, pair, and oracle distances") {
    const auto k = ExponentialSumKernel::finite({2.0, 1.0}, {0.0, 1.0});
    const auto ladder = gp::find_mu(k);
    gp::AnalyzeOptions opts;
    opts.want_contour = false;
    const auto slice = gp::analyze_mode(k, 1, ladder, opts);
    REQUIRE(slice.real_branches.size() == 1);
    REQUIRE(slice.pair.has_value());
    REQUIRE(slice.oracle_dist.size() == 2);
    CHECK(slice.oracle_dist[0] < 1e-10);
    CHECK(slice.oracle_dist[1] < 1e-10);
    CHECK(gp::verify_left_half_plane(slice, k));
}

TEST_CASE("left-half-plane check tolerates the constant-kernel axis pair") {
    const auto k = ExponentialSumKernel::finite({4.0}, {0.0});
    const auto slice = gp::analyze_mode(k, 2, gp::RealZeroLadder{});
    CHECK(slice.real_branches.empty());
    REQUIRE(slice.pair.has_value());
    CHECK(gp::verify_left_half_plane(slice, k));
}

TEST_CASE("pair residual scale grows with n^2") {
    const auto k = ExponentialSumKernel::finite({1.0, 1.0}, {1.0, 3.0});
    const auto pair = gp::find_complex_pair(k, 12);
    CHECK(pair.residual <= 1e-10 * 144.0);
    const auto roots = gp::oracle_spectrum(k, 12);
    double best = 1e300;
    for (Complex r : roots) best = std::min(best, std::abs(pair.lambda_plus - r));
    CHECK(best < 1e-8 * 12.0);
}
