#include <cmath>
#include <complex>

#include "doctest.h"
#include "gp/errors.hpp"
#include "gp/kernel.hpp"

using gp::Complex;
using gp::ExponentialSumKernel;
using gp::KernelFamily;

TEST_CASE("finite kernel evaluates k(t) and alpha") {
    const auto k = ExponentialSumKernel::finite({1.0, 1.0}, {1.0, 3.0});
    CHECK(k.size() == 2);
    CHECK(k.alpha_sq() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(k.alpha() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(!k.has_tail());
    CHECK(!k.is_constant());
    CHECK(k.delta(1) == doctest::Approx(2.0));

    // e^{-1} + e^{-3}, frozen from an independent evaluation.
    CHECK(k.eval_k(1.0) ==
          doctest::Approx(0.41766650953930626).epsilon(1e-15));
    CHECK(k.eval_k(0.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(k.eval_k(0.0, 1) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("K(z) matches partial fractions and decays like alpha^2/z") {
    const auto k = ExponentialSumKernel::finite({1.0, 1.0}, {1.0, 3.0});

    const Complex z(2.0, 1.0);
    const Complex expect = 1.0 / (z + 1.0) + 1.0 / (z + 3.0);
    CHECK(std::abs(k.eval_K(z) - expect) < 1e-15);

    const Complex far(0.0, 1e6);
    CHECK(std::abs(far * k.eval_K(far) - k.alpha_sq()) < 1e-5);

    const Complex expect_d =
        -1.0 / ((z + 1.0) * (z + 1.0)) - 1.0 / ((z + 3.0) * (z + 3.0));
    CHECK(std::abs(k.eval_K_derivative(z) - expect_d) < 1e-15);
}

TEST_CASE("K evaluation near a pole throws") {
    const auto k = ExponentialSumKernel::finite({1.0, 1.0}, {1.0, 3.0});
    CHECK_THROWS_AS((void)k.eval_K(Complex(-1.0, 0.0)),
                    gp::PoleProximityError);
    CHECK_THROWS_AS((void)k.eval_K(Complex(-3.0, 1e-14)),
                    gp::PoleProximityError);
    CHECK_NOTHROW((void)k.eval_K(Complex(-2.0, 0.0)));
}

TEST_CASE("tail bounds: exact suffix for finite lists") {
    const auto k = ExponentialSumKernel::finite({1.0, 2.0, 4.0}, {0.0, 1.0, 2.0});
    CHECK(k.tail_bound(0) == doctest::Approx(7.0));
    CHECK(k.tail_bound(1) == doctest::Approx(6.0));
    CHECK(k.tail_bound(2) == doctest::Approx(4.0));
    CHECK(k.tail_bound(3) == doctest::Approx(0.0));
    CHECK(k.eval_K_bounded(Complex(1.0, 0.0)).tail_err == 0.0);
}

TEST_CASE("truncated kernel charges the dropped tail") {
    const auto k =
        ExponentialSumKernel::truncated({1.0}, {1.0}, 0.5, 2.0);
    CHECK(k.alpha_sq() == doctest::Approx(1.5));
    CHECK(k.has_tail());
    CHECK(k.tail_bound(1) == doctest::Approx(0.5));

    // Dropped poles on (-inf, -2]; at z = 0 the distance is 2.
    const auto kv = k.eval_K_bounded(Complex(0.0, 0.0));
    CHECK(kv.value.real() == doctest::Approx(1.0));
    CHECK(kv.tail_err == doctest::Approx(0.25));

    // Left of the ray start the distance is |Im z|.
    const auto kv2 = k.eval_K_bounded(Complex(-5.0, 1.0));
    CHECK(kv2.tail_err == doctest::Approx(0.5));
}

TEST_CASE("kernel validation rejects malformed input") {
    CHECK_THROWS_AS(ExponentialSumKernel::finite({}, {}), gp::InvalidArgument);
    CHECK_THROWS_AS(ExponentialSumKernel::finite({1.0}, {1.0, 2.0}),
                    gp::InvalidArgument);
    CHECK_THROWS_AS(ExponentialSumKernel::finite({-1.0}, {0.0}),
                    gp::InvalidArgument);
    CHECK_THROWS_AS(ExponentialSumKernel::finite({1.0, 1.0}, {2.0, 1.0}),
                    gp::InvalidArgument);
    CHECK_THROWS_AS(ExponentialSumKernel::finite({1.0, 1.0}, {1.0, 1.0}),
                    gp::InvalidArgument);
    CHECK_THROWS_AS(ExponentialSumKernel::finite({1.0}, {-1.0}),
                    gp::InvalidArgument);
    CHECK_THROWS_AS(ExponentialSumKernel::truncated({1.0}, {1.0}, 0.5, 0.5),
                    gp::InvalidArgument);
}

TEST_CASE("constant kernel detection") {
    CHECK(ExponentialSumKernel::finite({4.0}, {0.0}).is_constant());
    CHECK(!ExponentialSumKernel::finite({4.0}, {1.0}).is_constant());
    CHECK(!ExponentialSumKernel::finite({1.0, 1.0}, {0.0, 1.0}).is_constant());
}

TEST_CASE("power-law family instantiates with analytic tail") {
    const auto fam = KernelFamily::power_law(1.0, 2.0, 1.0, 1.0);
    const auto k = fam.instantiate(10);
    CHECK(k.size() == 10);
    CHECK(k.amplitude(3) == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
    CHECK(k.rate(7) == doctest::Approx(7.0));
    CHECK(k.has_tail());
    CHECK(k.next_rate() == doctest::Approx(11.0));

    // Prefix sum of k^{-2} through 10 terms, frozen; tail bound 1/10.
    const double prefix = 1.5497677311665407;
    CHECK(k.alpha_sq() == doctest::Approx(prefix + 0.1).epsilon(1e-14));
}

TEST_CASE("family amplitude mass must converge") {
    CHECK_THROWS_WITH_AS(KernelFamily::power_law(1.0, 1.0, 1.0, 1.0),
                         doctest::Contains("alpha_sq diverges"),
                         gp::InvalidArgument);
    CHECK_THROWS_WITH_AS(KernelFamily::log_rates(1.0, 0.5),
                         doctest::Contains("alpha_sq diverges"),
                         gp::InvalidArgument);
}

TEST_CASE("finite-list family slices an exact suffix tail") {
    const auto fam =
        KernelFamily::finite_list({1.0, 2.0, 4.0}, {0.0, 1.0, 2.0});
    const auto k = fam.instantiate(2);
    CHECK(k.size() == 2);
    CHECK(k.alpha_sq() == doctest::Approx(7.0));
    CHECK(k.tail_bound(2) == doctest::Approx(4.0));
    CHECK(k.next_rate() == doctest::Approx(2.0));
    CHECK(fam.instantiate(3).alpha_sq() == doctest::Approx(7.0));
}

TEST_CASE("gap condition: linear rates diverge") {
    const auto fam = KernelFamily::power_law(1.0, 2.0, 1.0, 1.0);
    const auto probe = gp::check_gap_condition(fam, 64);
    CHECK(probe.analytic_verdict == gp::GapProbe::Verdict::Unbounded);
    CHECK(probe.satisfied_empirically);
    CHECK(probe.witness_index == 64);
    CHECK(probe.sup_so_far == doctest::Approx(64.0));
}

TEST_CASE("gap condition: slow power rates stall") {
    const auto fam = KernelFamily::power_law(1.0, 2.0, 1.0, 0.4);
    const auto probe = gp::check_gap_condition(fam, 64);
    CHECK(probe.analytic_verdict == gp::GapProbe::Verdict::Bounded);
    CHECK(!probe.satisfied_empirically);
}

TEST_CASE("gap condition: log log rates stall") {
    const auto fam = KernelFamily::log_rates(1.0, 2.0);
    const auto probe = gp::check_gap_condition(fam, 256);
    CHECK(probe.analytic_verdict == gp::GapProbe::Verdict::Bounded);
    CHECK(!probe.satisfied_empirically);
    CHECK(probe.sup_so_far < 0.1);
}

TEST_CASE("log-rate family values") {
    const auto fam = KernelFamily::log_rates(1.0, 2.0);
    CHECK(fam.rate(1) ==
          doctest::Approx(std::log(std::log(3.0))).epsilon(1e-15));
    CHECK(fam.amplitude(2) == doctest::Approx(0.25));
    const auto k = fam.instantiate(6);
    CHECK(k.size() == 6);
    CHECK(k.rates().front() > 0.0);
}
