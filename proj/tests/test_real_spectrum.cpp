#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "gp/errors.hpp"
#include "gp/kernel.hpp"
#include "gp/polynomial.hpp"
#include "gp/real_spectrum.hpp"

using gp::Complex;
using gp::ExponentialSumKernel;

namespace {

ExponentialSumKernel random_kernel(std::mt19937& rng, std::size_t M) {
    std::uniform_real_distribution<double> amp(0.1, 10.0);
    std::uniform_real_distribution<double> gap(0.05, 3.0);
    std::vector<double> a(M), b(M);
    double rate = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    for (std::size_t i = 0; i < M; ++i) {
        a[i] = amp(rng);
        b[i] = rate;
        rate += gap(rng);
    }
    return ExponentialSumKernel::finite(a, b);
}

} // namespace

TEST_CASE("G evaluation") {
    const auto k = ExponentialSumKernel::finite({4.0}, {0.0});
    CHECK(gp::eval_G_real(k, 1, -1.0) == doctest::Approx(-5.0));
    // alpha = 2: G_1(2i) = 2i + 4/(2i) = 0.
    CHECK(std::abs(gp::eval_G(k, 1, Complex(0.0, 2.0))) < 1e-15);
    CHECK(gp::eval_G_real_derivative(k, 1, -1.0) == doctest::Approx(-3.0));
}

TEST_CASE("mu ladder for the two-term reference kernels") {
    const auto k1 = ExponentialSumKernel::finite({1.0, 1.0}, {1.0, 3.0});
    const auto l1 = gp::find_mu(k1);
    REQUIRE(l1.mu.size() == 1);
    CHECK(l1.mu[0] == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(l1.brackets[0].first == doctest::Approx(1.0));
    CHECK(l1.brackets[0].second == doctest::Approx(3.0));
    CHECK(l1.residuals[0] < 1e-12);

    const auto k2 = ExponentialSumKernel::finite({2.0, 1.0}, {0.0, 1.0});
    const auto l2 = gp::find_mu(k2);
    REQUIRE(l2.mu.size() == 1);
    CHECK(l2.mu[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("mu ladder matches the polynomial oracle") {
    const auto k =
        ExponentialSumKernel::finite({1.0, 1.0, 1.0}, {1.0, 2.0, 3.0});
    const auto ladder = gp::find_mu(k);
    const auto oracle = gp::oracle_mu(k);
    REQUIRE(ladder.mu.size() == oracle.size());
    for (std::size_t j = 0; j < oracle.size(); ++j)
        CHECK(ladder.mu[j] == doctest::Approx(oracle[j]).epsilon(1e-12));
}

TEST_CASE("real branch values, frozen for a = [1,1], b = [1,3]") {
    const auto k = ExponentialSumKernel::finite({1.0, 1.0}, {1.0, 3.0});
    const auto ladder = gp::find_mu(k);

    const struct { unsigned n; double lambda; } cases[] = {
        {1, -2.6956207695598621},
        {2, -2.2632990860701839},
        {3, -2.1159729840166923},
        {10, -2.0100492312113665},
    };
    for (const auto& c : cases) {
        const auto branches = gp::find_lambda_real(k, c.n, ladder);
        REQUIRE(branches.size() == 1);
        const auto& br = branches[0];
        CHECK(br.lambda == doctest::Approx(c.lambda).epsilon(1e-12));
        CHECK(br.bracket_lo <= br.lambda);
        CHECK(br.lambda <= br.bracket_hi);
        CHECK(br.lambda > -3.0);
        CHECK(br.lambda < -2.0);
        CHECK(br.truncation_sensitive);
    }
}

TEST_CASE("real branch matches the eigenvalue of the cleared cubic") {
    const auto k = ExponentialSumKernel::finite({2.0, 1.0}, {0.0, 1.0});
    const auto ladder = gp::find_mu(k);
    const auto branches = gp::find_lambda_real(k, 1, ladder);
    REQUIRE(branches.size() == 1);
    CHECK(branches[0].lambda ==
          doctest::Approx(-0.7152252384350904).epsilon(1e-12));
}

TEST_CASE("interlacing and containment over random kernels") {
    std::mt19937 rng(20240817);
    const std::size_t sizes[] = {2, 3, 5, 10};
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t M = sizes[trial % 4];
        const auto k = random_kernel(rng, M);
        const auto ladder = gp::find_mu(k);
        REQUIRE(ladder.mu.size() == M - 1);
        for (std::size_t j = 0; j < M - 1; ++j) {
            CHECK(ladder.mu[j] > k.rates()[j]);
            CHECK(ladder.mu[j] < k.rates()[j + 1]);
            if (j > 0) CHECK(ladder.mu[j] > ladder.mu[j - 1]);
        }

        for (unsigned n : {1u, 5u}) {
            const auto branches = gp::find_lambda_real(k, n, ladder);
            REQUIRE(branches.size() == M - 1);
            for (std::size_t j = 0; j < M - 1; ++j) {
                CHECK(branches[j].lambda > -k.rates()[j + 1]);
                CHECK(branches[j].lambda < -ladder.mu[j]);
                if (j > 0) CHECK(branches[j].lambda < branches[j - 1].lambda);
            }
        }
    }
}

TEST_CASE("branches march monotonically toward -mu") {
    const auto k = ExponentialSumKernel::finite({1.0, 1.0}, {1.0, 3.0});
    const auto report = gp::verify_monotone_in_n(k, 1, 30);
    CHECK(report.monotone);
    CHECK(report.gaps_decreasing);
    CHECK(report.first_violation_n == 0);
    REQUIRE(report.limit_gap.size() == 30);
    CHECK(report.limit_gap.back() < report.limit_gap.front());
    CHECK(report.limit_gap.back() < 2e-3);
}

TEST_CASE("monotonicity holds on every branch of a three-term kernel") {
    const auto k =
        ExponentialSumKernel::finite({1.0, 0.5, 0.25}, {0.5, 2.0, 4.5});
    for (std::size_t j = 1; j <= 2; ++j) {
        const auto report = gp::verify_monotone_in_n(k, j, 24);
        CHECK(report.monotone);
        CHECK(report.gaps_decreasing);
    }
}

TEST_CASE("ladder request past M-1 is rejected") {
    const auto k = ExponentialSumKernel::finite({1.0, 1.0}, {1.0, 3.0});
    CHECK_THROWS_AS((void)gp::find_mu(k, 2), gp::InvalidArgument);
    CHECK_THROWS_AS((void)gp::verify_monotone_in_n(k, 2, 4),
                    gp::InvalidArgument);
}
