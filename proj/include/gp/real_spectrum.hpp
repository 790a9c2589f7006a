#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "gp/kernel.hpp"
#include "gp/numerics.hpp"

namespace gp {

// Mode-n characteristic function G_n(z) = z + n^2 K(z). The mode-n
// spectrum is its zero set: M-1 simple real zeros interlaced with the
// kernel rates plus one conjugate pair for large n.
Complex eval_G(const ExponentialSumKernel& kernel, unsigned n, Complex z);
Complex eval_G_derivative(const ExponentialSumKernel& kernel, unsigned n,
                          Complex z);

// Real-axis evaluation in real arithmetic; throws PoleProximityError next
// to a rate. The sign structure on pole-free intervals is what certifies
// the brackets below.
double eval_G_real(const ExponentialSumKernel& kernel, unsigned n, double x);
double eval_G_real_derivative(const ExponentialSumKernel& kernel, unsigned n,
                              double x);
double eval_K_real(const ExponentialSumKernel& kernel, double x);
double eval_K_real_derivative(const ExponentialSumKernel& kernel, double x);

// Zeros of m -> K(-m): exactly one mu_j in each rate gap,
// b_1 < mu_1 < b_2 < mu_2 < ... < b_M. These are the n -> inf limits of
// the real spectrum branches. K is strictly decreasing between poles, so
// each gap holds exactly one zero.
struct RealZeroLadder {
    std::vector<double> mu; // ascending, size J
    std::vector<std::pair<double, double>> brackets; // (b_j, b_{j+1})
    std::vector<double> residuals; // |K(-mu_j)| at the accepted root
};

RealZeroLadder find_mu(const ExponentialSumKernel& kernel, std::size_t J);
RealZeroLadder find_mu(const ExponentialSumKernel& kernel); // all M-1

// Branch j of the real spectrum of mode n: the unique zero of G_n in
// (-b_{j+1}, -mu_j). bracket_lo/hi are the endpoints where the sign
// change was actually evaluated; G_n > 0 near the pole end and
// G_n(-mu_j) = -mu_j < 0. The top branch is flagged
// truncation-sensitive: mu_{M-1} sits next to b_M and shifts if further
// terms were appended to the kernel.
struct RealBranch {
    unsigned n = 0;
    std::size_t j = 0; // 1-based branch index
    double lambda = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    double residual = 0.0; // |G_n(lambda)|
    bool truncation_sensitive = false;
};

std::vector<RealBranch> find_lambda_real(const ExponentialSumKernel& kernel,
                                         unsigned n,
                                         const RealZeroLadder& ladder,
                                         double tol_root = 1e-10);

// lambda_{nj} increases strictly toward -mu_j in n for fixed j. limit_gap
// holds |lambda_{nj} + mu_j| for n = 1..n_max; monotone tracks the lambda
// sequence, gaps_decreasing the distance-to-limit sequence.
struct MonotoneReport {
    bool monotone = true;
    bool gaps_decreasing = true;
    std::vector<double> limit_gap;
    unsigned first_violation_n = 0;
};

MonotoneReport verify_monotone_in_n(const ExponentialSumKernel& kernel,
                                    std::size_t j, unsigned n_max);

} // namespace gp
