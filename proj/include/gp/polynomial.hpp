#pragma once

#include <vector>

#include "gp/kernel.hpp"
#include "gp/numerics.hpp"

namespace gp {

// Dense real polynomials, coefficients ascending: p[0] + p[1] z + ... .
// These back the closed-form spectral oracles for small kernels: clearing
// denominators in G_n(z) = z + n^2 K(z) gives the monic degree-(M+1)
// polynomial
//
//     P_n(z) = z prod_k (z + b_k) + n^2 sum_k a_k prod_{i != k} (z + b_i)
//
// whose roots are exactly the mode-n spectrum, and the numerator of K
// alone (the n^2-independent sum) has roots -mu_1 > -mu_2 > ... .
using Poly = std::vector<double>;

Poly poly_mul(const Poly& p, const Poly& q);
Poly poly_add(const Poly& p, const Poly& q);
Poly poly_scale(const Poly& p, double s);
Complex poly_eval(const Poly& p, Complex z);

// prod_k (z + b_k) over all stored rates.
Poly poly_from_rates(const ExponentialSumKernel& kernel);

// Numerator of K: sum_k a_k prod_{i != k} (z + b_i), degree M-1.
Poly numerator_of_K(const ExponentialSumKernel& kernel);

// Cleared characteristic polynomial P_n above, monic, degree M+1.
Poly characteristic_poly(const ExponentialSumKernel& kernel, unsigned n);

// All complex roots via the scaled companion matrix. Coefficients are
// rescaled (z = s w with s chosen from the coefficient magnitudes) before
// the eigensolve so wide-dynamic-range inputs stay balanced. Roots are
// sorted by (Re, Im).
std::vector<Complex> companion_roots(const Poly& p);

// Mode-n spectrum from the cleared polynomial. Independent of the
// bracketing and contour machinery; agreement is asserted, not assumed.
std::vector<Complex> oracle_spectrum(const ExponentialSumKernel& kernel,
                                     unsigned n);

// Zeros mu_1 < ... < mu_{M-1} of m -> K(-m), from the K numerator.
// Imaginary parts of the companion output are checked against the
// interlacing guarantee that all zeros are real.
std::vector<double> oracle_mu(const ExponentialSumKernel& kernel);

// Greedy nearest-neighbor pairing of two equally sized root multisets.
// Each right-hand root is consumed once; a second claim on a consumed
// root reports a collision. Distances are relative to max(1, |x|).
struct MatchReport {
    double max_rel_dist = 0.0;
    bool collision = false;
    std::vector<std::size_t> pairing; // pairing[i]: index in ys taken by xs[i]
};

MatchReport match_roots(const std::vector<Complex>& xs,
                        const std::vector<Complex>& ys);

void sort_spectrum(std::vector<Complex>& roots);

} // namespace gp
