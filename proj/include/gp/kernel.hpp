#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gp/numerics.hpp"

namespace gp {

// Exponential-sum memory kernel
//
//     k(t) = sum_k a_k exp(-b_k t),        a_k > 0,  0 <= b_1 < b_2 < ...
//
// with Laplace image
//
//     K(z) = sum_k a_k / (z + b_k),
//
// a meromorphic function, real on the real axis, mapping the upper half
// plane into the lower one. Instances store a finite prefix of M terms
// together with a certified bound on the dropped amplitude tail
// sum_{k>M} a_k, so every downstream quantity carries an explicit
// truncation error budget. alpha_sq() is the total amplitude mass
// sum a_k = alpha^2 (prefix plus tail bound); alpha() drives the
// high-frequency pair location near +-i*alpha*n.
class ExponentialSumKernel {
public:
    // Evaluation of K together with the truncation-error bound
    //     sum_{k>M} |a_k/(z+b_k)| <= tail_bound(M) / dist(z, (-inf, -b_{M+1}]).
    struct KValue {
        Complex value;
        double tail_err; // 0 for finitely supported kernels
    };

    // Kernel given by an explicit finite list; the tail is exactly zero.
    static ExponentialSumKernel finite(std::vector<double> amplitudes,
                                       std::vector<double> rates);

    // Finite prefix of an infinite kernel. tail_amplitude bounds
    // sum_{k>M} a_k; next_rate is b_{M+1}, used to certify evaluation
    // error away from the dropped poles.
    static ExponentialSumKernel truncated(std::vector<double> amplitudes,
                                          std::vector<double> rates,
                                          double tail_amplitude,
                                          double next_rate);

    std::size_t size() const { return a_.size(); }
    double amplitude(std::size_t k) const { return a_[k - 1]; } // 1-based
    double rate(std::size_t k) const { return b_[k - 1]; }      // 1-based
    const std::vector<double>& amplitudes() const { return a_; }
    const std::vector<double>& rates() const { return b_; }

    // delta_k = b_{k+1} - b_k for k = 1..M-1.
    double delta(std::size_t k) const { return b_[k] - b_[k - 1]; }

    double alpha_sq() const { return alpha_sq_; }
    double alpha() const { return alpha_; }

    bool has_tail() const { return tail_amplitude_ > 0.0; }
    double next_rate() const { return next_rate_; }

    // Bound on sum_{k>m} a_k. Exact suffix sum for finite lists,
    // analytic bound plus suffix for truncated kernels. Nonincreasing in m.
    double tail_bound(std::size_t m) const;

    // Constant kernel k(t) = alpha^2 (single term with b_1 = 0); the only
    // case whose spectrum touches the imaginary axis.
    bool is_constant() const { return a_.size() == 1 && b_[0] == 0.0; }

    // k(t) over the first M terms; |error vs the infinite sum| <= tail_bound(M).
    double eval_k(double t, std::size_t M) const;
    double eval_k(double t) const { return eval_k(t, size()); }

    // K(z) over the first M terms, ascending k with compensated
    // accumulation. Throws PoleProximityError when z sits within
    // pole_tolerance of some -b_k.
    Complex eval_K(Complex z, std::size_t M) const;
    Complex eval_K(Complex z) const { return eval_K(z, size()); }
    KValue eval_K_bounded(Complex z, std::size_t M) const;
    KValue eval_K_bounded(Complex z) const { return eval_K_bounded(z, size()); }

    // K'(z) = -sum a_k/(z+b_k)^2, same pole guard.
    Complex eval_K_derivative(Complex z) const;

    // Pole-proximity tolerance, relative scaling 1 + |z|.
    double pole_tolerance(Complex z) const {
        return pole_tol_scale_ * (1.0 + std::abs(z));
    }
    void set_pole_tolerance_scale(double s) { pole_tol_scale_ = s; }

private:
    ExponentialSumKernel() = default;
    void validate() const;

    std::vector<double> a_;
    std::vector<double> b_;
    std::vector<double> suffix_; // suffix_[i] = sum of stored a_k for k > i+1
    double tail_amplitude_ = 0.0;
    double next_rate_ = 0.0;
    double alpha_sq_ = 0.0;
    double alpha_ = 0.0;
    double pole_tol_scale_ = 1e-12;
};

// Preset kernel families. power_law: a_k = A k^{-gamma} (gamma > 1 so the
// amplitude mass is finite), b_k = c k^{beta}. log_rates: same amplitudes,
// b_k = log log(k + 2), the canonical slowly increasing rate sequence.
enum class FamilyTag { FiniteList, PowerLaw, Logarithmic };

class KernelFamily {
public:
    static KernelFamily finite_list(std::vector<double> amplitudes,
                                    std::vector<double> rates);
    static KernelFamily power_law(double A, double gamma, double c, double beta);
    static KernelFamily log_rates(double A, double gamma);

    FamilyTag tag() const { return tag_; }
    double param_A() const { return A_; }
    double param_gamma() const { return gamma_; }
    double param_c() const { return c_; }
    double param_beta() const { return beta_; }

    // k-th amplitude / rate of the infinite family, 1-based. For finite
    // lists k must stay within the stored length.
    double amplitude(std::size_t k) const;
    double rate(std::size_t k) const;

    std::size_t max_terms() const; // stored length for finite lists, else unbounded

    // Materialize the first M terms with an analytic tail bound
    // (power law: A * M^{1-gamma}/(gamma-1)).
    ExponentialSumKernel instantiate(std::size_t M) const;

private:
    KernelFamily() = default;

    FamilyTag tag_ = FamilyTag::FiniteList;
    std::vector<double> a_, b_;
    double A_ = 0.0, gamma_ = 0.0, c_ = 0.0, beta_ = 0.0;
};

// Empirical probe of the gap condition sup_k b_k (b_{k+1} - b_k) = inf.
// sup_so_far is the running maximum of the gap products over k <= depth,
// witness_index where it was attained. satisfied_empirically records
// whether the maximum is still being pushed near the probe end (growth
// continuing), a finite-probe stand-in for divergence. analytic_verdict
// gives the closed form where one exists: power law rates diverge iff
// beta > 1/2; log log rates never do; finite lists have no verdict.
struct GapProbe {
    bool satisfied_empirically = false;
    double sup_so_far = 0.0;
    std::size_t witness_index = 0;
    enum class Verdict { Unbounded, Bounded, Unknown } analytic_verdict =
        Verdict::Unknown;
};

GapProbe check_gap_condition(const KernelFamily& family, std::size_t probe_depth);

} // namespace gp
