#include "gp/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gp/errors.hpp"

namespace gp {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw InvalidArgument(msg);
}

} // namespace

void ExponentialSumKernel::validate() const {
    require(!a_.empty(), "kernel needs at least one term");
    require(a_.size() == b_.size(), "amplitude/rate length mismatch");
    for (std::size_t i = 0; i < a_.size(); ++i) {
        require(std::isfinite(a_[i]) && a_[i] > 0.0,
                "amplitudes must be positive and finite");
        require(std::isfinite(b_[i]) && b_[i] >= 0.0,
                "rates must be nonnegative and finite");
        if (i > 0)
            require(b_[i] > b_[i - 1], "rates must be strictly increasing");
    }
    if (tail_amplitude_ > 0.0)
        require(next_rate_ > b_.back(),
                "next_rate must exceed the last stored rate");
}

ExponentialSumKernel ExponentialSumKernel::finite(std::vector<double> amplitudes,
                                                  std::vector<double> rates) {
    ExponentialSumKernel k;
    k.a_ = std::move(amplitudes);
    k.b_ = std::move(rates);
    k.tail_amplitude_ = 0.0;
    k.next_rate_ = std::numeric_limits<double>::infinity();
    k.validate();

    k.suffix_.assign(k.a_.size(), 0.0);
    CompensatedSum s;
    for (std::size_t i = k.a_.size(); i-- > 0;) {
        k.suffix_[i] = s.value();
        s.add(k.a_[i]);
    }
    k.alpha_sq_ = s.value();
    k.alpha_ = std::sqrt(k.alpha_sq_);
    return k;
}

ExponentialSumKernel ExponentialSumKernel::truncated(std::vector<double> amplitudes,
                                                     std::vector<double> rates,
                                                     double tail_amplitude,
                                                     double next_rate) {
    require(std::isfinite(tail_amplitude) && tail_amplitude >= 0.0,
            "tail amplitude must be nonnegative and finite");
    ExponentialSumKernel k = finite(std::move(amplitudes), std::move(rates));
    k.tail_amplitude_ = tail_amplitude;
    k.next_rate_ = tail_amplitude > 0.0 ? next_rate
                                        : std::numeric_limits<double>::infinity();
    k.validate();
    k.alpha_sq_ += tail_amplitude;
    k.alpha_ = std::sqrt(k.alpha_sq_);
    return k;
}

double ExponentialSumKernel::tail_bound(std::size_t m) const {
    if (m >= a_.size()) return tail_amplitude_;
    return suffix_[m == 0 ? 0 : m - 1] + tail_amplitude_ +
           (m == 0 ? a_[0] : 0.0);
}

double ExponentialSumKernel::eval_k(double t, std::size_t M) const {
    require(M >= 1 && M <= a_.size(), "term count out of range");
    CompensatedSum s;
    for (std::size_t i = 0; i < M; ++i) s.add(a_[i] * std::exp(-b_[i] * t));
    return s.value();
}

Complex ExponentialSumKernel::eval_K(Complex z, std::size_t M) const {
    return eval_K_bounded(z, M).value;
}

ExponentialSumKernel::KValue ExponentialSumKernel::eval_K_bounded(
    Complex z, std::size_t M) const {
    require(M >= 1 && M <= a_.size(), "term count out of range");
    const double tol = pole_tolerance(z);
    CompensatedSum re, im;
    for (std::size_t i = 0; i < M; ++i) {
        const Complex d = z + b_[i];
        if (std::abs(d) < tol)
            throw PoleProximityError("K evaluated within pole tolerance of -b_" +
                                     std::to_string(i + 1));
        const Complex term = a_[i] / d;
        re.add(term.real());
        im.add(term.imag());
    }

    double tail_err = 0.0;
    const double tail = tail_bound(M);
    if (tail > 0.0) {
        // Dropped poles live on (-inf, -b_{M+1}]; distance from z to that ray.
        const double bnext = M < a_.size() ? b_[M] : next_rate_;
        double dist;
        if (z.real() + bnext >= 0.0)
            dist = std::abs(z + bnext);
        else
            dist = std::abs(z.imag());
        if (dist < tol)
            throw PoleProximityError("K evaluated against the dropped-tail ray");
        tail_err = tail / dist;
    }
    return {Complex(re.value(), im.value()), tail_err};
}

Complex ExponentialSumKernel::eval_K_derivative(Complex z) const {
    const double tol = pole_tolerance(z);
    CompensatedSum re, im;
    for (std::size_t i = 0; i < a_.size(); ++i) {
        const Complex d = z + b_[i];
        if (std::abs(d) < tol)
            throw PoleProximityError("K' evaluated within pole tolerance of -b_" +
                                     std::to_string(i + 1));
        const Complex term = -a_[i] / (d * d);
        re.add(term.real());
        im.add(term.imag());
    }
    return {re.value(), im.value()};
}

KernelFamily KernelFamily::finite_list(std::vector<double> amplitudes,
                                       std::vector<double> rates) {
    // Validation is delegated to the kernel constructor.
    ExponentialSumKernel::finite(amplitudes, rates);
    KernelFamily f;
    f.tag_ = FamilyTag::FiniteList;
    f.a_ = std::move(amplitudes);
    f.b_ = std::move(rates);
    return f;
}

KernelFamily KernelFamily::power_law(double A, double gamma, double c,
                                     double beta) {
    require(std::isfinite(A) && A > 0.0, "amplitude scale A must be positive");
    require(std::isfinite(gamma), "gamma must be finite");
    if (gamma <= 1.0)
        throw InvalidArgument("alpha_sq diverges: power-law amplitudes need gamma > 1");
    require(std::isfinite(c) && c > 0.0, "rate scale c must be positive");
    require(std::isfinite(beta) && beta > 0.0, "rate exponent beta must be positive");
    KernelFamily f;
    f.tag_ = FamilyTag::PowerLaw;
    f.A_ = A;
    f.gamma_ = gamma;
    f.c_ = c;
    f.beta_ = beta;
    return f;
}

KernelFamily KernelFamily::log_rates(double A, double gamma) {
    require(std::isfinite(A) && A > 0.0, "amplitude scale A must be positive");
    require(std::isfinite(gamma), "gamma must be finite");
    if (gamma <= 1.0)
        throw InvalidArgument("alpha_sq diverges: power-law amplitudes need gamma > 1");
    KernelFamily f;
    f.tag_ = FamilyTag::Logarithmic;
    f.A_ = A;
    f.gamma_ = gamma;
    return f;
}

double KernelFamily::amplitude(std::size_t k) const {
    require(k >= 1, "term index is 1-based");
    if (tag_ == FamilyTag::FiniteList) {
        require(k <= a_.size(), "term index past end of finite list");
        return a_[k - 1];
    }
    return A_ * std::pow(static_cast<double>(k), -gamma_);
}

double KernelFamily::rate(std::size_t k) const {
    require(k >= 1, "term index is 1-based");
    switch (tag_) {
    case FamilyTag::FiniteList:
        require(k <= b_.size(), "term index past end of finite list");
        return b_[k - 1];
    case FamilyTag::PowerLaw:
        return c_ * std::pow(static_cast<double>(k), beta_);
    case FamilyTag::Logarithmic:
        return std::log(std::log(static_cast<double>(k) + 2.0));
    }
    return 0.0; // unreachable
}

std::size_t KernelFamily::max_terms() const {
    return tag_ == FamilyTag::FiniteList ? a_.size()
                                         : std::numeric_limits<std::size_t>::max();
}

ExponentialSumKernel KernelFamily::instantiate(std::size_t M) const {
    require(M >= 1, "need at least one term");
    if (tag_ == FamilyTag::FiniteList) {
        require(M <= a_.size(), "finite list has fewer terms than requested");
        if (M == a_.size())
            return ExponentialSumKernel::finite(a_, b_);
        return ExponentialSumKernel::truncated(
            std::vector<double>(a_.begin(), a_.begin() + M),
            std::vector<double>(b_.begin(), b_.begin() + M),
            [&] {
                CompensatedSum s;
                for (std::size_t i = M; i < a_.size(); ++i) s.add(a_[i]);
                return s.value();
            }(),
            b_[M]);
    }

    std::vector<double> a(M), b(M);
    for (std::size_t k = 1; k <= M; ++k) {
        a[k - 1] = amplitude(k);
        b[k - 1] = rate(k);
    }
    // sum_{k>M} A k^{-gamma} <= A integral_M^inf x^{-gamma} dx
    //                         = A M^{1-gamma}/(gamma-1).
    const double tail =
        A_ * std::pow(static_cast<double>(M), 1.0 - gamma_) / (gamma_ - 1.0);
    return ExponentialSumKernel::truncated(std::move(a), std::move(b), tail,
                                           rate(M + 1));
}

GapProbe check_gap_condition(const KernelFamily& family,
                             std::size_t probe_depth) {
    if (probe_depth < 4) throw InvalidArgument("probe depth too small");
    if (family.tag() == FamilyTag::FiniteList) {
        if (family.max_terms() < 2)
            throw InvalidArgument("gap probe needs at least two rates");
        probe_depth = std::min(probe_depth, family.max_terms() - 1);
    }

    GapProbe probe;
    for (std::size_t k = 1; k <= probe_depth; ++k) {
        const double gap = family.rate(k) * (family.rate(k + 1) - family.rate(k));
        if (gap > probe.sup_so_far) {
            probe.sup_so_far = gap;
            probe.witness_index = k;
        }
    }
    // Divergence shows up as the running max still advancing near the end
    // of the probe window; a stalled witness means the products have peaked.
    probe.satisfied_empirically =
        probe.witness_index * 4 >= probe_depth * 3;

    switch (family.tag()) {
    case FamilyTag::PowerLaw:
        // b_k (b_{k+1} - b_k) ~ beta c^2 k^{2 beta - 1}.
        probe.analytic_verdict = family.param_beta() > 0.5
                                     ? GapProbe::Verdict::Unbounded
                                     : GapProbe::Verdict::Bounded;
        break;
    case FamilyTag::Logarithmic:
        probe.analytic_verdict = GapProbe::Verdict::Bounded;
        break;
    case FamilyTag::FiniteList:
        probe.analytic_verdict = GapProbe::Verdict::Unknown;
        break;
    }
    return probe;
}

} // namespace gp
