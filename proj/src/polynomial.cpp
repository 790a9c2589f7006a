#include "gp/polynomial.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "gp/errors.hpp"

namespace gp {

Poly poly_mul(const Poly& p, const Poly& q) {
    if (p.empty() || q.empty()) return {};
    Poly r(p.size() + q.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
    return r;
}

Poly poly_add(const Poly& p, const Poly& q) {
    Poly r(std::max(p.size(), q.size()), 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) r[i] += p[i];
    for (std::size_t i = 0; i < q.size(); ++i) r[i] += q[i];
    return r;
}

Poly poly_scale(const Poly& p, double s) {
    Poly r = p;
    for (double& c : r) c *= s;
    return r;
}

Complex poly_eval(const Poly& p, Complex z) {
    Complex acc = 0.0;
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * z + p[i];
    return acc;
}

Poly poly_from_rates(const ExponentialSumKernel& kernel) {
    Poly prod{1.0};
    for (double b : kernel.rates()) prod = poly_mul(prod, Poly{b, 1.0});
    return prod;
}

Poly numerator_of_K(const ExponentialSumKernel& kernel) {
    const auto& b = kernel.rates();
    const auto& a = kernel.amplitudes();
    const std::size_t M = b.size();

    // prefix[k] = prod_{i<k}(z+b_i), suffix[k] = prod_{i>k}(z+b_i).
    std::vector<Poly> prefix(M + 1), suffix(M + 1);
    prefix[0] = Poly{1.0};
    for (std::size_t k = 0; k < M; ++k)
        prefix[k + 1] = poly_mul(prefix[k], Poly{b[k], 1.0});
    suffix[M] = Poly{1.0};
    for (std::size_t k = M; k-- > 0;)
        suffix[k] = poly_mul(Poly{b[k], 1.0}, suffix[k + 1]);

    Poly num{0.0};
    for (std::size_t k = 0; k < M; ++k) {
        Poly term = poly_scale(poly_mul(prefix[k], suffix[k + 1]), a[k]);
        num = poly_add(num, term);
    }
    return num;
}

Poly characteristic_poly(const ExponentialSumKernel& kernel, unsigned n) {
    if (n == 0) throw InvalidArgument("mode index must be positive");
    Poly prod = poly_from_rates(kernel);
    Poly zprod(prod.size() + 1, 0.0);
    for (std::size_t i = 0; i < prod.size(); ++i) zprod[i + 1] = prod[i];
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    return poly_add(zprod, poly_scale(numerator_of_K(kernel), n2));
}

namespace {

// One Horner pass giving p(z) and p'(z).
std::pair<Complex, Complex> eval_with_derivative(const Poly& p, Complex z) {
    Complex v = 0.0, d = 0.0;
    for (std::size_t i = p.size(); i-- > 0;) {
        d = d * z + v;
        v = v * z + p[i];
    }
    return {v, d};
}

} // namespace

std::vector<Complex> companion_roots(const Poly& p) {
    Poly c = p;
    while (c.size() > 1 && c.back() == 0.0) c.pop_back();
    if (c.size() <= 1) throw InvalidArgument("polynomial has no roots");
    const std::size_t d = c.size() - 1;
    const double lead = c.back();
    for (double& ci : c) ci /= lead;

    // Variable scaling z = s w keeps the companion entries near unit size
    // for coefficients spanning many orders of magnitude.
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        if (c[i] != 0.0)
            s = std::max(s, std::pow(std::abs(c[i]),
                                     1.0 / static_cast<double>(d - i)));
    if (s == 0.0) return std::vector<Complex>(d, Complex(0.0, 0.0));

    Poly cs(c);
    double pw = 1.0;
    for (std::size_t i = d; i-- > 0;) {
        pw *= s;
        cs[i] = c[i] / pw;
    }

    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d),
                                              static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i + 1 < d; ++i)
        C(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)) = 1.0;
    for (std::size_t i = 0; i < d; ++i)
        C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d - 1)) =
            -cs[i];

    Eigen::EigenSolver<Eigen::MatrixXd> solver(C, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw Error("companion eigensolve did not converge");

    std::vector<Complex> roots(d);
    for (std::size_t i = 0; i < d; ++i) {
        Complex w = solver.eigenvalues()(static_cast<Eigen::Index>(i));
        // Newton polish on the scaled polynomial tightens the eigensolver
        // output to full precision for simple roots.
        for (int it = 0; it < 3; ++it) {
            auto [v, dv] = eval_with_derivative(cs, w);
            if (std::abs(dv) == 0.0) break;
            Complex step = v / dv;
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag()))
                break;
            w -= step;
        }
        roots[i] = s * w;
    }
    sort_spectrum(roots);
    return roots;
}

std::vector<Complex> oracle_spectrum(const ExponentialSumKernel& kernel,
                                     unsigned n) {
    return companion_roots(characteristic_poly(kernel, n));
}

std::vector<double> oracle_mu(const ExponentialSumKernel& kernel) {
    if (kernel.size() < 2) return {};
    std::vector<Complex> roots = companion_roots(numerator_of_K(kernel));
    std::vector<double> mu;
    mu.reserve(roots.size());
    for (Complex r : roots) {
        if (std::abs(r.imag()) > 1e-8 * std::max(1.0, std::abs(r)))
            throw Error("K numerator produced a non-real zero");
        mu.push_back(-r.real());
    }
    std::sort(mu.begin(), mu.end());
    return mu;
}

MatchReport match_roots(const std::vector<Complex>& xs,
                        const std::vector<Complex>& ys) {
    if (xs.size() != ys.size())
        throw InvalidArgument("root multisets differ in size");
    MatchReport report;
    report.pairing.assign(xs.size(), 0);
    std::vector<bool> used(ys.size(), false);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        std::size_t best = ys.size(), best_any = ys.size();
        double best_d = std::numeric_limits<double>::infinity();
        double best_any_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < ys.size(); ++j) {
            const double d = std::abs(xs[i] - ys[j]);
            if (d < best_any_d) {
                best_any_d = d;
                best_any = j;
            }
            if (!used[j] && d < best_d) {
                best_d = d;
                best = j;
            }
        }
        if (best_any != best) report.collision = true;
        used[best] = true;
        report.pairing[i] = best;
        report.max_rel_dist =
            std::max(report.max_rel_dist, best_d / std::max(1.0, std::abs(xs[i])));
    }
    return report;
}

void sort_spectrum(std::vector<Complex>& roots) {
    std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
}

} // namespace gp
