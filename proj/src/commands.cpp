#include "gp/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>
#include <vector>

#include "gp/complex_spectrum.hpp"
#include "gp/errors.hpp"
#include "gp/polynomial.hpp"
#include "gp/real_spectrum.hpp"
#include "gp/time_domain.hpp"
#include "json.hpp"

namespace gp {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char* kHeader = "# gp-spectrum v1\n";
// Sequences that have converged to zero (constant kernel) pass the
// strict-decrease checks once they sit below this floor.
constexpr double kZeroFloor = 1e-13;

struct SliceOutcome {
    std::optional<SpectrumSlice> slice;
    std::string error;
};

std::vector<SliceOutcome> analyze_range(const ExponentialSumKernel& kernel,
                                        const RealZeroLadder& ladder,
                                        unsigned n_min, unsigned n_max,
                                        const AnalyzeOptions& opts,
                                        unsigned jobs) {
    const std::size_t count = n_max - n_min + 1;
    std::vector<SliceOutcome> outcomes(count);
    const auto work = [&](std::size_t idx) {
        const unsigned n = n_min + static_cast<unsigned>(idx);
        try {
            outcomes[idx].slice = analyze_mode(kernel, n, ladder, opts);
        } catch (const std::exception& e) {
            outcomes[idx].error = e.what();
        }
    };
    if (jobs <= 1 || count == 1) {
        for (std::size_t i = 0; i < count; ++i) work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const std::size_t width = std::min<std::size_t>(jobs, count);
        for (std::size_t t = 0; t < width; ++t)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < count;
                     i = next.fetch_add(1))
                    work(i);
            });
        for (auto& th : pool) th.join();
    }
    return outcomes;
}

void write_file(const RunConfig& cfg, const std::string& name,
                const std::string& content) {
    std::filesystem::create_directories(cfg.out_dir);
    const auto path = std::filesystem::path(cfg.out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write output file: " + path.string());
    out << content;
}

double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

std::vector<double> uniform_grid(double t_end, std::size_t points) {
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i)
        grid[i] =
            t_end * static_cast<double>(i) / static_cast<double>(points - 1);
    grid.back() = t_end;
    return grid;
}

std::vector<unsigned> doubling_sequence(unsigned n_min, unsigned n_max) {
    std::vector<unsigned> ns;
    for (unsigned n = n_min; n <= n_max; n *= 2) {
        ns.push_back(n);
        if (n > n_max / 2) break;
    }
    return ns;
}

} // namespace

int cmd_spectrum(const RunConfig& cfg) try {
    const auto& kernel = cfg.kernel;
    const RealZeroLadder ladder = find_mu(kernel, cfg.branches);
    AnalyzeOptions opts;
    opts.want_contour = false;
    opts.want_pair = true;
    opts.want_oracle = true;
    opts.eps = cfg.pair_box_eps;
    opts.tol_root = cfg.tol_root;
    const auto outcomes =
        analyze_range(kernel, ladder, cfg.n_min, cfg.n_max, opts, cfg.jobs);

    bool any_error = false;
    std::string content;
    if (cfg.format == RunConfig::Format::Csv) {
        std::ostringstream out;
        out << kHeader;
        out << "n,branch,re,im,residual,bracket_lo,bracket_hi,oracle_dist\n";
        for (std::size_t i = 0; i < outcomes.size(); ++i) {
            const unsigned n = cfg.n_min + static_cast<unsigned>(i);
            if (!outcomes[i].error.empty()) {
                any_error = true;
                out << "# error n=" << n << ": " << outcomes[i].error << "\n";
                continue;
            }
            const SpectrumSlice& s = *outcomes[i].slice;
            const auto dist_at = [&](std::size_t idx) {
                return idx < s.oracle_dist.size() ? s.oracle_dist[idx]
                                                  : nan_value();
            };
            for (std::size_t j = 0; j < s.real_branches.size(); ++j) {
                const RealBranch& br = s.real_branches[j];
                out << n << "," << br.j << "," << format_sci17(br.lambda) << ","
                    << format_sci17(0.0) << "," << format_sci17(br.residual)
                    << "," << format_sci17(br.bracket_lo) << ","
                    << format_sci17(br.bracket_hi) << ","
                    << format_sci17(dist_at(j)) << "\n";
            }
            if (s.pair) {
                const ComplexPair& p = *s.pair;
                const double pd = dist_at(s.real_branches.size());
                out << n << ",+," << format_sci17(p.lambda_plus.real()) << ","
                    << format_sci17(p.lambda_plus.imag()) << ","
                    << format_sci17(p.residual) << ","
                    << format_sci17(-p.box_radius) << ","
                    << format_sci17(p.box_radius) << "," << format_sci17(pd)
                    << "\n";
                out << n << ",-," << format_sci17(p.lambda_minus.real()) << ","
                    << format_sci17(p.lambda_minus.imag()) << ","
                    << format_sci17(p.conj_residual) << ","
                    << format_sci17(-p.box_radius) << ","
                    << format_sci17(p.box_radius) << "," << format_sci17(pd)
                    << "\n";
            }
        }
        content = out.str();
    } else {
        ordered_json rows = ordered_json::array();
        for (std::size_t i = 0; i < outcomes.size(); ++i) {
            const unsigned n = cfg.n_min + static_cast<unsigned>(i);
            if (!outcomes[i].error.empty()) {
                any_error = true;
                rows.push_back({{"n", n}, {"error", outcomes[i].error}});
                continue;
            }
            const SpectrumSlice& s = *outcomes[i].slice;
            const auto dist_json = [&](std::size_t idx) -> ordered_json {
                if (idx < s.oracle_dist.size()) return s.oracle_dist[idx];
                return nullptr;
            };
            for (std::size_t j = 0; j < s.real_branches.size(); ++j) {
                const RealBranch& br = s.real_branches[j];
                rows.push_back({{"n", n},
                                {"branch", std::to_string(br.j)},
                                {"re", br.lambda},
                                {"im", 0.0},
                                {"residual", br.residual},
                                {"bracket_lo", br.bracket_lo},
                                {"bracket_hi", br.bracket_hi},
                                {"oracle_dist", dist_json(j)}});
            }
            if (s.pair) {
                const ComplexPair& p = *s.pair;
                const ordered_json pd = dist_json(s.real_branches.size());
                rows.push_back({{"n", n},
                                {"branch", "+"},
                                {"re", p.lambda_plus.real()},
                                {"im", p.lambda_plus.imag()},
                                {"residual", p.residual},
                                {"bracket_lo", -p.box_radius},
                                {"bracket_hi", p.box_radius},
                                {"oracle_dist", pd}});
                rows.push_back({{"n", n},
                                {"branch", "-"},
                                {"re", p.lambda_minus.real()},
                                {"im", p.lambda_minus.imag()},
                                {"residual", p.conj_residual},
                                {"bracket_lo", -p.box_radius},
                                {"bracket_hi", p.box_radius},
                                {"oracle_dist", pd}});
            }
        }
        content = rows.dump(2) + "\n";
    }

    write_file(cfg, cfg.format == RunConfig::Format::Csv ? "spectrum.csv"
                                                         : "spectrum.json",
               content);
    return any_error ? kExitCompute : kExitOk;
} catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
} catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
} catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCompute;
}

std::string render_verify_report(const RunConfig& cfg, int& exit_code) {
    const auto& kernel = cfg.kernel;
    std::ostringstream out;
    out << kHeader;
    out << "# verify M=" << kernel.size() << " n=" << cfg.n_min << ".."
        << cfg.n_max << "\n";

    bool failed = false;
    const auto emit = [&](const std::string& claim, const std::string& status,
                          double margin, const std::string& witness) {
        out << "claim=" << claim << " status=" << status
            << " margin=" << format_sci17(margin + 0.0)
            << " witness=" << witness << "\n";
        if (status == "FAIL") failed = true;
    };

    try {
        const std::size_t J = kernel.size() - 1;
        const RealZeroLadder ladder =
            J > 0 ? find_mu(kernel, J) : RealZeroLadder{};
        AnalyzeOptions opts;
        opts.eps = cfg.pair_box_eps;
        opts.tol_root = cfg.tol_root;
        const auto outcomes =
            analyze_range(kernel, ladder, cfg.n_min, cfg.n_max, opts, cfg.jobs);

        for (std::size_t i = 0; i < outcomes.size(); ++i) {
            if (!outcomes[i].error.empty()) {
                emit("computation", "FAIL", 0.0,
                     "n=" + std::to_string(cfg.n_min + i) + ": " +
                         outcomes[i].error);
                out << "result=FAIL\n";
                exit_code = kExitVerify;
                return out.str();
            }
        }

        // interlacing: b_j < mu_j < b_{j+1}
        if (J == 0) {
            emit("interlacing", "PASS", 0.0, "vacuous: no rate gaps");
        } else {
            double margin = std::numeric_limits<double>::infinity();
            std::size_t arg = 0;
            for (std::size_t j = 0; j < ladder.mu.size(); ++j) {
                const double m = std::min(ladder.mu[j] - ladder.brackets[j].first,
                                          ladder.brackets[j].second - ladder.mu[j]);
                if (m < margin) {
                    margin = m;
                    arg = j + 1;
                }
            }
            emit("interlacing", margin > 0.0 ? "PASS" : "FAIL", margin,
                 "j=" + std::to_string(arg));
        }

        // containment: -b_{j+1} < lambda_nj < -mu_j
        if (J == 0) {
            emit("containment", "PASS", 0.0, "vacuous: no real branches");
        } else {
            double margin = std::numeric_limits<double>::infinity();
            std::string arg = "none";
            for (const auto& o : outcomes) {
                for (const auto& br : o.slice->real_branches) {
                    const double m =
                        std::min(br.lambda + kernel.rates()[br.j],
                                 -ladder.mu[br.j - 1] - br.lambda);
                    if (m < margin) {
                        margin = m;
                        arg = "n=" + std::to_string(br.n) +
                              " j=" + std::to_string(br.j);
                    }
                }
            }
            emit("containment", margin > 0.0 ? "PASS" : "FAIL", margin, arg);
        }

        // monotone_in_n: lambda_{nj} strictly increasing toward -mu_j
        if (J == 0) {
            emit("monotone_in_n", "PASS", 0.0, "vacuous: no real branches");
        } else if (outcomes.size() < 2) {
            emit("monotone_in_n", "PASS", 0.0, "vacuous: single mode");
        } else {
            double margin = std::numeric_limits<double>::infinity();
            std::string arg = "none";
            for (std::size_t j = 0; j < J; ++j) {
                for (std::size_t i = 1; i < outcomes.size(); ++i) {
                    const double inc =
                        outcomes[i].slice->real_branches[j].lambda -
                        outcomes[i - 1].slice->real_branches[j].lambda;
                    if (inc < margin) {
                        margin = inc;
                        arg = "n=" + std::to_string(cfg.n_min + i) +
                              " j=" + std::to_string(j + 1);
                    }
                }
            }
            emit("monotone_in_n", margin > 0.0 ? "PASS" : "FAIL", margin, arg);
        }

        // left_half_plane: Re lambda <= 0, strict unless constant kernel
        {
            bool ok = true;
            double margin = std::numeric_limits<double>::infinity();
            std::string arg = "all modes";
            for (const auto& o : outcomes) {
                if (!verify_left_half_plane(*o.slice, kernel)) {
                    ok = false;
                    arg = "n=" + std::to_string(o.slice->n);
                }
                for (const auto& br : o.slice->real_branches)
                    margin = std::min(margin, -br.lambda);
                if (o.slice->pair)
                    margin =
                        std::min(margin, -o.slice->pair->lambda_plus.real());
            }
            if (!std::isfinite(margin)) margin = 0.0;
            emit("left_half_plane", ok ? "PASS" : "FAIL", margin, arg);
        }

        // conjugate_symmetry: G_n(conj lambda_plus) also vanishes
        {
            bool ok = true;
            double margin = 0.0;
            std::string arg = "all modes";
            for (const auto& o : outcomes) {
                if (!o.slice->pair) continue;
                const double n2 = static_cast<double>(o.slice->n) *
                                  static_cast<double>(o.slice->n);
                margin = std::max(margin, o.slice->pair->conj_residual);
                if (o.slice->pair->conj_residual >
                    cfg.tol_root * std::max(1.0, n2)) {
                    ok = false;
                    arg = "n=" + std::to_string(o.slice->n);
                }
            }
            emit("conjugate_symmetry", ok ? "PASS" : "FAIL", margin, arg);
        }

        // winding_count: argument-principle count matches the located roots
        {
            std::size_t checked = 0;
            bool ok = true;
            double margin = std::numeric_limits<double>::infinity();
            std::string arg;
            for (const auto& o : outcomes) {
                if (!o.slice->contour_report) continue;
                ++checked;
                const ContourReport& cr = *o.slice->contour_report;
                std::size_t located = 0;
                for (const auto& br : o.slice->real_branches)
                    if (cr.rect.contains(Complex(br.lambda, 0.0))) ++located;
                if (o.slice->pair) {
                    if (cr.rect.contains(o.slice->pair->lambda_plus)) ++located;
                    if (cr.rect.contains(o.slice->pair->lambda_minus)) ++located;
                }
                margin = std::min(margin, 1.0 - cr.rouche_margin);
                if (cr.zeros_inside != cr.poles_inside + 1 ||
                    cr.zeros_inside != located) {
                    ok = false;
                    arg = "n=" + std::to_string(o.slice->n) + " zeros=" +
                          std::to_string(cr.zeros_inside) + " located=" +
                          std::to_string(located);
                }
            }
            if (checked == 0) {
                emit("winding_count", "N/A", 0.0,
                     "not applicable: gap condition unmet");
            } else {
                if (arg.empty()) arg = "modes_checked=" + std::to_string(checked);
                emit("winding_count", ok ? "PASS" : "FAIL", margin, arg);
            }
        }

        // oracle_equality: located roots vs dense eigenvalues of the
        // ODE-reduction matrix
        if (kernel.size() > 12) {
            emit("oracle_equality", "N/A", 0.0, "not applicable: M > 12");
        } else {
            bool ok = true;
            double margin = 0.0;
            std::string arg = "all modes";
            for (const auto& o : outcomes) {
                std::vector<Complex> found;
                for (const auto& br : o.slice->real_branches)
                    found.emplace_back(br.lambda, 0.0);
                if (o.slice->pair) {
                    found.push_back(o.slice->pair->lambda_plus);
                    found.push_back(o.slice->pair->lambda_minus);
                }
                const auto eig = spectrum_oracle(kernel, o.slice->n);
                if (found.size() != eig.size()) {
                    ok = false;
                    arg = "n=" + std::to_string(o.slice->n) + " count mismatch";
                    continue;
                }
                const MatchReport match = match_roots(found, eig);
                margin = std::max(margin, match.max_rel_dist);
                if (match.collision || match.max_rel_dist > 1e-8) {
                    ok = false;
                    arg = "n=" + std::to_string(o.slice->n);
                }
            }
            emit("oracle_equality", ok ? "PASS" : "FAIL", margin, arg);
        }

        // pair_asymptotics: | |lambda_plus|/(alpha n) - 1 | decreasing
        // over doublings
        {
            const auto ns = doubling_sequence(cfg.n_min, cfg.n_max);
            if (ns.size() < 2) {
                emit("pair_asymptotics", "N/A", 0.0,
                     "insufficient doublings in range");
            } else {
                std::vector<double> v;
                std::string witness = "n=";
                for (std::size_t k = 0; k < ns.size(); ++k) {
                    const auto& o = outcomes[ns[k] - cfg.n_min];
                    const double an =
                        kernel.alpha() * static_cast<double>(ns[k]);
                    v.push_back(std::abs(
                        std::abs(o.slice->pair->lambda_plus) / an - 1.0));
                    witness += (k ? "," : "") + std::to_string(ns[k]);
                }
                bool ok = true;
                double margin = std::numeric_limits<double>::infinity();
                for (std::size_t k = 1; k < v.size(); ++k) {
                    if (!(v[k] < v[k - 1] || v[k] <= kZeroFloor)) ok = false;
                    margin = std::min(margin, v[k - 1] - v[k]);
                }
                emit("pair_asymptotics", ok ? "PASS" : "FAIL", margin, witness);
            }
        }
    } catch (const std::exception& e) {
        emit("computation", "FAIL", 0.0, e.what());
        out << "result=FAIL\n";
        exit_code = kExitVerify;
        return out.str();
    }

    out << "result=" << (failed ? "FAIL" : "PASS") << "\n";
    exit_code = failed ? kExitVerify : kExitOk;
    return out.str();
}

int cmd_verify(const RunConfig& cfg) try {
    int exit_code = kExitOk;
    const std::string report = render_verify_report(cfg, exit_code);
    write_file(cfg, "verify_report.txt", report);
    std::cout << report;
    return exit_code;
} catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
} catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCompute;
}

int cmd_simulate(const RunConfig& cfg) try {
    if (cfg.xi.empty() || !(cfg.t_end > 0.0)) {
        std::cerr << "error: simulate needs a \"simulate\" section with xi "
                     "and t_end\n";
        return kExitConfig;
    }
    const auto& kernel = cfg.kernel;
    const std::vector<double> grid = uniform_grid(cfg.t_end, cfg.grid_points);
    SimulationResult result;
    try {
        result = reconstruct_field(kernel, cfg.xi, cfg.xi.size(),
                                   cfg.x_samples, grid, cfg.integrator_tol);
    } catch (const IntegratorError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCompute;
    }

    const std::size_t n_modes = cfg.xi.size();
    const bool with_ref = kernel.is_constant();
    const double alpha = kernel.alpha();
    const auto ref_value = [&](std::size_t mode, double t) {
        return cfg.xi[mode] *
               std::cos(alpha * static_cast<double>(mode + 1) * t);
    };

    std::string content;
    if (cfg.format == RunConfig::Format::Csv) {
        std::ostringstream out;
        out << kHeader;
        if (!cfg.x_samples.empty()) {
            out << "# x_samples:";
            for (double x : cfg.x_samples) out << " " << format_sci17(x);
            out << "\n";
        }
        out << "t";
        for (std::size_t m = 1; m <= n_modes; ++m) out << ",theta_" << m;
        if (with_ref)
            for (std::size_t m = 1; m <= n_modes; ++m) out << ",ref_theta_" << m;
        for (std::size_t x = 1; x <= cfg.x_samples.size(); ++x)
            out << ",field_" << x;
        out << "\n";
        for (std::size_t ti = 0; ti < grid.size(); ++ti) {
            out << format_sci17(grid[ti]);
            for (std::size_t m = 0; m < n_modes; ++m)
                out << "," << format_sci17(result.theta_n[m][ti]);
            if (with_ref)
                for (std::size_t m = 0; m < n_modes; ++m)
                    out << "," << format_sci17(ref_value(m, grid[ti]));
            for (std::size_t x = 0; x < cfg.x_samples.size(); ++x)
                out << "," << format_sci17(result.theta_xt[x][ti]);
            out << "\n";
        }
        content = out.str();
    } else {
        ordered_json doc;
        doc["t"] = grid;
        for (std::size_t m = 0; m < n_modes; ++m)
            doc["theta_" + std::to_string(m + 1)] = result.theta_n[m];
        if (with_ref)
            for (std::size_t m = 0; m < n_modes; ++m) {
                std::vector<double> ref(grid.size());
                for (std::size_t ti = 0; ti < grid.size(); ++ti)
                    ref[ti] = ref_value(m, grid[ti]);
                doc["ref_theta_" + std::to_string(m + 1)] = ref;
            }
        for (std::size_t x = 0; x < cfg.x_samples.size(); ++x)
            doc["field_" + std::to_string(x + 1)] = result.theta_xt[x];
        if (!cfg.x_samples.empty()) doc["x_samples"] = cfg.x_samples;
        content = doc.dump(2) + "\n";
    }

    write_file(cfg, cfg.format == RunConfig::Format::Csv ? "trajectories.csv"
                                                         : "trajectories.json",
               content);
    return kExitOk;
} catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
} catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
} catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCompute;
}

int cmd_sweep(const RunConfig& cfg) try {
    if (cfg.n_max / 8 < cfg.n_min) {
        std::cerr << "error: insufficient doublings (need n_max >= 8 n_min)\n";
        return kExitConfig;
    }
    const auto& kernel = cfg.kernel;
    const bool has_branch = kernel.size() > 1;
    const RealZeroLadder ladder =
        has_branch ? find_mu(kernel, cfg.sweep_j) : RealZeroLadder{};
    const double mu = has_branch ? ladder.mu[cfg.sweep_j - 1] : 0.0;

    const auto ns = doubling_sequence(cfg.n_min, cfg.n_max);
    std::vector<double> pair_col, branch_col;
    for (unsigned n : ns) {
        const ComplexPair pair =
            find_complex_pair(kernel, n, cfg.pair_box_eps, cfg.tol_root);
        const double an = kernel.alpha() * static_cast<double>(n);
        pair_col.push_back(std::abs(std::abs(pair.lambda_plus) / an - 1.0));
        if (has_branch) {
            const auto branches = find_lambda_real(kernel, n, ladder, cfg.tol_root);
            branch_col.push_back(
                std::abs(branches[cfg.sweep_j - 1].lambda + mu));
        } else {
            branch_col.push_back(nan_value());
        }
    }

    std::string content;
    if (cfg.format == RunConfig::Format::Csv) {
        std::ostringstream out;
        out << kHeader;
        out << "n,pair_rel_gap,branch_gap_j\n";
        for (std::size_t k = 0; k < ns.size(); ++k)
            out << ns[k] << "," << format_sci17(pair_col[k]) << ","
                << format_sci17(branch_col[k]) << "\n";
        content = out.str();
    } else {
        ordered_json rows = ordered_json::array();
        for (std::size_t k = 0; k < ns.size(); ++k) {
            ordered_json row = {{"n", ns[k]}, {"pair_rel_gap", pair_col[k]}};
            if (has_branch)
                row["branch_gap_j"] = branch_col[k];
            else
                row["branch_gap_j"] = nullptr;
            rows.push_back(row);
        }
        content = rows.dump(2) + "\n";
    }
    write_file(cfg, cfg.format == RunConfig::Format::Csv ? "sweep.csv"
                                                         : "sweep.json",
               content);

    for (std::size_t k = 1; k < ns.size(); ++k) {
        const bool pair_ok =
            pair_col[k] < pair_col[k - 1] || pair_col[k] <= kZeroFloor;
        const bool branch_ok =
            !has_branch || branch_col[k] < branch_col[k - 1] ||
            branch_col[k] <= kZeroFloor;
        if (!pair_ok || !branch_ok) {
            std::cerr << "error: asymptotic column not decreasing at n="
                      << ns[k] << "\n";
            return kExitVerify;
        }
    }
    return kExitOk;
} catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
} catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
} catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCompute;
}

} // namespace gp
