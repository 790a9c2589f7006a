#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "gp/commands.hpp"
#include "gp/errors.hpp"
#include "gp/run_config.hpp"

namespace {

struct CliOverrides {
    std::string config_path;
    std::string out_dir;
    std::string format;
    unsigned jobs = 0;
};

void add_common(CLI::App* sub, CliOverrides& o) {
    sub->add_option("-c,--config", o.config_path, "JSON run configuration")
        ->required();
    sub->add_option("-o,--out", o.out_dir, "output directory override");
    sub->add_option("--format", o.format, "output format override")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("-j,--jobs", o.jobs, "worker threads for mode analysis");
}

int run(const std::string& name, const CliOverrides& o) {
    gp::RunConfig cfg = gp::parse_config_file(o.config_path);
    if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
    if (o.format == "csv") cfg.format = gp::RunConfig::Format::Csv;
    if (o.format == "json") cfg.format = gp::RunConfig::Format::Json;
    if (o.jobs > 0) cfg.jobs = o.jobs;

    if (name == "spectrum") return gp::cmd_spectrum(cfg);
    if (name == "verify") return gp::cmd_verify(cfg);
    if (name == "simulate") return gp::cmd_simulate(cfg);
    return gp::cmd_sweep(cfg);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectrum of the heat equation with exponential-sum memory"};
    app.require_subcommand(1);

    CliOverrides o;
    add_common(app.add_subcommand(
                   "spectrum", "real branches and the conjugate pair per mode"),
               o);
    add_common(app.add_subcommand(
                   "verify", "check the spectral claims and emit a report"),
               o);
    add_common(app.add_subcommand("simulate",
                                  "integrate modes and reconstruct the field"),
               o);
    add_common(app.add_subcommand(
                   "sweep", "asymptotic gaps over a doubling mode range"),
               o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        return run(app.get_subcommands().front()->get_name(), o);
    } catch (const gp::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return gp::kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return gp::kExitCompute;
    }
}
