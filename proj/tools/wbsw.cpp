#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <memory>

#include "wbsw/harness.hpp"

namespace {

using namespace wbsw;

// Flat key=value files address the run subcommand directly.
class RunConfigFile : public CLI::ConfigBase {
public:
    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        std::vector<CLI::ConfigItem> items = CLI::ConfigBase::from_config(input);
        for (auto& item : items) {
            if (item.parents.empty()) item.parents = {"run"};
        }
        return items;
    }
};

int do_run(const RunConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    const RunOutcome out = run_case(config);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("case=%s scheme=%s cells=%d amp=%g t=%g steps=%d\n", to_string(out.spec.flow).c_str(),
                to_string(config.scheme).c_str(), out.spec.n_cells, out.spec.amplitude, out.log.t,
                out.log.steps);
    std::printf("spurious_max_dh=%.6e max_dh=%.6e l1_dh=%.6e min_depth=%.6e fallbacks=%zu wall=%.2fs\n",
                out.report.spurious, out.report.max_dh, out.report.l1_dh, out.log.min_depth,
                out.diagnostics.total(), seconds);
    if (out.shock) std::printf("shock_position=%.15g\n", *out.shock);
    return 0;
}

void sweep_wellbalance(const std::filesystem::path& dir) {
    std::printf("%-5s %-7s %6s %8s %14s\n", "case", "scheme", "cells", "amp", "spurious");
    for (FlowCase flow : {FlowCase::Subcritical, FlowCase::Transcritical, FlowCase::TranscriticalShock}) {
        for (SchemeKind scheme : {SchemeKind::Still, SchemeKind::Moving}) {
            for (int n : {100, 200, 1000}) {
                for (double amp : {0.05, 0.001}) {
                    RunConfig c;
                    c.flow = flow;
                    c.scheme = scheme;
                    c.n_cells = n;
                    c.amplitude = amp;
                    if (!dir.empty()) {
                        c.output = (dir / ("wb_" + to_string(flow) + "_" + to_string(scheme) + "_" +
                                           std::to_string(n) + "_" + (amp > 0.005 ? "5e-2" : "1e-3") +
                                           ".csv"))
                                       .string();
                    }
                    const RunOutcome out = run_case(c);
                    std::printf("%-5s %-7s %6d %8g %14.6e\n", to_string(flow).c_str(),
                                to_string(scheme).c_str(), n, amp, out.report.spurious);
                }
            }
        }
    }
}

void sweep_convergence() {
    for (SchemeKind scheme : {SchemeKind::Still, SchemeKind::Moving, SchemeKind::FirstOrder}) {
        const OrderTable t = convergence_study(smooth_accuracy_case(), scheme, {50, 100, 200, 400});
        std::printf("scheme=%s\n%6s %14s %8s\n", to_string(scheme).c_str(), "cells", "l1_error", "order");
        for (const auto& row : t.rows) std::printf("%6d %14.6e %8.3f\n", row.n_cells, row.l1_error, row.order);
        std::printf("fitted order %.3f\n", t.fitted_order);
    }
}

void sweep_figures(const std::filesystem::path& dir) {
    for (FlowCase flow : {FlowCase::Subcritical, FlowCase::Transcritical, FlowCase::TranscriticalShock}) {
        for (SchemeKind scheme : {SchemeKind::Still, SchemeKind::Moving}) {
            for (int n : {200, 1000}) {
                RunConfig c;
                c.flow = flow;
                c.scheme = scheme;
                c.n_cells = n;
                c.emit_reference = true;
                c.output = (dir / ("fig_" + to_string(flow) + "_" + to_string(scheme) + "_" +
                                   std::to_string(n) + ".csv"))
                               .string();
                const RunOutcome out = run_case(c);
                std::printf("%s written (spurious %.3e)\n", c.output.c_str(), out.report.spurious);
            }
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Well-balanced WENO schemes for the shallow-water equations"};
    app.require_subcommand(1);

    RunConfig config;
    std::string case_name = "a";
    std::string scheme_name = "moving";
    app.config_formatter(std::make_shared<RunConfigFile>());
    app.set_config("--config", "", "key = value file with the run options; flags on the command line win");
    CLI::App* run = app.add_subcommand("run", "Run one benchmark and write a CSV");
    run->fallthrough();
    run->add_option("--case", case_name, "a | b | c | lake");
    run->add_option("--scheme", scheme_name, "still | moving | oracle1");
    run->add_option("--cells", config.n_cells, "number of cells");
    run->add_option("--amp", config.amplitude, "perturbation amplitude");
    run->add_option("--t-end", config.t_end, "final time");
    run->add_option("--cfl", config.cfl, "CFL number")->capture_default_str();
    run->add_option("--out", config.output, "CSV output path");
    run->add_flag("--emit-reference", config.emit_reference, "also write <out>.reference.csv");
    run->add_flag("--smooth", config.smooth, "smooth perturbation for order studies (case a)");

    std::string study;
    std::string out_dir;
    CLI::App* sweep = app.add_subcommand("sweep", "Run a predefined study");
    sweep->add_option("--study", study, "wellbalance | convergence | paper-figs")
        ->required()
        ->check(CLI::IsMember({"wellbalance", "convergence", "paper-figs"}));
    sweep->add_option("--out-dir", out_dir, "directory for CSV files");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            config.flow = parse_flow_case(case_name);
            config.scheme = parse_scheme(scheme_name);
            return do_run(config);
        }
        std::filesystem::path dir = out_dir;
        if (!dir.empty()) std::filesystem::create_directories(dir);
        if (study == "wellbalance") {
            sweep_wellbalance(dir);
        } else if (study == "convergence") {
            sweep_convergence();
        } else {
            sweep_figures(dir.empty() ? std::filesystem::path(".") : dir);
        }
        return 0;
    } catch (const FatalDiagnostic& e) {
        std::cerr << "fatal: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
