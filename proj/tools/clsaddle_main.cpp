#include <cmath>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "clsaddle/sweep.hpp"

namespace {

int run_command(const std::string& config_path,
                const std::vector<std::string>& overrides, int jobs) {
    using namespace clsaddle;
    SweepConfig cfg = parse_config_file(config_path);
    for (const auto& ov : overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--set expects key=value, got: " + ov);
        apply_override(cfg, ov.substr(0, eq), ov.substr(eq + 1));
    }
    cfg.validate();

    const auto rows = run_axis_sweep(cfg, jobs);
    std::ofstream out(cfg.out);
    if (!out) throw ConfigError("cannot open output file: " + cfg.out);
    write_csv(out, axis_name(cfg.axis), rows);
    std::cerr << "wrote " << rows.size() << " rows to " << cfg.out << "\n";
    return 0;
}

int fit_command(const std::string& csv_path, const std::string& window,
                const std::string& series) {
    using namespace clsaddle;
    const auto comma = window.find(',');
    if (comma == std::string::npos)
        throw ConfigError("--window expects a,b");
    const double lo = std::stod(window.substr(0, comma));
    const double hi = std::stod(window.substr(comma + 1));

    std::ifstream in(csv_path);
    if (!in) throw ConfigError("cannot open CSV file: " + csv_path);
    const auto rows = read_csv(in);

    std::vector<std::pair<double, double>> pts;
    for (const auto& r : rows) {
        if (!series.empty()) {
            const double want = std::stod(series);
            if (std::abs(r.row.axis_value - want) >
                1e-9 * (1.0 + std::abs(want)))
                continue;
        }
        if (!std::isnan(r.row.gamma_tilde))
            pts.push_back({r.row.t, r.row.gamma_tilde});
    }
    const FitResult fit = fit_linear(pts, lo, hi);
    std::cout << "A = " << fit.slope << "\nB = " << fit.intercept
              << "\nresidual_rms = " << fit.residual_rms
              << "\nn_points = " << fit.n_points << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Caldeira-Leggett decoherence via complex saddle points"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    int jobs = 1;
    auto* run = app.add_subcommand("run", "run a sweep from a config file");
    run->add_option("config", config_path, "config file")->required();
    run->add_option("--set", overrides, "override a config key (key=value)");
    run->add_option("--jobs", jobs, "worker count")->check(CLI::PositiveNumber);

    std::string csv_path, window, series;
    auto* fit = app.add_subcommand("fit", "refit a series from existing CSV output");
    fit->add_option("csv", csv_path, "CSV produced by run")->required();
    fit->add_option("--window", window, "fit window a,b")->required();
    fit->add_option("--series", series, "axis value selecting one series");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return run_command(config_path, overrides, jobs);
        return fit_command(csv_path, window, series);
    } catch (const clsaddle::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const clsaddle::ParamError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const clsaddle::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
