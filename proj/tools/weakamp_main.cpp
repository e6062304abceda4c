// weakamp: CSV figure reproduction, parameter sweeps, brute-force oracle
// cross-checks, and a device feasibility report.
//
// Exit codes: 0 success, 1 oracle/tolerance violation, 2 usage error.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "weakamp/weakamp.hpp"

namespace {

int cmd_figure(const std::string& name) {
    try {
        weakamp::write_figure(name, std::cout);
    } catch (const weakamp::UnknownFigure& e) {
        std::cerr << "error: " << e.what() << "\nknown figures:";
        for (const auto& n : weakamp::figure_names()) std::cerr << ' ' << n;
        std::cerr << '\n';
        return 2;
    }
    return 0;
}

int cmd_sweep(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error: cannot open config file '" << path << "'\n";
        return 2;
    }
    try {
        const weakamp::SweepSpec spec = weakamp::parse_sweep_config(in);
        weakamp::run_sweep(spec, std::cout);
    } catch (const weakamp::ConfigParse& e) {
        std::cerr << "error: " << path << ": " << e.what() << '\n';
        return 2;
    }
    return 0;
}

int cmd_oracle_check(double tol, int grid_points, bool skip_damped) {
    weakamp::OracleCheckOptions opt;
    if (tol > 0.0) {
        opt.tol_closed = tol;
        opt.tol_damped = tol;
    }
    if (grid_points > 0) opt.grid_points = grid_points;
    opt.include_damped = !skip_damped;
    const weakamp::OracleReport rep = weakamp::run_oracle_checks(opt, &std::cerr);
    rep.print(std::cout);
    return rep.all_pass() ? 0 : 1;
}

int cmd_feasibility(double fm, double kappa_ratio, double dark_rate,
                    double cavity_length) {
    const double kappa = kappa_ratio * 2.0 * weakamp::kPi * fm;
    const double k_min =
        weakamp::dark_count_threshold(fm, kappa_ratio, dark_rate);
    const double k_min_hz =
        weakamp::dark_count_threshold_hz_convention(fm, kappa_ratio, dark_rate);
    const weakamp::ModelParams at_kmin(std::max(k_min, 1e-30), 0.5, 0.0);
    const double P = weakamp::overall_P(at_kmin, kappa_ratio);
    const double finesse = weakamp::cavity_finesse(cavity_length, kappa);

    std::cout << std::setprecision(9)
              << "device feasibility report\n"
              << "  mechanical frequency f_m   : " << fm << " Hz\n"
              << "  cavity decay kappa         : " << kappa
              << " rad/s (kappa/omega_m = " << kappa_ratio << ")\n"
              << "  detection window 1/kappa   : " << 1.0 / kappa << " s\n"
              << "  dark count rate            : " << dark_rate << " Hz\n"
              << "  k_min (kappa = r*2*pi*f_m) : " << k_min << '\n'
              << "  k_min (kappa = r*f_m in Hz): " << k_min_hz << '\n'
              << "  success probability at k_min (|alpha|=1/2, theta=0): "
              << (dark_rate > 0.0 ? P : 0.0) << '\n'
              << "  cavity finesse at L = " << cavity_length
              << " m: " << finesse << " (reference value 3.33e2)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "weak-measurement amplification toolkit: closed-form curves, "
        "parameter sweeps, and truncated-Fock cross-checks"};
    app.require_subcommand(1);

    std::string figure_name;
    auto* fig = app.add_subcommand("figure", "write one reference curve set as CSV");
    fig->add_option("name", figure_name, "figure name (fig2a .. fig6)")
        ->required();

    std::string config_path;
    auto* sw = app.add_subcommand("sweep", "run a configured parameter sweep");
    sw->add_option("--config", config_path, "key = value config file")
        ->required();

    double tol = 0.0;
    int grid_points = 0;
    bool skip_damped = false;
    auto* oc = app.add_subcommand(
        "oracle-check", "compare closed forms against the truncated-Fock oracle");
    oc->add_option("--tol", tol, "override both comparison tolerances")
        ->check(CLI::PositiveNumber);
    oc->add_option("--grid-points", grid_points, "time-grid points (default 20)")
        ->check(CLI::PositiveNumber);
    oc->add_flag("--skip-damped", skip_damped,
                 "skip the Lindblad comparison (fast smoke run)");

    double fm = 0.0, kappa_ratio = 0.0, dark_rate = 0.0, cavity_length = 0.1;
    auto* fe = app.add_subcommand("feasibility",
                                  "dark-count feasibility report for a device");
    fe->add_option("--fm", fm, "mechanical frequency in Hz")
        ->required()
        ->check(CLI::PositiveNumber);
    fe->add_option("--kappa-ratio", kappa_ratio, "kappa / omega_m")
        ->required()
        ->check(CLI::PositiveNumber);
    fe->add_option("--dark-rate", dark_rate, "detector dark count rate in Hz")
        ->required()
        ->check(CLI::NonNegativeNumber);
    fe->add_option("--cavity-length", cavity_length,
                   "cavity length in m for the finesse line (default 0.1)")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (fig->parsed()) return cmd_figure(figure_name);
    if (sw->parsed()) return cmd_sweep(config_path);
    if (oc->parsed()) return cmd_oracle_check(tol, grid_points, skip_damped);
    if (fe->parsed()) return cmd_feasibility(fm, kappa_ratio, dark_rate, cavity_length);
    return 2;
}
