#include <CLI11.hpp>

#include <iostream>

#include "relhartree/harness.hpp"

using namespace relhartree;
using namespace relhartree::harness;

int main(int argc, char** argv) {
    CLI::App app{"relhartree: pseudospectral simulation and verification toolkit for the 2D "
                 "semi-relativistic Hartree equation"};
    app.require_subcommand(1);
    app.fallthrough(); // common flags may follow the subcommand

    CommonOpts opts;
    app.add_option("--out", opts.out_root, "output root (default: $RELHARTREE_OUT or ./runs)");
    app.add_option("--seed", opts.seed, "sampler seed");
    app.add_option("--jobs", opts.jobs, "worker pool size (default: hardware parallelism)");
    app.add_flag("--quiet", opts.quiet, "suppress progress output");

    std::string config_path, manifest_path, record_csv, channel, out_svg;
    std::vector<double> gammas;
    VerifyOpts vopts;
    double plot_tmin = 0.0, plot_tmax = 0.0;
    bool have_window = false;

    auto* simulate = app.add_subcommand("simulate", "run a configured simulation");
    simulate->add_option("--config", config_path, "config file")->required();

    auto* linear = app.add_subcommand("linear-decay", "lambda = 0 decay-rate study");
    linear->add_option("--config", config_path, "config file")->required();
    linear->add_option("--gammas", gammas, "potential exponents for the Hartree-term channel");

    auto* scattering = app.add_subcommand("scattering", "small-data nonlinear scattering run");
    scattering->add_option("--config", config_path, "config file")->required();

    auto* verify = app.add_subcommand("verify", "inequality and multiplier verifiers");
    verify->add_option("--samples", vopts.samples, "sampler size (default 1e5)");
    verify->add_option("--gamma", vopts.gamma, "potential exponent for the HLS suite");
    verify->add_option("--suites", vopts.suites,
                       "subset of null,mderiv,hls,dispersive,cm (default: all)");

    auto* sweep = app.add_subcommand("sweep", "cartesian parameter sweep");
    sweep->add_option("--manifest", manifest_path, "sweep manifest")->required();

    auto* plot = app.add_subcommand("plot", "log-log plot of a recorded channel");
    plot->add_option("--record", record_csv, "series CSV file")->required();
    plot->add_option("--channel", channel, "channel name")->required();
    plot->add_option("--svg", out_svg, "output SVG path")->required();
    auto* tmin_opt = plot->add_option("--tmin", plot_tmin, "fit window start");
    plot->add_option("--tmax", plot_tmax, "fit window end")->needs(tmin_opt);

    CLI11_PARSE(app, argc, argv);
    have_window = tmin_opt->count() > 0;

    try {
        if (simulate->parsed()) return cli_simulate(config_path, opts);
        if (linear->parsed()) return cli_linear_decay(config_path, gammas, opts);
        if (scattering->parsed()) return cli_scattering(config_path, opts);
        if (verify->parsed()) return cli_verify(vopts, opts);
        if (sweep->parsed()) return cli_sweep(manifest_path, opts);
        if (plot->parsed()) {
            if (have_window) return cli_plot(record_csv, channel, out_svg, plot_tmin, plot_tmax);
            return cli_plot(record_csv, channel, out_svg);
        }
    } catch (const BlowUpError& e) {
        std::cerr << "error (blow-up): " << e.what() << "\n";
        return exit_numeric;
    } catch (const NumericError& e) {
        std::cerr << "error (numeric): " << e.what() << "\n";
        return exit_numeric;
    } catch (const ConfigError& e) {
        std::cerr << "error (config): " << e.what() << "\n";
        return exit_config;
    } catch (const UsageError& e) {
        std::cerr << "error (usage): " << e.what() << "\n";
        return exit_config;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    }
    return exit_config;
}
