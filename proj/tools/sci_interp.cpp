// Command-line front end: dataset fit/predict plus the named experiments,
// each emitting plot-ready CSV/JSON into an output directory.
//
// Exit codes: 0 success, 2 user/input error, 3 internal invariant violation.

#include <cstdlib>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sci/cli/commands.hpp"
#include "sci/cli/config.hpp"

namespace {

int env_threads_fallback() {
    if (const char* env = std::getenv("SCI_INTERP_THREADS")) {
        try {
            return std::max(0, std::stoi(env));
        } catch (const std::exception&) {
            return 0;
        }
    }
    return 0;
}

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    int threads = env_threads_fallback();
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "Config file (TOML or JSON)");
    cmd->add_option("--out", args.out_dir, "Output directory");
    cmd->add_option("--seed", args.seed, "Seed override");
    cmd->add_option("--threads", args.threads, "Worker threads (0 = auto)");
}

sci::cli::ordered_json resolve_config(const CommonArgs& args) {
    sci::cli::ordered_json config = sci::cli::ordered_json::object();
    if (!args.config_path.empty()) config = sci::cli::load_config_file(args.config_path);
    if (args.seed) config["seed"] = *args.seed;
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interpolating nearest-neighbor estimators and experiments"};
    app.require_subcommand(1);

    CommonArgs fig1_args, fig2_args, rates_args, descent_args, islands_args;
    auto* fig1 = app.add_subcommand("fig1", "Noisy-line regression demo");
    add_common(fig1, fig1_args);
    auto* fig2 = app.add_subcommand("fig2", "Two-Gaussian classification demo");
    add_common(fig2, fig2_args);
    auto* rates = app.add_subcommand("rates", "Excess-risk rate sweep");
    add_common(rates, rates_args);
    auto* descent = app.add_subcommand("descent", "Least-squares double descent sweep");
    add_common(descent, descent_args);
    auto* islands = app.add_subcommand("islands", "Mislabeled-point island radii");
    add_common(islands, islands_args);

    sci::cli::PredictOptions popt;
    std::string predict_out = "out";
    auto* predict = app.add_subcommand("predict", "Fit a CSV training set, predict queries");
    predict->add_option("--train", popt.train_csv, "Training CSV (x1..xd,y)")->required();
    predict->add_option("--queries", popt.query_csv, "Query CSV (x1..xd)")->required();
    predict->add_option("--estimator", popt.estimator,
                        "winn|knn|1nn|hilbert|shepard|simplex|lagrange");
    predict->add_option("--k", popt.k, "Neighbor count or 'auto'");
    predict->add_option("--weights", popt.weights, "'log' or a positive delta");
    predict->add_option("--alpha", popt.alpha, "Holder exponent used by auto-k");
    predict->add_option("--k-const", popt.k_const, "auto-k prefactor");
    predict->add_option("--power", popt.shepard_power, "Shepard inverse-distance power");
    predict->add_option("--exponent", popt.hilbert_exponent,
                        "Hilbert kernel exponent (default: data dimension)");
    predict->add_option("--out", predict_out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*fig1) sci::cli::cmd_fig1(resolve_config(fig1_args), fig1_args.out_dir,
                                      fig1_args.threads);
        if (*fig2) sci::cli::cmd_fig2(resolve_config(fig2_args), fig2_args.out_dir,
                                      fig2_args.threads);
        if (*rates) sci::cli::cmd_rates(resolve_config(rates_args), rates_args.out_dir,
                                        rates_args.threads);
        if (*descent) sci::cli::cmd_descent(resolve_config(descent_args),
                                            descent_args.out_dir, descent_args.threads);
        if (*islands) sci::cli::cmd_islands(resolve_config(islands_args),
                                            islands_args.out_dir, islands_args.threads);
        if (*predict) sci::cli::cmd_predict(popt, predict_out);
    } catch (const sci::io::user_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const sci::internal_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
