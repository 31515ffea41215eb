// Command-line front end: fit/predict on CSV data, rate experiments and
// bias/variance probes from config files, and figure data emission.

#include <CLI11.hpp>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "nwinterp/config.hpp"
#include "nwinterp/datagen.hpp"
#include "nwinterp/errors.hpp"
#include "nwinterp/estimator.hpp"
#include "nwinterp/experiments.hpp"
#include "nwinterp/figures.hpp"
#include "nwinterp/kernels.hpp"

namespace fs = std::filesystem;
using namespace nwinterp;

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

std::string case_name(PredictionCase c) {
    switch (c) {
        case PredictionCase::ExactMatch: return "exact-match";
        case PredictionCase::EmptyNeighborhood: return "empty-neighborhood";
        case PredictionCase::WeightedAverage: return "weighted-average";
    }
    return "?";
}

// Query CSV: header x1,...,x<d>, one query point per row.
std::vector<double> read_query_csv(const std::string& path, int expect_dim,
                                   std::size_t& count) {
    std::ifstream in(path);
    if (!in) throw CsvParseError("cannot open file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw CsvParseError(path + ": empty input");
    std::vector<double> flat;
    std::size_t row = 1;
    count = 0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        int cols = 0;
        while (std::getline(ss, field, ',')) {
            double v;
            auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
            if (ec != std::errc() || p != field.data() + field.size()) {
                throw CsvParseError(path + ": row " + std::to_string(row) +
                                    ": cannot parse number '" + field + "'");
            }
            flat.push_back(v);
            ++cols;
        }
        if (cols != expect_dim) {
            throw CsvParseError(path + ": row " + std::to_string(row) + ": expected " +
                                std::to_string(expect_dim) + " coordinates");
        }
        ++count;
    }
    return flat;
}

Scenario scenario_from_config(const RunConfig& cfg) {
    const std::string name = cfg.get("scenario.name");
    const int d = static_cast<int>(cfg.get_int_or("scenario.d", 1));
    std::map<std::string, double> params;
    for (const auto& [key, value] : cfg.entries()) {
        const std::string prefix = "scenario.param.";
        if (key.rfind(prefix, 0) == 0) {
            params[key.substr(prefix.size())] = cfg.get_double(key);
        }
    }
    return make_scenario(name, d, params);
}

KernelSpec kernel_from_config(const RunConfig& cfg) {
    std::optional<double> a;
    if (cfg.has("kernel.a")) a = cfg.get_double("kernel.a");
    return kernel_from_name(cfg.get("kernel.name"), a);
}

void write_kv_file(const std::string& path,
                   const std::vector<std::pair<std::string, std::string>>& kv) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    for (const auto& [k, v] : kv) out << k << " = " << v << "\n";
}

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
}

int run_fit_predict(const std::string& data_path, const std::string& kernel_name_arg,
                    std::optional<double> a, double h, const std::string& query_path,
                    const std::string& out_path) {
    const Dataset data = read_dataset_csv_file(data_path);
    const KernelSpec kernel = kernel_from_name(kernel_name_arg, a);
    const FittedInterpolator model = fit(data, kernel, h);
    std::size_t count = 0;
    const std::vector<double> queries = read_query_csv(query_path, data.dim, count);
    const auto outcomes = model.predict_batch(queries, count);

    std::ofstream out(out_path);
    if (!out) throw CsvParseError("cannot open for writing: " + out_path);
    out.precision(17);
    for (int k = 1; k <= data.dim; ++k) out << "x" << k << ",";
    out << "prediction,case\n";
    for (std::size_t i = 0; i < count; ++i) {
        for (int k = 0; k < data.dim; ++k) {
            out << queries[i * data.dim + k] << ",";
        }
        out << outcomes[i].value << "," << case_name(outcomes[i].kind) << "\n";
    }
    std::cout << "wrote " << count << " predictions to " << out_path << "\n";
    return kExitOk;
}

int run_rates(const std::string& config_path) {
    const RunConfig cfg = RunConfig::parse_file(config_path);
    cfg.require_known_keys({"scenario.name", "scenario.d", "scenario.param.*",
                            "kernel.name", "kernel.a", "experiment.n_grid",
                            "experiment.replicates", "experiment.seed",
                            "experiment.eval", "experiment.x0", "experiment.n_eval",
                            "experiment.excess_risk", "output.dir"});

    RateExperimentConfig rc;
    rc.scenario = scenario_from_config(cfg);
    rc.kernel = kernel_from_config(cfg);
    for (long long n : cfg.get_int_list("experiment.n_grid")) {
        if (n < 1) throw ConfigError("n_grid entries must be positive");
        rc.n_grid.push_back(static_cast<std::size_t>(n));
    }
    rc.replicates = static_cast<int>(cfg.get_int_or("experiment.replicates", 100));
    rc.seed = static_cast<std::uint64_t>(cfg.get_int_or("experiment.seed", 1));
    rc.report_excess_risk = cfg.get_int_or("experiment.excess_risk", 0) != 0;
    const std::string eval = cfg.get_or("experiment.eval", "integrated");
    if (eval == "pointwise" || eval == "both") {
        rc.eval.pointwise = true;
        rc.eval.x0 = cfg.get_double_list("experiment.x0");
    }
    if (eval == "integrated" || eval == "both") {
        rc.eval.integrated = true;
        rc.eval.n_eval = static_cast<int>(cfg.get_int_or("experiment.n_eval", 1000));
    }
    if (!rc.eval.pointwise && !rc.eval.integrated) {
        throw ConfigError("experiment.eval must be pointwise, integrated or both");
    }

    const fs::path out_dir = cfg.get_or("output.dir", ".");
    fs::create_directories(out_dir);

    const RateFitResult result = run_rate_experiment(rc);

    {
        std::ofstream out(out_dir / "rates.csv");
        out.precision(17);
        out << "n,mean_mse,stderr,empty_freq\n";
        for (const auto& s : result.per_n) {
            out << s.n << "," << s.mean_mse << "," << s.stderr_mse << ","
                << s.empty_freq << "\n";
        }
    }
    write_kv_file((out_dir / "summary.txt").string(),
                  {{"slope", fmt(result.fit.slope)},
                   {"slope_stderr", fmt(result.fit.slope_stderr)},
                   {"intercept", fmt(result.fit.intercept)},
                   {"theoretical_exponent", fmt(result.theoretical_exponent)},
                   {"degenerate", result.degenerate ? "1" : "0"}});
    if (rc.report_excess_risk) {
        std::ofstream out(out_dir / "excess.csv");
        out.precision(17);
        out << "n,excess_risk,stderr\n";
        for (const auto& s : result.per_n) {
            out << s.n << "," << s.excess_mean << "," << s.excess_stderr << "\n";
        }
    }
    std::cout << "slope = " << result.fit.slope
              << " (theory " << result.theoretical_exponent << "), results in "
              << out_dir.string() << "\n";
    return kExitOk;
}

int run_bias_variance(const std::string& config_path) {
    const RunConfig cfg = RunConfig::parse_file(config_path);
    cfg.require_known_keys({"scenario.name", "scenario.d", "scenario.param.*",
                            "kernel.name", "kernel.a", "experiment.n",
                            "experiment.design_reps", "experiment.noise_reps",
                            "experiment.seed", "experiment.x0", "output.dir"});

    const Scenario scenario = scenario_from_config(cfg);
    const KernelSpec kernel = kernel_from_config(cfg);
    const auto n = static_cast<std::size_t>(cfg.get_int("experiment.n"));
    const int design_reps = static_cast<int>(cfg.get_int_or("experiment.design_reps", 200));
    const int noise_reps = static_cast<int>(cfg.get_int_or("experiment.noise_reps", 200));
    const auto seed = static_cast<std::uint64_t>(cfg.get_int_or("experiment.seed", 1));
    std::vector<double> x0 = cfg.has("experiment.x0")
                                 ? cfg.get_double_list("experiment.x0")
                                 : std::vector<double>(scenario.dim, 0.5);

    const fs::path out_dir = cfg.get_or("output.dir", ".");
    fs::create_directories(out_dir);

    const BiasVarianceReport report =
        bias_variance_probe(scenario, kernel, n, x0, design_reps, noise_reps, seed);
    write_kv_file((out_dir / "bias_variance.txt").string(),
                  {{"h", fmt(report.h)},
                   {"bias_sq", fmt(report.bias_sq)},
                   {"variance", fmt(report.variance)},
                   {"sigma_x_sq", fmt(report.sigma_x_sq)},
                   {"bias_bound", fmt(report.bias_bound)},
                   {"variance_scale", fmt(report.variance_scale)},
                   {"empty_freq", fmt(report.empty_freq)}});
    std::cout << "bias_sq = " << report.bias_sq << ", variance = " << report.variance
              << ", results in " << out_dir.string() << "\n";
    return kExitOk;
}

int run_figures(const std::string& id, const std::string& out_dir_arg,
                const std::vector<double>& h_override, std::size_t n_override,
                std::uint64_t seed_override, int grid_override, bool svg) {
    FigureSpec spec = default_figure_spec(id);
    if (!h_override.empty()) spec.h_list = h_override;
    if (n_override > 0) spec.n = n_override;
    if (seed_override > 0) spec.seed = seed_override;
    if (grid_override > 0) spec.grid_resolution = grid_override;

    const fs::path out_dir = out_dir_arg;
    fs::create_directories(out_dir);
    const FigureData fig = emit_interpolation_curves(spec);
    write_figure_csv(fig, (out_dir / (id + "_curves.csv")).string(),
                     (out_dir / (id + "_points.csv")).string());
    if (svg) write_figure_svg(fig, (out_dir / (id + ".svg")).string());
    std::cout << "wrote " << fig.rows.size() << " curve rows for " << id << " to "
              << out_dir.string() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interpolating Nadaraya-Watson estimator with singular kernels"};
    app.set_version_flag("--version", kVersion);
    app.set_help_flag("--help", "print help and exit");
    app.require_subcommand(1);

    auto* fit_cmd = app.add_subcommand("fit-predict", "fit on CSV data and predict queries");
    fit_cmd->set_help_flag("--help", "print help and exit");
    std::string data_path, kernel_name_arg, query_path, out_path = "predictions.csv";
    std::optional<double> kernel_a;
    double h = 0.0;
    fit_cmd->add_option("--data", data_path, "training data CSV (x1..xd,y)")->required();
    fit_cmd->add_option("--kernel", kernel_name_arg, "kernel name")->required();
    fit_cmd->add_option("--a", kernel_a, "singular exponent a");
    fit_cmd->add_option("--h", h, "bandwidth")->required();
    fit_cmd->add_option("--query", query_path, "query CSV (x1..xd)")->required();
    fit_cmd->add_option("--out", out_path, "output predictions CSV");

    auto* rates_cmd = app.add_subcommand("rates", "run a convergence-rate experiment");
    std::string rates_config;
    rates_cmd->add_option("--config", rates_config, "config file")->required();

    auto* bv_cmd = app.add_subcommand("bias-variance", "run the bias/variance probe");
    std::string bv_config;
    bv_cmd->add_option("--config", bv_config, "config file")->required();

    auto* fig_cmd = app.add_subcommand("figures", "emit interpolation-curve data");
    fig_cmd->set_help_flag("--help", "print help and exit");
    std::string fig_id, fig_out = ".";
    std::vector<double> fig_h;
    std::size_t fig_n = 0;
    std::uint64_t fig_seed = 0;
    int fig_grid = 0;
    bool fig_svg = false;
    fig_cmd->add_option("--id", fig_id, "figure id")->required();
    fig_cmd->add_option("--out-dir", fig_out, "output directory");
    fig_cmd->add_option("--h", fig_h, "bandwidth list override");
    fig_cmd->add_option("--n", fig_n, "dataset size override");
    fig_cmd->add_option("--seed", fig_seed, "seed override");
    fig_cmd->add_option("--grid", fig_grid, "grid resolution override");
    fig_cmd->add_flag("--svg", fig_svg, "also render an SVG");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (fit_cmd->parsed()) {
            return run_fit_predict(data_path, kernel_name_arg, kernel_a, h,
                                   query_path, out_path);
        }
        if (rates_cmd->parsed()) return run_rates(rates_config);
        if (bv_cmd->parsed()) return run_bias_variance(bv_config);
        if (fig_cmd->parsed()) {
            return run_figures(fig_id, fig_out, fig_h, fig_n, fig_seed, fig_grid,
                               fig_svg);
        }
        return kExitUsage;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitData;
    } catch (const CsvParseError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const UnknownScenario& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitData;
    } catch (const InvalidParams& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitData;
    } catch (const EmptyDataset& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const DimensionMismatch& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const OutOfSupport& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const Error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
}
