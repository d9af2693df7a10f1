#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qcast/config.hpp"
#include "qcast/csv.hpp"
#include "qcast/errors.hpp"
#include "qcast/pipeline.hpp"
#include "qcast/synth.hpp"

namespace {

constexpr const char* kAlphaNote =
    "NOTE on the penalty convention: alpha = 1 is ridge and alpha = 0 is the LASSO\n"
    "(the REVERSE of glmnet). Tuned lambda values are not comparable across\n"
    "different alpha or different standardizations; compare models by their\n"
    "out-of-sample errors, not by lambda.";

std::optional<std::string> env_value(const char* name) {
    const char* value = std::getenv(name);
    if (value && *value) {
        return std::string(value);
    }
    return std::nullopt;
}

unsigned parse_threads(const std::string& text, const std::string& origin) {
    char* end = nullptr;
    const unsigned long value = std::strtoul(text.c_str(), &end, 10);
    if (text.empty() || end != text.c_str() + text.size() || value < 1) {
        throw qcast::ConfigError(origin + ": invalid thread count '" + text + "'");
    }
    return static_cast<unsigned>(value);
}

std::uint64_t parse_seed(const std::string& text, const std::string& origin) {
    char* end = nullptr;
    const unsigned long long value = std::strtoull(text.c_str(), &end, 10);
    if (text.empty() || end != text.c_str() + text.size()) {
        throw qcast::ConfigError(origin + ": invalid seed '" + text + "'");
    }
    return value;
}

int run_command(const std::string& config_path, const std::optional<std::string>& output_dir,
                const std::optional<std::string>& threads) {
    qcast::RunConfig config = qcast::parse_run_config(config_path);

    // Precedence: command line beats environment beats config file.
    if (const auto env = env_value("QCAST_OUTPUT_DIR")) {
        config.output_dir = *env;
    }
    if (const auto env = env_value("QCAST_THREADS")) {
        config.threads = parse_threads(*env, "QCAST_THREADS");
    }
    if (output_dir) {
        config.output_dir = *output_dir;
    }
    if (threads) {
        config.threads = parse_threads(*threads, "--threads");
    }

    const qcast::PipelineResult result = qcast::run_pipeline(config);
    for (const auto& file : result.files) {
        std::cout << "wrote " << file.string() << '\n';
    }

    std::cout << '\n';
    char line[128];
    std::snprintf(line, sizeof(line), "%-16s %-16s %10s %10s", "model", "kind", "mae", "rmse");
    std::cout << line << '\n';
    for (const auto& model : result.report.models) {
        if (model.complete()) {
            std::snprintf(line, sizeof(line), "%-16s %-16s %10.4f %10.4f", model.name.c_str(),
                          model.kind.c_str(), *model.mae, *model.rmse);
        } else {
            std::snprintf(line, sizeof(line), "%-16s %-16s %10s %10s  (failed folds)",
                          model.name.c_str(), model.kind.c_str(), "-", "-");
        }
        std::cout << line << '\n';
    }
    return 0;
}

int synth_command(const std::string& scenario_path, const std::optional<std::string>& output,
                  const std::optional<std::string>& seed) {
    qcast::ScenarioRun run = qcast::parse_scenario_config(scenario_path);
    if (const auto env = env_value("QCAST_SEED")) {
        run.spec.seed = parse_seed(*env, "QCAST_SEED");
    }
    if (seed) {
        run.spec.seed = parse_seed(*seed, "--seed");
    }
    if (output) {
        run.output = *output;
    }

    const qcast::SeriesFrame frame = qcast::generate(run.spec);
    if (run.output.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(run.output.parent_path(), ec);
    }
    qcast::write_frame_csv(frame, run.output);
    std::cout << "wrote " << run.output.string() << " (" << frame.n() << " rows, " << frame.q()
              << " predictors, seed " << run.spec.seed << ")\n";
    return 0;
}

int validate_command(const std::string& config_path) {
    const qcast::RunConfig config = qcast::parse_run_config(config_path);
    const qcast::ValidationSummary summary = qcast::validate_run(config);

    std::cout << "config ok\n"
              << "  dataset rows:   " << summary.raw_rows << '\n'
              << "  frame rows:     " << summary.frame_rows << '\n'
              << "  predictors:     " << summary.predictors << '\n'
              << "  folds:          " << summary.folds << " (training window " << summary.train_size
              << ")\n"
              << "  test window:    " << summary.first_test.str() << ".." << summary.last_test.str()
              << '\n';
    std::cout << "  outliers clamped:";
    bool any = false;
    for (const auto& [name, count] : summary.outliers) {
        if (count > 0) {
            std::cout << ' ' << name << '=' << count;
            any = true;
        }
    }
    std::cout << (any ? "\n" : " none\n");
    std::cout << "  models:        ";
    for (const auto& name : summary.model_names) {
        std::cout << ' ' << name;
    }
    std::cout << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qcast — quarterly growth forecasting over rolling-origin windows"};
    app.require_subcommand(1);
    app.footer(kAlphaNote);

    std::string config_path;
    std::optional<std::string> output_dir;
    std::optional<std::string> threads;

    CLI::App* run = app.add_subcommand("run", "run the full comparison described by a config");
    run->add_option("config", config_path, "run config file")->required();
    run->add_option("--output-dir", output_dir, "report directory (env: QCAST_OUTPUT_DIR)");
    run->add_option("--threads", threads, "fold workers (env: QCAST_THREADS); any count "
                                          "produces byte-identical outputs");

    std::string scenario_path;
    std::optional<std::string> output;
    std::optional<std::string> seed;

    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic dataset CSV");
    synth->add_option("scenario", scenario_path, "scenario config file")->required();
    synth->add_option("--output", output, "destination CSV (overrides the scenario)");
    synth->add_option("--seed", seed, "generator seed (env: QCAST_SEED)");

    CLI::App* validate = app.add_subcommand("validate", "check a config and dataset without fitting");
    validate->add_option("config", config_path, "run config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // usage problems are configuration problems
    }

    try {
        if (run->parsed()) {
            return run_command(config_path, output_dir, threads);
        }
        if (synth->parsed()) {
            return synth_command(scenario_path, output, seed);
        }
        return validate_command(config_path);
    } catch (const qcast::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const qcast::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 3;
    } catch (const qcast::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
