// Command-line front end: train, predict, eval, analyze, config-dump.

#include "tmcrf/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

namespace {

using namespace tmcrf;

struct ConfigFlags {
    std::string config_path;
    std::string preset;
    std::optional<double> sigma2;
    std::optional<double> epsilon;
    std::optional<int> max_iters;
    std::optional<std::string> exclude_prefix;

    void add_to(CLI::App& cmd)
    {
        cmd.add_option("--config", config_path, "Experiment configuration file")->check(CLI::ExistingFile);
        cmd.add_option("--preset", preset, "Feature preset exp1..exp8, applied before --config");
    }

    void add_training_to(CLI::App& cmd)
    {
        cmd.add_option("--sigma2", sigma2, "Prior variance (inf disables the penalty)");
        cmd.add_option("--epsilon", epsilon, "Gradient infinity-norm at which training stops");
        cmd.add_option("--max-iters", max_iters, "L-BFGS iteration cap");
        cmd.add_option("--exclude-prefix", exclude_prefix, "Drop training records whose id starts with this");
    }

    [[nodiscard]] bool has_feature_config() const { return !config_path.empty() || !preset.empty(); }

    [[nodiscard]] ExperimentConfig resolve() const
    {
        ExperimentConfig c;
        if (!preset.empty()) {
            set_experiment_option(c, "preset", preset);
        }
        if (!config_path.empty()) {
            apply_experiment_text(c, read_text_file(config_path));
        }
        if (sigma2) {
            c.train.sigma2 = *sigma2;
        }
        if (epsilon) {
            c.train.epsilon = *epsilon;
        }
        if (max_iters) {
            c.train.max_iters = *max_iters;
        }
        if (exclude_prefix) {
            c.exclude_prefix = *exclude_prefix;
        }
        c.train.validate();
        return c;
    }
};

ParseMode parse_mode(bool lenient) { return lenient ? ParseMode::Lenient : ParseMode::Strict; }

template <class F>
void with_output(const std::string& path, F&& body)
{
    if (path.empty() || path == "-") {
        body(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot write '" + path + "'");
    }
    body(out);
    if (!out.flush()) {
        throw Error(ErrorCode::Io, "failed writing '" + path + "'");
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Transmembrane helix prediction with a linear-chain CRF"};
    app.require_subcommand(1);

    ConfigFlags flags;
    int threads = 1;
    bool deterministic = false;
    bool lenient = false;

    auto* train_cmd = app.add_subcommand("train", "Train a model");
    std::string train_path;
    std::string model_out;
    std::string trace_path;
    flags.add_to(*train_cmd);
    flags.add_training_to(*train_cmd);
    train_cmd->add_option("train", train_path, "Labeled training set (defaults to data.train)");
    train_cmd->add_option("-o,--model", model_out, "Model file to write")->required();
    train_cmd->add_option("--trace", trace_path, "Write the objective trace as TSV");
    train_cmd->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    train_cmd->add_flag("--deterministic", deterministic, "Fixed-order gradient reduction");
    train_cmd->add_flag("--lenient", lenient, "Map unknown residue letters to X");

    auto* predict_cmd = app.add_subcommand("predict", "Label sequences with a trained model");
    std::string model_path;
    std::string input_path;
    std::string out_path;
    bool emit_marginals = false;
    flags.add_to(*predict_cmd);
    predict_cmd->add_option("model", model_path, "Model file")->required();
    predict_cmd->add_option("input", input_path, "Sequences to label")->required();
    predict_cmd->add_option("-o,--out", out_path, "Output file (default stdout)");
    predict_cmd->add_flag("--emit-marginals", emit_marginals, "Append per-residue helix probabilities");
    predict_cmd->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    predict_cmd->add_flag("--deterministic", deterministic, "Accepted for symmetry; output order is always fixed");
    predict_cmd->add_flag("--lenient", lenient, "Map unknown residue letters to X");

    auto* eval_cmd = app.add_subcommand("eval", "Score predictions against gold labels");
    std::string gold_path;
    std::string predictions_path;
    std::string format = "both";
    eval_cmd->add_option("gold", gold_path, "Labeled dataset")->required();
    eval_cmd->add_option("predictions", predictions_path, "Output of predict")->required();
    eval_cmd->add_option("--format", format, "table, tsv or both")->check(CLI::IsMember({"table", "tsv", "both"}));
    eval_cmd->add_flag("--lenient", lenient, "Map unknown residue letters to X");

    auto* analyze_cmd = app.add_subcommand("analyze", "Residue distributions around predicted helices");
    AnalyzeOptions analyze;
    std::string mode = "profile";
    analyze_cmd->add_option("model", model_path, "Model file")->required();
    analyze_cmd->add_option("input", input_path, "Sequences to analyze")->required();
    analyze_cmd->add_option("--mode", mode, "central or profile")->check(CLI::IsMember({"central", "profile"}));
    analyze_cmd->add_option("--set", analyze.selector,
                            "Residue set for profile mode: a property group name, 'all', or letters");
    analyze_cmd->add_option("--radius", analyze.radius, "Profile radius in residues")->check(CLI::PositiveNumber);
    analyze_cmd->add_option("--half-width", analyze.half_width, "Central window half width");
    analyze_cmd->add_option("-o,--out", out_path, "Output file (default stdout)");
    analyze_cmd->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    analyze_cmd->add_flag("--lenient", lenient, "Map unknown residue letters to X");

    auto* dump_cmd = app.add_subcommand("config-dump", "Print the resolved experiment configuration");
    flags.add_to(*dump_cmd);
    flags.add_training_to(*dump_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(ExitStatus::Usage);
    }

    try {
        if (train_cmd->parsed()) {
            auto config = flags.resolve();
            config.train.threads = threads;
            config.train.deterministic = deterministic || threads == 1;
            if (train_path.empty()) {
                train_path = config.train_path;
            }
            if (train_path.empty()) {
                std::cerr << "error: no training set given (argument or data.train)\n";
                return static_cast<int>(ExitStatus::Usage);
            }
            const auto summary = cmd_train(config, train_path, model_out, parse_mode(lenient));
            std::cout << "records\t" << summary.records << '\n'
                      << "excluded\t" << summary.excluded << '\n'
                      << "topology\t" << topology_name(summary.topology) << '\n'
                      << "features\t" << summary.features << '\n'
                      << "iterations\t" << summary.report.iterations << '\n'
                      << "objective\t" << format_double(summary.report.objective) << '\n'
                      << "gradient_norm\t" << format_double(summary.report.gradient_norm) << '\n'
                      << "status\t" << summary.report.status << '\n';
            if (!trace_path.empty()) {
                with_output(trace_path, [&](std::ostream& out) { write_trace(out, summary.report); });
            }
        } else if (predict_cmd->parsed()) {
            PredictOptions options;
            options.marginals = emit_marginals;
            options.threads = threads;
            options.mode = parse_mode(lenient);
            if (flags.has_feature_config()) {
                options.expected_config = flags.resolve().features;
            }
            with_output(out_path, [&](std::ostream& out) { cmd_predict(model_path, input_path, out, options); });
        } else if (eval_cmd->parsed()) {
            const auto report = cmd_eval(gold_path, predictions_path, parse_mode(lenient));
            if (format != "tsv") {
                write_metrics_table(std::cout, report);
            }
            if (format == "both") {
                std::cout << '\n';
            }
            if (format != "table") {
                write_metrics_tsv(std::cout, report);
            }
        } else if (analyze_cmd->parsed()) {
            analyze.mode = mode == "central" ? AnalysisMode::Central : AnalysisMode::Profile;
            analyze.threads = threads;
            analyze.parse_mode = parse_mode(lenient);
            with_output(out_path, [&](std::ostream& out) { cmd_analyze(model_path, input_path, out, analyze); });
        } else if (dump_cmd->parsed()) {
            std::cout << dump_experiment_config(flags.resolve());
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(exit_status(e.code()));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(ExitStatus::Data);
    }
    return 0;
}
