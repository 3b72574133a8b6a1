#include "tmcrf/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <ostream>
#include <thread>

namespace tmcrf {

namespace {

std::string_view next_line(std::string_view& text)
{
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') {
        line.remove_suffix(1);
    }
    return line;
}

std::string format_probability(double p)
{
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.6f", p);
    return buf;
}

} // namespace

ExitStatus exit_status(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::ConfigConflict:
    case ErrorCode::InvalidConfig: return ExitStatus::Usage;
    case ErrorCode::NumericalFailure:
    case ErrorCode::InfeasibleTopology: return ExitStatus::Numerical;
    default: return ExitStatus::Data;
    }
}

TrainSummary cmd_train(const ExperimentConfig& config, const std::filesystem::path& train_path,
                       const std::filesystem::path& model_out, ParseMode mode)
{
    config.train.validate();
    auto data = read_dataset(train_path, mode);
    TrainSummary summary;
    if (!config.exclude_prefix.empty()) {
        const auto before = data.size();
        data = exclude_by_prefix(data, {config.exclude_prefix});
        summary.excluded = before - data.size();
    }
    summary.records = data.size();
    auto [model, report] = train(data, config.features, config.train);
    save_model(model_out, model);
    summary.features = model.index.size();
    summary.topology = model.topology.kind();
    summary.report = std::move(report);
    return summary;
}

std::vector<Prediction> predict_all(const Dataset& data, const CrfModel& model, int threads, bool with_marginals)
{
    std::vector<const ProteinRecord*> records;
    for (const auto& rec : data) {
        records.push_back(&rec);
    }
    std::vector<Prediction> out(records.size());
    const auto workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1,
                                                 std::max<std::size_t>(records.size(), 1));
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    auto work = [&](std::size_t w) {
        try {
            for (auto r = next.fetch_add(1); r < records.size(); r = next.fetch_add(1)) {
                out[r].labels = decode(*records[r], model).labels;
                if (with_marginals) {
                    out[r].marginals = helix_marginals(*records[r], model);
                }
            }
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(work, w);
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return out;
}

void cmd_predict(const std::filesystem::path& model_path, const std::filesystem::path& input_path, std::ostream& out,
                 const PredictOptions& options)
{
    const auto model = load_model(model_path);
    if (options.expected_config && config_hash(*options.expected_config) != config_hash(model.config)) {
        throw Error(ErrorCode::IncompatibleModel,
                    "'" + model_path.string() + "' was trained with a different feature configuration");
    }
    const auto data = read_dataset(input_path, options.mode);
    const auto predictions = predict_all(data, model, options.threads, options.marginals);
    std::size_t r = 0;
    for (const auto& rec : data) {
        const auto& p = predictions[r++];
        out << rec.id() << '\t' << labels_string(p.labels);
        if (options.marginals) {
            out << '\t';
            for (std::size_t i = 0; i < p.marginals.size(); ++i) {
                out << (i ? "," : "") << format_probability(p.marginals[i]);
            }
        }
        out << '\n';
    }
}

std::vector<PredictionRow> parse_predictions(std::string_view text)
{
    std::vector<PredictionRow> rows;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto line = next_line(text);
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const auto tab = line.find('\t');
        if (tab == std::string_view::npos || tab == 0) {
            throw Error(ErrorCode::MalformedRecord,
                        "prediction line " + std::to_string(line_no) + ": expected id<TAB>labels");
        }
        auto field = line.substr(tab + 1);
        field = field.substr(0, field.find('\t'));
        auto labels = parse_labels(field);
        if (!labels || labels->empty()) {
            throw Error(ErrorCode::MalformedRecord,
                        "prediction line " + std::to_string(line_no) + ": labels must be a non-empty 0/1 string");
        }
        rows.push_back({std::string(line.substr(0, tab)), std::move(*labels)});
    }
    return rows;
}

MetricsReport cmd_eval(const std::filesystem::path& gold_path, const std::filesystem::path& predictions_path,
                       ParseMode mode)
{
    const auto gold = read_dataset(gold_path, mode);
    const auto rows = parse_predictions(read_text_file(predictions_path));
    std::vector<LabelPair> pairs;
    pairs.reserve(rows.size());
    for (const auto& row : rows) {
        const auto* rec = gold.find(row.id);
        if (rec == nullptr || !rec->gold()) {
            throw Error(ErrorCode::MissingGold, "no gold labels for '" + row.id + "'");
        }
        pairs.push_back({row.id, *rec->gold(), row.labels});
    }
    return evaluate(pairs);
}

void cmd_analyze(const std::filesystem::path& model_path, const std::filesystem::path& input_path, std::ostream& out,
                 const AnalyzeOptions& options)
{
    const auto set = parse_residue_selector(options.selector);
    const auto model = load_model(model_path);
    const auto data = read_dataset(input_path, options.parse_mode);
    const auto predictions = predict_all(data, model, options.threads);
    std::vector<LabeledSequence> items;
    std::size_t r = 0;
    for (const auto& rec : data) {
        items.push_back({rec.id(), rec.sequence(), predictions[r++].labels});
    }
    if (options.mode == AnalysisMode::Central) {
        write_composition_tsv(out, central_composition(items, options.half_width));
    } else {
        write_profile_tsv(out, positional_profile(items, set, options.radius));
    }
}

} // namespace tmcrf
