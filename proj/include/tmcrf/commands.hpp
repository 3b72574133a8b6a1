#pragma once

#include "tmcrf/analysis.hpp"
#include "tmcrf/dataset.hpp"
#include "tmcrf/errors.hpp"
#include "tmcrf/experiment.hpp"
#include "tmcrf/metrics.hpp"
#include "tmcrf/model.hpp"
#include "tmcrf/trainer.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tmcrf {

enum class ExitStatus : int { Success = 0, Usage = 2, Data = 3, Numerical = 4 };

[[nodiscard]] ExitStatus exit_status(ErrorCode code) noexcept;

struct TrainSummary {
    std::size_t records = 0;
    std::size_t excluded = 0;
    std::size_t features = 0;
    TopologyKind topology = TopologyKind::Binary;
    TrainReport report;
};

/// Reads the training set (dropping ids that start with the configured
/// exclusion prefix), trains, and writes the model file.
TrainSummary cmd_train(const ExperimentConfig& config, const std::filesystem::path& train_path,
                       const std::filesystem::path& model_out, ParseMode mode = ParseMode::Strict);

struct Prediction {
    Labels labels;
    std::vector<double> marginals;
};

/// Decodes every record, fanning out over `threads` workers. Results are in
/// input order.
[[nodiscard]] std::vector<Prediction> predict_all(const Dataset& data, const CrfModel& model, int threads = 1,
                                                  bool with_marginals = false);

struct PredictOptions {
    bool marginals = false;
    int threads = 1;
    ParseMode mode = ParseMode::Strict;
    /// When set, the model must have been trained with this configuration.
    std::optional<FeatureConfig> expected_config;
};

/// `id<TAB>labels`, plus `<TAB>p1,p2,...` helix probabilities with marginals.
void cmd_predict(const std::filesystem::path& model_path, const std::filesystem::path& input_path, std::ostream& out,
                 const PredictOptions& options = {});

struct PredictionRow {
    std::string id;
    Labels labels;
};

/// Reads `cmd_predict` output; trailing columns are ignored.
[[nodiscard]] std::vector<PredictionRow> parse_predictions(std::string_view text);

/// Scores predictions against the gold dataset. Throws MissingGold for a
/// prediction whose id is absent from (or unlabeled in) the gold set.
[[nodiscard]] MetricsReport cmd_eval(const std::filesystem::path& gold_path,
                                     const std::filesystem::path& predictions_path,
                                     ParseMode mode = ParseMode::Strict);

enum class AnalysisMode { Central, Profile };

struct AnalyzeOptions {
    AnalysisMode mode = AnalysisMode::Profile;
    std::string selector = "hydrophobic";
    int radius = 25;
    std::size_t half_width = 4;
    int threads = 1;
    ParseMode parse_mode = ParseMode::Strict;
};

void cmd_analyze(const std::filesystem::path& model_path, const std::filesystem::path& input_path, std::ostream& out,
                 const AnalyzeOptions& options = {});

} // namespace tmcrf
