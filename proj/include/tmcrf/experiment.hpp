#pragma once

#include "tmcrf/features.hpp"
#include "tmcrf/trainer.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace tmcrf {

/// Everything a train/evaluate run needs, read from a flat `key = value`
/// file. Lines starting with '#' are comments; later lines override
/// earlier ones, and `preset = expN` resets the feature groups.
struct ExperimentConfig {
    FeatureConfig features = FeatureConfig::preset(8);
    TrainConfig train;
    std::string train_path;
    std::string test_path;
    std::string exclude_prefix;

    friend bool operator==(const ExperimentConfig& a, const ExperimentConfig& b)
    {
        return a.features == b.features && a.train.sigma2 == b.train.sigma2 && a.train.epsilon == b.train.epsilon
               && a.train.max_iters == b.train.max_iters && a.train.lbfgs_history == b.train.lbfgs_history
               && a.train_path == b.train_path && a.test_path == b.test_path
               && a.exclude_prefix == b.exclude_prefix;
    }
};

/// "exp1".."exp8" -> 1..8; throws InvalidConfig otherwise.
[[nodiscard]] int parse_preset_name(std::string_view name);

/// Applies one setting; throws InvalidConfig for unknown keys or bad values.
void set_experiment_option(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Applies every line of `text` on top of `config`.
void apply_experiment_text(ExperimentConfig& config, std::string_view text);
[[nodiscard]] ExperimentConfig parse_experiment_config(std::string_view text);
[[nodiscard]] ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Round-trips through `parse_experiment_config`. Empty paths are omitted.
[[nodiscard]] std::string dump_experiment_config(const ExperimentConfig& config);

} // namespace tmcrf
