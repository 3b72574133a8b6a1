#include "tmcrf/experiment.hpp"

#include "tmcrf/errors.hpp"
#include "tmcrf/model.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace tmcrf {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value)
{
    throw Error(ErrorCode::InvalidConfig, "bad value '" + std::string(value) + "' for '" + std::string(key) + "'");
}

double parse_real(std::string_view key, std::string_view value)
{
    if (value == "inf") {
        return std::numeric_limits<double>::infinity();
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        bad_value(key, value);
    }
    return v;
}

int parse_int(std::string_view key, std::string_view value)
{
    int v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        bad_value(key, value);
    }
    return v;
}

} // namespace

int parse_preset_name(std::string_view name)
{
    if (name.size() == 4 && name.starts_with("exp") && name[3] >= '1' && name[3] <= '8') {
        return name[3] - '0';
    }
    throw Error(ErrorCode::InvalidConfig, "unknown preset '" + std::string(name) + "' (expected exp1..exp8)");
}

void set_experiment_option(ExperimentConfig& config, std::string_view key, std::string_view value)
{
    key = trim(key);
    value = trim(value);
    if (key == "preset") {
        const auto topology = config.features.topology;
        config.features = FeatureConfig::preset(parse_preset_name(value));
        config.features.topology = topology;
    } else if (key == "train.sigma2") {
        config.train.sigma2 = parse_real(key, value);
    } else if (key == "train.epsilon") {
        config.train.epsilon = parse_real(key, value);
    } else if (key == "train.max_iters") {
        config.train.max_iters = parse_int(key, value);
    } else if (key == "train.lbfgs_history") {
        config.train.lbfgs_history = parse_int(key, value);
    } else if (key == "data.train") {
        config.train_path = value;
    } else if (key == "data.test") {
        config.test_path = value;
    } else if (key == "data.exclude_prefix") {
        config.exclude_prefix = value;
    } else if (!set_feature_option(config.features, key, value)) {
        throw Error(ErrorCode::InvalidConfig, "unknown configuration key '" + std::string(key) + "'");
    }
}

void apply_experiment_text(ExperimentConfig& config, std::string_view text)
{
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        auto line = trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        try {
            set_experiment_option(config, line.substr(0, eq), line.substr(eq + 1));
        } catch (const Error& e) {
            throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.detail());
        }
    }
    config.train.validate();
}

ExperimentConfig parse_experiment_config(std::string_view text)
{
    ExperimentConfig config;
    apply_experiment_text(config, text);
    return config;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path)
{
    return parse_experiment_config(read_text_file(path));
}

std::string dump_experiment_config(const ExperimentConfig& config)
{
    std::ostringstream out;
    out << dump_feature_config(config.features);
    out << "train.sigma2 = " << (std::isinf(config.train.sigma2) ? "inf" : format_double(config.train.sigma2))
        << '\n'
        << "train.epsilon = " << format_double(config.train.epsilon) << '\n'
        << "train.max_iters = " << config.train.max_iters << '\n'
        << "train.lbfgs_history = " << config.train.lbfgs_history << '\n';
    if (!config.train_path.empty()) {
        out << "data.train = " << config.train_path << '\n';
    }
    if (!config.test_path.empty()) {
        out << "data.test = " << config.test_path << '\n';
    }
    if (!config.exclude_prefix.empty()) {
        out << "data.exclude_prefix = " << config.exclude_prefix << '\n';
    }
    return out.str();
}

} // namespace tmcrf
