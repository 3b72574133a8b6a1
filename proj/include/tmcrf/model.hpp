#pragma once

#include "tmcrf/chain.hpp"
#include "tmcrf/feature_index.hpp"
#include "tmcrf/features.hpp"
#include "tmcrf/topology.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <iosfwd>
#include <span>

namespace tmcrf {

/// Weights plus everything needed to recompute the features they belong to.
struct CrfModel {
    Eigen::VectorXd lambda;
    FeatureIndex index;
    StateTopology topology = StateTopology::binary();
    FeatureConfig config;
};

/// Throws NumericalFailure if lambda is not a finite vector of length K.
void check_model(const CrfModel& model);

/// Fills `out` with the potentials of a compiled sequence. Buffers in `out`
/// are reused when their shapes already match.
void build_trellis(const CompiledSequence& seq, const FeatureIndex& index, const StateTopology& topo,
                   const Eigen::VectorXd& lambda, Trellis<double>& out);

[[nodiscard]] CompiledSequence compile_record(const ProteinRecord& record, const CrfModel& model);
[[nodiscard]] Trellis<double> build_trellis(const ProteinRecord& record, const CrfModel& model);

/// log p(path | x). Throws InfeasiblePath for an inadmissible path.
[[nodiscard]] double sequence_log_prob(const ProteinRecord& record, std::span<const StateId> path,
                                       const CrfModel& model);

struct Decoding {
    StatePath states;
    Labels labels;
    double score;
};

[[nodiscard]] Decoding decode(const ProteinRecord& record, const CrfModel& model);

/// P(helix) per residue, summed over states that project to helix.
[[nodiscard]] std::vector<double> helix_marginals(const ProteinRecord& record, const CrfModel& model);

inline constexpr int kModelFormatVersion = 1;

void write_model(std::ostream& out, const CrfModel& model);
[[nodiscard]] CrfModel read_model(std::istream& in);
void save_model(const std::filesystem::path& path, const CrfModel& model);
[[nodiscard]] CrfModel load_model(const std::filesystem::path& path);

[[nodiscard]] std::string format_double(double v);

} // namespace tmcrf
