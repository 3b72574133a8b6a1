#pragma once

#include "tmcrf/dataset.hpp"
#include "tmcrf/feature_index.hpp"
#include "tmcrf/model.hpp"

#include <Eigen/Core>

#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace tmcrf {

struct TrainConfig {
    /// Gaussian prior variance; infinity disables the penalty.
    double sigma2 = 10.0;
    /// Gradient infinity-norm at which training stops.
    double epsilon = 1e-4;
    int max_iters = 500;
    int lbfgs_history = 10;
    int threads = 1;
    /// Static record partition and fixed-order reduction, so that equal
    /// inputs give bit-identical weights for a given thread count.
    bool deterministic = true;

    /// Throws InvalidConfig.
    void validate() const;
};

struct TrainReport {
    int iterations = 0;
    double objective = 0.0;
    double gradient_norm = 0.0;
    bool converged = false;
    std::string status;
    std::vector<double> objective_trace;
    std::vector<double> gradient_trace;
};

/// Writes `iteration<TAB>objective<TAB>gradient_norm` rows with a header.
void write_trace(std::ostream& out, const TrainReport& report);

/// Training data compiled against a fixed feature index: the fixtures the
/// objective is evaluated over.
class TrainingProblem {
public:
    TrainingProblem(const Dataset& train, const FeatureIndex& index, const StateTopology& topo,
                    const FeatureConfig& config);

    [[nodiscard]] std::size_t dimension() const noexcept { return index_->size(); }
    /// Feature counts under the gold labeling.
    [[nodiscard]] const Eigen::VectorXd& empirical() const noexcept { return empirical_; }

    /// Penalized conditional log-likelihood of the gold labels; its
    /// gradient goes to `grad` (resized as needed).
    double evaluate(const Eigen::VectorXd& lambda, Eigen::VectorXd& grad, double sigma2, int threads = 1,
                    bool deterministic = true) const;

    /// Model expectation of every feature summed over the records.
    [[nodiscard]] Eigen::VectorXd model_expectations(const Eigen::VectorXd& lambda) const;

private:
    struct Item {
        std::string id;
        CompiledSequence seq;
        StatePath gold;
    };
    struct Workspace;

    double accumulate(const Item& item, const Eigen::VectorXd& lambda, Eigen::VectorXd& expect,
                      Workspace& ws) const;

    const FeatureIndex* index_;
    const StateTopology* topo_;
    std::vector<Item> items_;
    Eigen::VectorXd empirical_;
};

[[nodiscard]] Eigen::VectorXd empirical_expectations(const Dataset& train, const FeatureIndex& index,
                                                     const StateTopology& topo, const FeatureConfig& config);

/// Builds the index, then maximizes the penalized likelihood from zero
/// weights with L-BFGS.
[[nodiscard]] std::pair<CrfModel, TrainReport> train(const Dataset& data, const FeatureConfig& config,
                                                     const TrainConfig& tc);

} // namespace tmcrf
