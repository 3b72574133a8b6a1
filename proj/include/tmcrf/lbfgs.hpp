#pragma once

#include <Eigen/Core>

#include <functional>
#include <vector>

namespace tmcrf {

struct LbfgsOptions {
    int history = 10;
    int max_iterations = 500;
    /// Stop once the gradient infinity-norm falls below this.
    double gradient_tolerance = 1e-4;
    int max_line_search = 40;
    /// Sufficient-decrease and curvature constants of the strong Wolfe test.
    double c1 = 1e-4;
    double c2 = 0.9;
};

enum class LbfgsStatus { Converged, MaxIterations, LineSearchFailed };

struct LbfgsResult {
    Eigen::VectorXd x;
    double value = 0.0;
    Eigen::VectorXd gradient;
    int iterations = 0;
    int evaluations = 0;
    LbfgsStatus status = LbfgsStatus::MaxIterations;
    /// Objective after the start point and after every accepted step.
    std::vector<double> trace;
    std::vector<double> gradient_norms;
};

/// Returns f(x) and writes the gradient into `grad` (already sized).
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

/// Limited-memory BFGS minimization.
[[nodiscard]] LbfgsResult lbfgs_minimize(const Objective& f, Eigen::VectorXd x0, const LbfgsOptions& options = {});

} // namespace tmcrf
