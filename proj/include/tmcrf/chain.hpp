#pragma once

#include "tmcrf/errors.hpp"
#include "tmcrf/topology.hpp"

#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace tmcrf {

/// Edge log-potentials of one sequence.
///
/// Position 0 has no predecessor: `start(s)` holds its score (and -inf for
/// states that may not begin a sequence). For i >= 1, `edge(i)(p, s)` is the
/// score of entering state s at position i from state p, -inf where the
/// transition is not admissible. `stop(s)` is 0 for states that may end a
/// sequence and -inf otherwise.
template <typename Scalar>
struct Trellis {
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    Vector start;
    std::vector<Matrix> log_psi; // log_psi[i - 1] == edge(i)
    Vector stop;

    [[nodiscard]] std::size_t length() const noexcept { return log_psi.size() + 1; }
    [[nodiscard]] Eigen::Index states() const noexcept { return start.size(); }
    [[nodiscard]] const Matrix& edge(std::size_t i) const { return log_psi[i - 1]; }
    [[nodiscard]] Matrix& edge(std::size_t i) { return log_psi[i - 1]; }

    [[nodiscard]] static Trellis zeros(std::size_t length, Eigen::Index states)
    {
        Trellis t;
        t.start = Vector::Zero(states);
        t.stop = Vector::Zero(states);
        t.log_psi.assign(length - 1, Matrix::Zero(states, states));
        return t;
    }
};

template <typename Scalar>
inline constexpr Scalar kNegInf = -std::numeric_limits<Scalar>::infinity();

/// log(sum(exp(x))) without overflow; -inf for an all -inf input.
template <typename Derived>
[[nodiscard]] typename Derived::Scalar log_sum_exp(const Eigen::DenseBase<Derived>& x)
{
    using Scalar = typename Derived::Scalar;
    const Scalar m = x.maxCoeff();
    if (m == kNegInf<Scalar>) {
        return m;
    }
    return m + std::log((x.derived().array() - m).exp().sum());
}

template <typename Scalar>
struct ForwardBackwardResult {
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    Matrix log_alpha; // states x positions
    Matrix log_beta;  // states x positions
    Scalar log_z;
};

/// Log-space forward and backward recursions. Throws InfeasibleTopology when
/// no admissible path exists.
template <typename Scalar>
[[nodiscard]] ForwardBackwardResult<Scalar> forward_backward(const Trellis<Scalar>& t)
{
    using Matrix = typename ForwardBackwardResult<Scalar>::Matrix;
    const auto n = static_cast<Eigen::Index>(t.length());
    const auto L = t.states();
    ForwardBackwardResult<Scalar> fb{Matrix(L, n), Matrix(L, n), Scalar(0)};
    auto& alpha = fb.log_alpha;
    auto& beta = fb.log_beta;

    alpha.col(0) = t.start;
    for (Eigen::Index i = 1; i < n; ++i) {
        const auto& psi = t.edge(static_cast<std::size_t>(i));
        for (Eigen::Index s = 0; s < L; ++s) {
            alpha(s, i) = log_sum_exp(alpha.col(i - 1) + psi.col(s));
        }
    }
    fb.log_z = log_sum_exp(alpha.col(n - 1) + t.stop);
    if (!(fb.log_z > kNegInf<Scalar>)) {
        throw Error(ErrorCode::InfeasibleTopology, "no admissible label path");
    }

    beta.col(n - 1) = t.stop;
    for (Eigen::Index i = n - 2; i >= 0; --i) {
        const auto& psi = t.edge(static_cast<std::size_t>(i + 1));
        for (Eigen::Index p = 0; p < L; ++p) {
            beta(p, i) = log_sum_exp(psi.row(p).transpose() + beta.col(i + 1));
        }
    }
    return fb;
}

template <typename Scalar>
struct Marginals {
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    Matrix node;              // P(y_i = s | x), states x positions
    std::vector<Matrix> edge; // edge[i - 1](p, s) = P(y_{i-1} = p, y_i = s | x)
};

template <typename Scalar>
[[nodiscard]] Marginals<Scalar> marginals(const ForwardBackwardResult<Scalar>& fb, const Trellis<Scalar>& t)
{
    Marginals<Scalar> m;
    m.node = ((fb.log_alpha + fb.log_beta).array() - fb.log_z).exp().matrix();
    m.edge.reserve(t.log_psi.size());
    for (std::size_t i = 1; i < t.length(); ++i) {
        const auto col = static_cast<Eigen::Index>(i);
        m.edge.push_back(((t.edge(i).colwise() + fb.log_alpha.col(col - 1)).rowwise()
                          + fb.log_beta.col(col).transpose())
                             .array()
                             .unaryExpr([&](Scalar v) { return std::exp(v - fb.log_z); })
                             .matrix());
    }
    return m;
}

/// Sum of potentials along `path`, accumulated left to right; -inf if any
/// step is inadmissible.
template <typename Scalar>
[[nodiscard]] Scalar path_score(const Trellis<Scalar>& t, std::span<const StateId> path)
{
    Scalar score = t.start(path[0]);
    for (std::size_t i = 1; i < path.size(); ++i) {
        score += t.edge(i)(path[i - 1], path[i]);
    }
    return score + t.stop(path.back());
}

template <typename Scalar>
struct ViterbiResult {
    StatePath path;
    Scalar score;
};

/// Max-sum decoding. Among equal-scoring predecessors (and final states) the
/// lowest-numbered state wins, so of several best paths the one returned is
/// the smallest when compared from the last position backwards.
template <typename Scalar>
[[nodiscard]] ViterbiResult<Scalar> viterbi(const Trellis<Scalar>& t)
{
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    const auto n = t.length();
    const auto L = t.states();
    Matrix delta(L, static_cast<Eigen::Index>(n));
    std::vector<StateId> back(n * static_cast<std::size_t>(L), 0);

    delta.col(0) = t.start;
    for (std::size_t i = 1; i < n; ++i) {
        const auto col = static_cast<Eigen::Index>(i);
        const auto& psi = t.edge(i);
        for (Eigen::Index s = 0; s < L; ++s) {
            Scalar best = kNegInf<Scalar>;
            StateId arg = 0;
            for (Eigen::Index p = 0; p < L; ++p) {
                const Scalar v = delta(p, col - 1) + psi(p, s);
                if (v > best) {
                    best = v;
                    arg = static_cast<StateId>(p);
                }
            }
            delta(s, col) = best;
            back[i * static_cast<std::size_t>(L) + static_cast<std::size_t>(s)] = arg;
        }
    }

    Scalar best = kNegInf<Scalar>;
    StateId last = 0;
    for (Eigen::Index s = 0; s < L; ++s) {
        const Scalar v = delta(s, static_cast<Eigen::Index>(n - 1)) + t.stop(s);
        if (v > best) {
            best = v;
            last = static_cast<StateId>(s);
        }
    }
    if (!(best > kNegInf<Scalar>)) {
        throw Error(ErrorCode::InfeasibleTopology, "no admissible label path");
    }

    ViterbiResult<Scalar> out{StatePath(n), best};
    out.path[n - 1] = last;
    for (std::size_t i = n - 1; i > 0; --i) {
        out.path[i - 1] = back[i * static_cast<std::size_t>(L) + out.path[i]];
    }
    return out;
}

} // namespace tmcrf
