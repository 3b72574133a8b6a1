#pragma once

// Random small CRFs for property tests: per-state emission weights over a
// small observation alphabet, transition weights, and a random admissibility
// mask, turned into a trellis for a random observation sequence.

#include "tmcrf/chain.hpp"

#include <random>

namespace randmodel {

struct Options {
    int min_states = 2;
    int max_states = 6;
    int max_length = 8;
    double weight = 2.0;
    // Draw weights from a coarse grid so that equal path scores occur.
    bool quantized = false;
    // Probability that a transition (or a start/stop state) is forbidden.
    double forbid = 0.0;
};

inline tmcrf::Trellis<double> random_trellis(std::mt19937_64& rng, const Options& opt)
{
    std::uniform_int_distribution<int> states_d(opt.min_states, opt.max_states);
    std::uniform_int_distribution<int> length_d(1, opt.max_length);
    std::uniform_real_distribution<double> w(-opt.weight, opt.weight);
    std::uniform_int_distribution<int> grid(-4, 4);
    std::bernoulli_distribution forbid(opt.forbid);
    auto draw = [&] { return opt.quantized ? 0.5 * grid(rng) : w(rng); };

    const int L = states_d(rng);
    const int n = length_d(rng);
    const int symbols = 3;
    Eigen::MatrixXd emit(L, symbols);
    Eigen::MatrixXd trans(L, L);
    Eigen::VectorXd init(L);
    for (int s = 0; s < L; ++s) {
        init(s) = forbid(rng) ? tmcrf::kNegInf<double> : draw();
        for (int k = 0; k < symbols; ++k) {
            emit(s, k) = draw();
        }
        for (int p = 0; p < L; ++p) {
            trans(p, s) = forbid(rng) ? tmcrf::kNegInf<double> : draw();
        }
    }
    std::uniform_int_distribution<int> sym(0, symbols - 1);
    auto t = tmcrf::Trellis<double>::zeros(static_cast<std::size_t>(n), L);
    t.start = init + emit.col(sym(rng));
    for (int i = 1; i < n; ++i) {
        t.edge(static_cast<std::size_t>(i)) = trans.rowwise() + emit.col(sym(rng)).transpose();
    }
    for (int s = 0; s < L; ++s) {
        t.stop(s) = forbid(rng) ? tmcrf::kNegInf<double> : 0.0;
    }
    return t;
}

} // namespace randmodel
