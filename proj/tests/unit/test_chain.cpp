#include "tmcrf/chain.hpp"

#include "support/oracle.hpp"
#include "support/random_models.hpp"

#include <doctest.h>

#include <random>

using namespace tmcrf;

namespace {

bool feasible(const oracle::Enumeration& e) { return e.log_z > -INFINITY; }

} // namespace

TEST_CASE("log_sum_exp")
{
    Eigen::Vector3d x(1000.0, 1000.0, -INFINITY);
    CHECK(log_sum_exp(x) == doctest::Approx(1000.0 + std::log(2.0)));
    Eigen::Vector2d none(-INFINITY, -INFINITY);
    CHECK(log_sum_exp(none) == -INFINITY);
    Eigen::Vector2d small(-1000.0, -1000.0);
    CHECK(log_sum_exp(small) == doctest::Approx(-1000.0 + std::log(2.0)));
}

TEST_CASE("forward-backward and marginals match enumeration")
{
    std::mt19937_64 rng(17);
    for (double forbid : {0.0, 0.25}) {
        randmodel::Options opt;
        opt.forbid = forbid;
        for (int trial = 0; trial < 150; ++trial) {
            const auto t = randmodel::random_trellis(rng, opt);
            const auto e = oracle::enumerate(t);
            if (!feasible(e)) {
                CHECK_THROWS_AS((void)forward_backward(t), Error);
                continue;
            }
            const auto fb = forward_backward(t);
            CHECK(std::abs(fb.log_z - e.log_z) < 1e-10);
            const auto m = marginals(fb, t);
            CHECK((m.node - e.node).cwiseAbs().maxCoeff() < 1e-10);
            for (std::size_t i = 0; i < e.edge.size(); ++i) {
                CHECK((m.edge[i] - e.edge[i]).cwiseAbs().maxCoeff() < 1e-10);
            }
            for (Eigen::Index i = 0; i < m.node.cols(); ++i) {
                CHECK(m.node.col(i).sum() == doctest::Approx(1.0).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("Viterbi matches enumeration, including ties")
{
    std::mt19937_64 rng(23);
    for (bool quantized : {false, true}) {
        randmodel::Options opt;
        opt.quantized = quantized;
        opt.forbid = 0.15;
        for (int trial = 0; trial < 200; ++trial) {
            const auto t = randmodel::random_trellis(rng, opt);
            const auto e = oracle::enumerate(t);
            if (!feasible(e)) {
                CHECK_THROWS_AS((void)viterbi(t), Error);
                continue;
            }
            const auto v = viterbi(t);
            CHECK(v.score == e.best_score);
            CHECK(v.path == e.best_path);
            CHECK(path_score(t, std::span<const StateId>(v.path)) == v.score);
        }
    }
}

TEST_CASE("all-zero potentials: uniform distribution, lowest path")
{
    const auto t = Trellis<double>::zeros(4, 3);
    const auto fb = forward_backward(t);
    CHECK(fb.log_z == doctest::Approx(4 * std::log(3.0)));
    const auto v = viterbi(t);
    CHECK(v.path == StatePath{0, 0, 0, 0});
}

TEST_CASE("large potentials stay finite")
{
    auto t = Trellis<double>::zeros(50, 4);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> w(-400.0, 400.0);
    t.start = Eigen::Vector4d(w(rng), w(rng), w(rng), w(rng));
    for (auto& m : t.log_psi) {
        m = m.unaryExpr([&](double) { return w(rng); });
    }
    const auto fb = forward_backward(t);
    CHECK(std::isfinite(fb.log_z));
    const auto m = marginals(fb, t);
    CHECK(m.node.allFinite());
    CHECK(fb.log_z >= viterbi(t).score);
}

TEST_CASE("single precision instantiation")
{
    Trellis<float> t = Trellis<float>::zeros(3, 2);
    t.start << 1.0f, 0.0f;
    const auto fb = forward_backward(t);
    CHECK(fb.log_z == doctest::Approx(std::log(std::exp(1.0) + 1.0) + 2 * std::log(2.0)).epsilon(1e-5));
    CHECK(viterbi(t).path == StatePath{0, 0, 0});
}
