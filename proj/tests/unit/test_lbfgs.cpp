#include "tmcrf/lbfgs.hpp"

#include <Eigen/Cholesky>

#include <doctest.h>

#include <cmath>
#include <random>

using namespace tmcrf;

namespace {

double rosenbrock(const Eigen::VectorXd& x, Eigen::VectorXd& g)
{
    double f = 0.0;
    g.setZero();
    for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i + 1] - x[i] * x[i];
        const double b = 1.0 - x[i];
        f += 100.0 * a * a + b * b;
        g[i] += -400.0 * x[i] * a - 2.0 * b;
        g[i + 1] += 200.0 * a;
    }
    return f;
}

bool non_increasing(const std::vector<double>& v)
{
    for (std::size_t k = 1; k < v.size(); ++k) {
        if (v[k] > v[k - 1]) {
            return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("Rosenbrock")
{
    Eigen::VectorXd x0(6);
    x0 << -1.2, 1.0, -1.2, 1.0, -1.2, 1.0;
    LbfgsOptions opt;
    opt.gradient_tolerance = 1e-8;
    opt.max_iterations = 1000;
    const auto r = lbfgs_minimize(rosenbrock, x0, opt);
    CHECK(r.status == LbfgsStatus::Converged);
    CHECK((r.x.array() - 1.0).abs().maxCoeff() < 1e-6);
    CHECK(non_increasing(r.trace));
    CHECK(r.trace.size() == static_cast<std::size_t>(r.iterations) + 1);
    CHECK(r.gradient_norms.size() == r.trace.size());
}

TEST_CASE("ill-conditioned quadratics")
{
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 20;
        Eigen::MatrixXd q = Eigen::MatrixXd::NullaryExpr(n, n, [&] { return u(rng); });
        Eigen::VectorXd d(n);
        for (int i = 0; i < n; ++i) {
            d[i] = std::pow(10.0, 4.0 * i / (n - 1));
        }
        const Eigen::MatrixXd a = q.transpose() * d.asDiagonal() * q + Eigen::MatrixXd::Identity(n, n);
        const Eigen::VectorXd b = Eigen::VectorXd::NullaryExpr(n, [&] { return u(rng); });
        const Eigen::VectorXd exact = a.ldlt().solve(b);
        // Centered form: rounding in f shrinks with the distance to the optimum.
        auto f = [&](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
            const Eigen::VectorXd e = x - exact;
            g = a * e;
            return 0.5 * e.dot(g);
        };
        LbfgsOptions opt;
        opt.gradient_tolerance = 1e-7;
        opt.max_iterations = 5000;
        const auto r = lbfgs_minimize(f, Eigen::VectorXd::Zero(n), opt);
        CHECK(r.status == LbfgsStatus::Converged);
        CHECK((r.x - exact).cwiseAbs().maxCoeff() < 1e-5);
        CHECK(non_increasing(r.trace));
    }
}

TEST_CASE("an unreachable tolerance ends in a reported stall")
{
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int n = 20;
    Eigen::MatrixXd q = Eigen::MatrixXd::NullaryExpr(n, n, [&] { return u(rng); });
    const Eigen::MatrixXd a = q.transpose() * Eigen::VectorXd::LinSpaced(n, 1.0, 1e4).asDiagonal() * q;
    const Eigen::VectorXd b = Eigen::VectorXd::NullaryExpr(n, [&] { return u(rng); });
    auto f = [&](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        g = a * x - b;
        return 0.5 * x.dot(a * x) - b.dot(x);
    };
    LbfgsOptions opt;
    opt.gradient_tolerance = 1e-14;
    opt.max_iterations = 100000;
    const auto r = lbfgs_minimize(f, Eigen::VectorXd::Zero(n), opt);
    CHECK(r.status == LbfgsStatus::LineSearchFailed);
    CHECK(r.iterations < 100000);
    CHECK(non_increasing(r.trace));
}

TEST_CASE("already optimal start")
{
    auto f = [](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        g = x;
        return 0.5 * x.squaredNorm();
    };
    const auto r = lbfgs_minimize(f, Eigen::VectorXd::Zero(3));
    CHECK(r.status == LbfgsStatus::Converged);
    CHECK(r.iterations == 0);
}

TEST_CASE("iteration cap")
{
    Eigen::VectorXd x0(2);
    x0 << -1.2, 1.0;
    LbfgsOptions opt;
    opt.max_iterations = 3;
    opt.gradient_tolerance = 1e-12;
    const auto r = lbfgs_minimize(rosenbrock, x0, opt);
    CHECK(r.status == LbfgsStatus::MaxIterations);
    CHECK(r.iterations == 3);
}

TEST_CASE("line search backs off from non-finite regions")
{
    // f = -log(1 - x^2) style barrier: infinite outside (-1, 1).
    auto f = [](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        const double v = x[0];
        if (std::abs(v) >= 1.0) {
            g[0] = 0.0;
            return HUGE_VAL;
        }
        g[0] = 2.0 * v / (1.0 - v * v) + 5.0;
        return -std::log(1.0 - v * v) + 5.0 * v;
    };
    Eigen::VectorXd x0(1);
    x0 << 0.0;
    LbfgsOptions opt;
    opt.gradient_tolerance = 1e-9;
    const auto r = lbfgs_minimize(f, x0, opt);
    CHECK(r.status == LbfgsStatus::Converged);
    Eigen::VectorXd g(1);
    CHECK(std::isfinite(f(r.x, g)));
    CHECK(std::abs(g[0]) < 1e-8);
    CHECK(non_increasing(r.trace));
}
