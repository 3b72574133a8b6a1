#include "tmcrf/trainer.hpp"

#include "tmcrf/chain.hpp"
#include "tmcrf/errors.hpp"
#include "tmcrf/lbfgs.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <ostream>
#include <thread>

namespace tmcrf {

namespace {

constexpr std::array kUnigramSpaces = {ContextSpace::State, ContextSpace::Binary, ContextSpace::ShortLoop,
                                       ContextSpace::Family};

int gold_context(const ContextMap& ctx, ContextSpace space, const StatePath& path, std::size_t i)
{
    if (!is_transition_space(space)) {
        return ctx.of_state(space, path[i]);
    }
    return i == 0 ? -1 : ctx.of_transition(space, path[i - 1], path[i]);
}

} // namespace

void TrainConfig::validate() const
{
    if (!(sigma2 > 0.0)) {
        throw Error(ErrorCode::InvalidConfig, "sigma2 must be positive");
    }
    if (!(epsilon > 0.0)) {
        throw Error(ErrorCode::InvalidConfig, "epsilon must be positive");
    }
    if (max_iters < 1 || lbfgs_history < 1 || threads < 1) {
        throw Error(ErrorCode::InvalidConfig, "max_iters, lbfgs_history and threads must be at least 1");
    }
}

void write_trace(std::ostream& out, const TrainReport& report)
{
    out << "iteration\tobjective\tgradient_norm\n";
    for (std::size_t k = 0; k < report.objective_trace.size(); ++k) {
        out << k << '\t' << format_double(report.objective_trace[k]) << '\t'
            << format_double(report.gradient_trace[k]) << '\n';
    }
}

struct TrainingProblem::Workspace {
    Trellis<double> trellis;
    std::array<std::vector<double>, kContextSpaceCount> ctx_marginal;
};

TrainingProblem::TrainingProblem(const Dataset& train, const FeatureIndex& index, const StateTopology& topo,
                                 const FeatureConfig& config)
    : index_(&index)
    , topo_(&topo)
    , empirical_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(index.size())))
{
    if (train.empty()) {
        throw Error(ErrorCode::EmptyTraining, "training set is empty");
    }
    const auto& ctx = index.contexts();
    items_.reserve(train.size());
    for (const auto& rec : train) {
        if (!rec.gold()) {
            throw Error(ErrorCode::MissingGold, "training record '" + rec.id() + "' has no labels");
        }
        Item item{rec.id(), compile(enumerate_predicates(rec, config), index), derive_states(*rec.gold(), topo)};
        for (std::size_t i = 0; i < item.seq.length(); ++i) {
            for (auto pred : item.seq.at(i)) {
                const int c = gold_context(ctx, index.space(pred), item.gold, i);
                if (c < 0) {
                    continue;
                }
                for (const auto& cf : index.features_of(pred)) {
                    if (cf.context == c) {
                        empirical_[cf.feature] += 1.0;
                        break;
                    }
                }
            }
        }
        items_.push_back(std::move(item));
    }
}

double TrainingProblem::accumulate(const Item& item, const Eigen::VectorXd& lambda, Eigen::VectorXd& expect,
                                   Workspace& ws) const
{
    const auto& index = *index_;
    const auto& topo = *topo_;
    const auto& ctx = index.contexts();
    const auto L = topo.size();

    build_trellis(item.seq, index, topo, lambda, ws.trellis);
    const auto& t = ws.trellis;
    const auto fb = forward_backward(t);
    const double gold = path_score(t, std::span<const StateId>(item.gold));
    if (!std::isfinite(fb.log_z) || !std::isfinite(gold)) {
        throw Error(ErrorCode::NumericalFailure, "non-finite likelihood for record '" + item.id + "'");
    }

    for (std::size_t sp = 0; sp < kContextSpaceCount; ++sp) {
        ws.ctx_marginal[sp].resize(ctx.count(static_cast<ContextSpace>(sp)));
    }
    for (std::size_t i = 0; i < item.seq.length(); ++i) {
        for (auto& m : ws.ctx_marginal) {
            std::fill(m.begin(), m.end(), 0.0);
        }
        const auto col = static_cast<Eigen::Index>(i);
        for (std::size_t s = 0; s < L; ++s) {
            const double p = std::exp(fb.log_alpha(static_cast<Eigen::Index>(s), col)
                                      + fb.log_beta(static_cast<Eigen::Index>(s), col) - fb.log_z);
            for (auto space : kUnigramSpaces) {
                const int c = ctx.of_state(space, static_cast<StateId>(s));
                if (c >= 0) {
                    ws.ctx_marginal[static_cast<std::size_t>(space)][static_cast<std::size_t>(c)] += p;
                }
            }
        }
        if (i > 0) {
            const auto& psi = t.edge(i);
            auto& pair_m = ws.ctx_marginal[static_cast<std::size_t>(ContextSpace::StatePair)];
            auto& change_m = ws.ctx_marginal[static_cast<std::size_t>(ContextSpace::BinaryChange)];
            for (std::size_t s = 0; s < L; ++s) {
                const double right = fb.log_beta(static_cast<Eigen::Index>(s), col) - fb.log_z;
                for (std::size_t p = 0; p < L; ++p) {
                    const int pc = ctx.of_transition(ContextSpace::StatePair, static_cast<StateId>(p),
                                                     static_cast<StateId>(s));
                    if (pc < 0) {
                        continue;
                    }
                    const double q = std::exp(fb.log_alpha(static_cast<Eigen::Index>(p), col - 1)
                                              + psi(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(s))
                                              + right);
                    pair_m[static_cast<std::size_t>(pc)] += q;
                    const int cc = ctx.of_transition(ContextSpace::BinaryChange, static_cast<StateId>(p),
                                                     static_cast<StateId>(s));
                    if (cc >= 0) {
                        change_m[static_cast<std::size_t>(cc)] += q;
                    }
                }
            }
        }
        for (auto pred : item.seq.at(i)) {
            const auto& m = ws.ctx_marginal[static_cast<std::size_t>(index.space(pred))];
            for (const auto& cf : index.features_of(pred)) {
                expect[cf.feature] += m[static_cast<std::size_t>(cf.context)];
            }
        }
    }
    return gold - fb.log_z;
}

double TrainingProblem::evaluate(const Eigen::VectorXd& lambda, Eigen::VectorXd& grad, double sigma2, int threads,
                                 bool deterministic) const
{
    const auto K = static_cast<Eigen::Index>(dimension());
    const auto n = items_.size();
    const auto workers = static_cast<std::size_t>(std::clamp<int>(threads, 1, static_cast<int>(std::max<std::size_t>(n, 1))));

    std::vector<Eigen::VectorXd> expect(workers, Eigen::VectorXd::Zero(K));
    std::vector<double> loglik(workers, 0.0);
    std::vector<std::exception_ptr> errors(workers);
    std::atomic<std::size_t> next{0};

    auto work = [&](std::size_t w) {
        try {
            Workspace ws;
            if (deterministic) {
                const auto first = n * w / workers;
                const auto last = n * (w + 1) / workers;
                for (auto r = first; r < last; ++r) {
                    loglik[w] += accumulate(items_[r], lambda, expect[w], ws);
                }
            } else {
                for (auto r = next.fetch_add(1); r < n; r = next.fetch_add(1)) {
                    loglik[w] += accumulate(items_[r], lambda, expect[w], ws);
                }
            }
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };

    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(work, w);
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }

    double objective = 0.0;
    grad = empirical_;
    for (std::size_t w = 0; w < workers; ++w) {
        objective += loglik[w];
        grad -= expect[w];
    }
    if (std::isfinite(sigma2)) {
        objective -= lambda.squaredNorm() / (2.0 * sigma2);
        grad -= lambda / sigma2;
    }
    if (!std::isfinite(objective)) {
        throw Error(ErrorCode::NumericalFailure, "objective is not finite");
    }
    return objective;
}

Eigen::VectorXd TrainingProblem::model_expectations(const Eigen::VectorXd& lambda) const
{
    Eigen::VectorXd expect = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dimension()));
    Workspace ws;
    for (const auto& item : items_) {
        (void)accumulate(item, lambda, expect, ws);
    }
    return expect;
}

Eigen::VectorXd empirical_expectations(const Dataset& train, const FeatureIndex& index, const StateTopology& topo,
                                       const FeatureConfig& config)
{
    return TrainingProblem(train, index, topo, config).empirical();
}

std::pair<CrfModel, TrainReport> train(const Dataset& data, const FeatureConfig& config, const TrainConfig& tc)
{
    tc.validate();
    if (data.empty()) {
        throw Error(ErrorCode::EmptyTraining, "training set is empty");
    }
    CrfModel model;
    model.config = config;
    model.topology = StateTopology::of_kind(config.resolve_topology());
    model.index = build_index(data, config, model.topology);

    const TrainingProblem problem(data, model.index, model.topology, config);
    const Objective negated = [&](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        const double v = problem.evaluate(x, g, tc.sigma2, tc.threads, tc.deterministic);
        g = -g;
        return -v;
    };
    LbfgsOptions opt;
    opt.history = tc.lbfgs_history;
    opt.max_iterations = tc.max_iters;
    opt.gradient_tolerance = tc.epsilon;
    auto result = lbfgs_minimize(negated, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(problem.dimension())), opt);

    model.lambda = std::move(result.x);
    TrainReport report;
    report.iterations = result.iterations;
    report.objective = -result.value;
    report.gradient_norm = result.gradient_norms.back();
    report.converged = result.status == LbfgsStatus::Converged;
    report.status = result.status == LbfgsStatus::Converged       ? "converged"
                    : result.status == LbfgsStatus::MaxIterations ? "max-iterations"
                                                                  : "line-search-stalled";
    for (double v : result.trace) {
        report.objective_trace.push_back(-v);
    }
    report.gradient_trace = std::move(result.gradient_norms);
    check_model(model);
    return {std::move(model), std::move(report)};
}

} // namespace tmcrf
