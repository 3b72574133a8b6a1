#include "tmcrf/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>

namespace tmcrf {

namespace {

struct Probe {
    double alpha;
    double value;
    double slope; // directional derivative
};

struct Step {
    Probe probe;
    Eigen::VectorXd x;
    Eigen::VectorXd grad;
};

class LineSearch {
public:
    LineSearch(const Objective& f, const LbfgsOptions& opt, const Eigen::VectorXd& x0, double f0, double slope0,
               const Eigen::VectorXd& dir, int& evaluations)
        : f_(f), opt_(opt), x0_(x0), f0_(f0), slope0_(slope0), dir_(dir), evals_(evaluations)
    {}

    /// Strong-Wolfe bracketing followed by zoom. Falls back to the best
    /// sufficient-decrease point seen if the budget runs out.
    std::optional<Step> run(double alpha)
    {
        Probe prev{0.0, f0_, slope0_};
        for (int it = 0; it < opt_.max_line_search; ++it) {
            auto cur = eval(alpha);
            if (!armijo(cur.probe) || (it > 0 && cur.probe.value >= prev.value)) {
                return zoom(prev, cur.probe);
            }
            if (std::abs(cur.probe.slope) <= -opt_.c2 * slope0_) {
                wolfe_ = true;
                return cur;
            }
            if (cur.probe.slope >= 0.0) {
                return zoom(cur.probe, prev);
            }
            prev = cur.probe;
            alpha *= 2.0;
        }
        return best_;
    }

    /// False when the returned step only satisfies sufficient decrease.
    [[nodiscard]] bool wolfe() const noexcept { return wolfe_; }

private:
    bool armijo(const Probe& p) const
    {
        return std::isfinite(p.value) && p.value <= f0_ + opt_.c1 * p.alpha * slope0_;
    }

    Step eval(double alpha)
    {
        Step s;
        s.x = x0_ + alpha * dir_;
        s.grad.resize(x0_.size());
        ++evals_;
        double v = f_(s.x, s.grad);
        if (!std::isfinite(v) || !s.grad.allFinite()) {
            v = std::numeric_limits<double>::infinity();
        }
        s.probe = {alpha, v, std::isfinite(v) ? s.grad.dot(dir_) : 0.0};
        if (armijo(s.probe) && (!best_ || s.probe.value < best_->probe.value)) {
            best_ = s;
        }
        return s;
    }

    static double interpolate(const Probe& lo, const Probe& hi)
    {
        const double a = lo.alpha;
        const double b = hi.alpha;
        const double width = b - a;
        double t = 0.5 * (a + b);
        if (std::isfinite(lo.value) && std::isfinite(hi.value)) {
            // minimizer of the cubic through both values and slopes
            const double d1 = lo.slope + hi.slope - 3.0 * (lo.value - hi.value) / (a - b);
            const double disc = d1 * d1 - lo.slope * hi.slope;
            if (disc >= 0.0) {
                const double d2 = std::copysign(std::sqrt(disc), b - a);
                const double denom = hi.slope - lo.slope + 2.0 * d2;
                if (denom != 0.0) {
                    const double c = b - (b - a) * (hi.slope + d2 - d1) / denom;
                    if (std::isfinite(c)) {
                        t = c;
                    }
                }
            }
        }
        const double low = std::min(a, b) + 0.1 * std::abs(width);
        const double high = std::max(a, b) - 0.1 * std::abs(width);
        return std::clamp(t, low, high);
    }

    std::optional<Step> zoom(Probe lo, Probe hi)
    {
        for (int it = 0; it < opt_.max_line_search; ++it) {
            const double alpha = interpolate(lo, hi);
            auto cur = eval(alpha);
            if (!armijo(cur.probe) || cur.probe.value >= lo.value) {
                hi = cur.probe;
            } else {
                if (std::abs(cur.probe.slope) <= -opt_.c2 * slope0_) {
                    wolfe_ = true;
                    return cur;
                }
                if (cur.probe.slope * (hi.alpha - lo.alpha) >= 0.0) {
                    hi = lo;
                }
                lo = cur.probe;
            }
            if (std::abs(hi.alpha - lo.alpha) < 1e-16 * std::max(1.0, std::abs(lo.alpha))) {
                break;
            }
        }
        return best_;
    }

    const Objective& f_;
    const LbfgsOptions& opt_;
    const Eigen::VectorXd& x0_;
    double f0_;
    double slope0_;
    const Eigen::VectorXd& dir_;
    int& evals_;
    std::optional<Step> best_;
    bool wolfe_ = false;
};

struct Correction {
    Eigen::VectorXd s;
    Eigen::VectorXd y;
    double rho;
};

Eigen::VectorXd two_loop(const Eigen::VectorXd& grad, const std::deque<Correction>& memory)
{
    Eigen::VectorXd q = -grad;
    std::vector<double> alphas(memory.size());
    for (std::size_t k = memory.size(); k-- > 0;) {
        alphas[k] = memory[k].rho * memory[k].s.dot(q);
        q -= alphas[k] * memory[k].y;
    }
    if (!memory.empty()) {
        const auto& last = memory.back();
        q *= last.s.dot(last.y) / last.y.squaredNorm();
    }
    for (std::size_t k = 0; k < memory.size(); ++k) {
        const double beta = memory[k].rho * memory[k].y.dot(q);
        q += (alphas[k] - beta) * memory[k].s;
    }
    return q;
}

double inf_norm(const Eigen::VectorXd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

} // namespace

LbfgsResult lbfgs_minimize(const Objective& f, Eigen::VectorXd x0, const LbfgsOptions& options)
{
    LbfgsResult r;
    r.x = std::move(x0);
    r.gradient.resize(r.x.size());
    r.value = f(r.x, r.gradient);
    r.evaluations = 1;
    r.trace.push_back(r.value);
    r.gradient_norms.push_back(inf_norm(r.gradient));

    std::deque<Correction> memory;
    while (true) {
        if (inf_norm(r.gradient) < options.gradient_tolerance) {
            r.status = LbfgsStatus::Converged;
            break;
        }
        if (r.iterations >= options.max_iterations) {
            r.status = LbfgsStatus::MaxIterations;
            break;
        }

        Eigen::VectorXd dir = two_loop(r.gradient, memory);
        double slope = r.gradient.dot(dir);
        if (!(slope < 0.0)) {
            memory.clear();
            dir = -r.gradient;
            slope = r.gradient.dot(dir);
        }
        auto initial_step = [&] { return memory.empty() ? 1.0 / std::max(1.0, dir.norm()) : 1.0; };

        // A fallback step whose decrease is lost in rounding means no further
        // progress is possible along any direction we can construct.
        auto stalled = [&](const LineSearch& ls, const std::optional<Step>& s) {
            return !s || (!ls.wolfe() && r.value - s->probe.value <= 1e-14 * std::max(1.0, std::abs(r.value)));
        };
        LineSearch ls(f, options, r.x, r.value, slope, dir, r.evaluations);
        auto step = ls.run(initial_step());
        bool failed = stalled(ls, step);
        if (failed && !memory.empty()) {
            memory.clear();
            dir = -r.gradient;
            slope = r.gradient.dot(dir);
            LineSearch retry(f, options, r.x, r.value, slope, dir, r.evaluations);
            step = retry.run(initial_step());
            failed = stalled(retry, step);
        }
        if (failed) {
            r.status = LbfgsStatus::LineSearchFailed;
            break;
        }

        Correction c{step->x - r.x, step->grad - r.gradient, 0.0};
        const double sy = c.s.dot(c.y);
        if (sy > 1e-12 * c.y.squaredNorm() && sy > 0.0) {
            c.rho = 1.0 / sy;
            memory.push_back(std::move(c));
            if (static_cast<int>(memory.size()) > options.history) {
                memory.pop_front();
            }
        }
        r.x = std::move(step->x);
        r.gradient = std::move(step->grad);
        r.value = step->probe.value;
        ++r.iterations;
        r.trace.push_back(r.value);
        r.gradient_norms.push_back(inf_norm(r.gradient));
    }
    return r;
}

} // namespace tmcrf
