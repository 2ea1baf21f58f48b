#pragma once

// Stochastic convex optimization tasks and the two solvers the reductions
// need: projected subgradient descent for finite losses, and a penalty-
// continuation hard-SVM whose feasibility half is certified exactly.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "redlearn/core.hpp"
#include "redlearn/vec.hpp"

namespace redlearn {

struct ConvexDomain {
    enum class Kind { all_of_rk, ball, box };

    Kind kind = Kind::all_of_rk;
    std::size_t ambient_dim = 0;
    Vec center;    // ball
    double radius = 0.0;
    Vec lo, hi;    // box

    static ConvexDomain all_of_rk(std::size_t k) {
        ConvexDomain d;
        d.kind = Kind::all_of_rk;
        d.ambient_dim = k;
        return d;
    }
    static ConvexDomain ball(Vec center, double radius) {
        if (!(radius > 0.0)) throw std::invalid_argument("ConvexDomain: radius must be > 0");
        ConvexDomain d;
        d.kind = Kind::ball;
        d.ambient_dim = center.size();
        d.center = std::move(center);
        d.radius = radius;
        return d;
    }
    static ConvexDomain box(Vec lo, Vec hi) {
        if (lo.size() != hi.size()) throw std::invalid_argument("ConvexDomain: box lo/hi sizes");
        for (std::size_t i = 0; i < lo.size(); ++i)
            if (lo[i] > hi[i]) throw std::invalid_argument("ConvexDomain: lo > hi componentwise");
        ConvexDomain d;
        d.kind = Kind::box;
        d.ambient_dim = lo.size();
        d.lo = std::move(lo);
        d.hi = std::move(hi);
        return d;
    }

    bool bounded() const { return kind != Kind::all_of_rk; }

    double diameter() const {
        switch (kind) {
            case Kind::ball: return 2.0 * radius;
            case Kind::box: return dist(lo, hi);
            default: return kInfiniteLoss;
        }
    }

    Vec project(Vec x) const {
        switch (kind) {
            case Kind::all_of_rk: return x;
            case Kind::ball: {
                Vec d = sub(x, center);
                const double n = norm(d);
                if (n <= radius) return x;
                return add(center, scaled(d, radius / n));
            }
            case Kind::box:
                for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
                return x;
        }
        return x;
    }

    Vec some_point() const {
        switch (kind) {
            case Kind::ball: return center;
            case Kind::box: {
                Vec m(lo.size());
                for (std::size_t i = 0; i < lo.size(); ++i) m[i] = 0.5 * (lo[i] + hi[i]);
                return m;
            }
            default: return zeros(ambient_dim);
        }
    }
};

// Convex domain plus a family of per-example losses indexed by labeled
// examples.  Tasks built from non-convex losses set convex = false and are
// refused by the subgradient solver.
struct SCOTask {
    ConvexDomain domain;
    std::function<double(const LabeledExample&, const Vec&)> loss;
    std::function<Vec(const LabeledExample&, const Vec&)> subgradient;
    std::function<double(const FiniteDistribution&)> lipschitz_bound;
    bool infinity_valued = false;
    bool convex = true;
    std::string name;
};

inline double expected_task_loss(const SCOTask& task, const FiniteDistribution& dist,
                                 const Vec& w) {
    return expected_loss(dist,
                         [&](const LabeledExample& z) { return task.loss(z, w); });
}

struct SolverReport {
    Vec point;
    double achieved_loss = kInfiniteLoss;
    double opt_estimate = 0.0;
    double tolerance = kInfiniteLoss;
    std::size_t iterations = 0;
    bool certified = false;
    bool feasible = true;  // hard_svm: strict separation found
};

struct SolveConfig {
    std::size_t max_iters = 100000;
    double target_alpha = 1e-3;
    // Required cap for unbounded domains: optimization runs on the
    // intersection with ball(0, norm_cap).
    double norm_cap = 0.0;
    // Lipschitz constant on the support; 0 defers to task.lipschitz_bound.
    double lipschitz = 0.0;
    // >= 0 enables Polyak steps toward this lower bound on the optimum.
    double polyak_fstar = -1.0;
    // Stop as soon as the best loss drops to this value (< 0 disables).
    double stop_when_below = -1.0;
};

// ---------------------------------------------------------------------------
// Loss formulas

// Unregularized hinge over (w, a) packed as one vector v in R^{d+1}:
// max(0, 1 - y(<w,x> + a)).
inline double hinge_loss(const LabeledExample& z, const Vec& w, double a) {
    if (w.size() != z.point.size()) throw std::invalid_argument("hinge_loss: dimension mismatch");
    return std::max(0.0, 1.0 - z.label * (dot(w, z.point) + a));
}

// Linear-programming loss: ||w||^2 when sign<x,w> = y, +inf otherwise.
inline double lp_loss(const LabeledExample& z, const Vec& w) {
    if (sign_pm(dot(z.point, w)) != z.label) return kInfiniteLoss;
    return norm2(w);
}

// ---------------------------------------------------------------------------
// Task factories

// Hinge SCO over W = R^{d+1}; parameter vector v = (w, a).
inline SCOTask make_hinge_task(std::size_t d) {
    SCOTask t;
    t.domain = ConvexDomain::all_of_rk(d + 1);
    t.loss = [d](const LabeledExample& z, const Vec& v) {
        Vec w(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(d));
        return hinge_loss(z, w, v[d]);
    };
    t.subgradient = [d](const LabeledExample& z, const Vec& v) {
        Vec g(d + 1, 0.0);
        double m = 1.0 - z.label * v[d];
        for (std::size_t i = 0; i < d; ++i) m -= z.label * v[i] * z.point[i];
        if (m > 0.0) {
            for (std::size_t i = 0; i < d; ++i) g[i] = -z.label * z.point[i];
            g[d] = -static_cast<double>(z.label);
        }
        return g;
    };
    t.lipschitz_bound = [](const FiniteDistribution& dist) {
        double g = 0.0;
        for (const auto& a : dist.atoms()) g = std::max(g, std::sqrt(norm2(a.example.point) + 1.0));
        return g;
    };
    t.name = "hinge";
    return t;
}

// One-dimensional task with W = [-1,1], Z = {+-1}, loss (1/2)|z - w|; the
// example's label carries z and its point is empty.
inline SCOTask make_trivial_task() {
    SCOTask t;
    t.domain = ConvexDomain::box({-1.0}, {1.0});
    t.loss = [](const LabeledExample& z, const Vec& w) {
        return 0.5 * std::abs(static_cast<double>(z.label) - w[0]);
    };
    t.subgradient = [](const LabeledExample& z, const Vec& w) {
        const double d = w[0] - static_cast<double>(z.label);
        return Vec{d > 0.0 ? 0.5 : (d < 0.0 ? -0.5 : 0.0)};
    };
    t.lipschitz_bound = [](const FiniteDistribution&) { return 0.5; };
    t.name = "trivial";
    return t;
}

// Infinity-valued LP task over W = R^d; solved by hard_svm, not subgradient.
inline SCOTask make_lp_task(std::size_t d) {
    SCOTask t;
    t.domain = ConvexDomain::all_of_rk(d);
    t.loss = [](const LabeledExample& z, const Vec& w) { return lp_loss(z, w); };
    t.infinity_valued = true;
    t.name = "lp";
    return t;
}

// ---------------------------------------------------------------------------
// Projected subgradient descent

// Minimizes the expected task loss over the domain.  The returned point is
// the better of the averaged iterate and the best visited iterate; certified
// means either the a-priori bound diameter*Lipschitz/sqrt(T) <= alpha or the
// achieved loss itself is <= alpha (losses are nonnegative, so a loss below
// alpha is alpha-optimal outright).
inline SolverReport solve_subgradient(const SCOTask& task, const FiniteDistribution& dist,
                                      const SolveConfig& cfg = {}) {
    if (task.infinity_valued) {
        throw std::invalid_argument("solve_subgradient: infinity-valued task; use hard_svm");
    }
    if (!task.convex) {
        throw std::invalid_argument("solve_subgradient: task is flagged non-convex");
    }
    ConvexDomain domain = task.domain;
    if (!domain.bounded()) {
        if (!(cfg.norm_cap > 0.0)) {
            throw std::invalid_argument(
                "solve_subgradient: unbounded domain requires a norm_cap");
        }
        domain = ConvexDomain::ball(zeros(task.domain.ambient_dim), cfg.norm_cap);
    }

    double lipschitz = cfg.lipschitz;
    if (lipschitz <= 0.0 && task.lipschitz_bound) lipschitz = task.lipschitz_bound(dist);
    if (lipschitz <= 0.0) {
        throw std::invalid_argument("solve_subgradient: no Lipschitz bound available");
    }
    const double diameter = domain.diameter();

    auto objective = [&](const Vec& w) { return expected_task_loss(task, dist, w); };
    auto grad = [&](const Vec& w) {
        Vec g = zeros(w.size());
        for (const auto& a : dist.atoms()) axpy(g, a.weight, task.subgradient(a.example, w));
        return g;
    };

    // iterations needed for the a-priori certificate, capped by the budget
    std::size_t planned = cfg.max_iters;
    if (cfg.target_alpha > 0.0 && std::isfinite(diameter)) {
        const double need = diameter * lipschitz / cfg.target_alpha;
        if (need * need < static_cast<double>(cfg.max_iters)) {
            planned = static_cast<std::size_t>(std::ceil(need * need)) + 1;
        }
    }

    Vec x = domain.project(domain.some_point());
    Vec avg = x;
    Vec best_x = x;
    double best_f = objective(x);
    bool stationary = false;
    std::size_t t = 0;
    for (; t < planned; ++t) {
        if (cfg.stop_when_below >= 0.0 && best_f <= cfg.stop_when_below) break;
        const double f = objective(x);
        if (f < best_f) {
            best_f = f;
            best_x = x;
        }
        Vec g = grad(x);
        const double gn2 = norm2(g);
        if (gn2 == 0.0) {
            // zero subgradient of a convex objective: x is a global minimizer
            stationary = true;
            break;
        }
        double step;
        if (cfg.polyak_fstar >= 0.0) {
            step = std::max(f - cfg.polyak_fstar, 0.0) / gn2;
        } else {
            step = diameter / (lipschitz * std::sqrt(static_cast<double>(t + 1)));
        }
        axpy(x, -step, g);
        x = domain.project(std::move(x));
        // running average of iterates
        const double lam = 1.0 / static_cast<double>(t + 2);
        for (std::size_t i = 0; i < avg.size(); ++i) avg[i] += lam * (x[i] - avg[i]);
    }

    const double avg_f = objective(avg);
    SolverReport rep;
    if (avg_f < best_f) {
        rep.point = avg;
        rep.achieved_loss = avg_f;
    } else {
        rep.point = best_x;
        rep.achieved_loss = best_f;
    }
    rep.iterations = t;
    rep.tolerance = stationary ? 0.0
                               : diameter * lipschitz /
                                     std::sqrt(static_cast<double>(std::max<std::size_t>(t, 1)));
    rep.opt_estimate = std::max(0.0, rep.achieved_loss - rep.tolerance);
    rep.certified = rep.tolerance <= cfg.target_alpha || rep.achieved_loss <= cfg.target_alpha;
    return rep;
}

// ---------------------------------------------------------------------------
// Hard SVM

struct HardSvmConfig {
    double c_start = 1.0;
    double c_max = 1048576.0;  // 2^20
    std::size_t iters_per_stage = 1500;
};

// Minimum-norm separator with all margins >= 1, via penalty continuation on
// ||w||^2 + c * E max(0, 1 - y(<w,x> + b)) with c doubling.  Feasibility
// (y(<w,x> + b) > 0 on every atom) is certified exactly; the norm is only
// heuristically optimal.  Data is pre-scaled to unit max norm so the
// continuation sees relative margins.  Infeasible data yields a report with
// feasible = false, not an exception.
inline SolverReport hard_svm(const FiniteDistribution& dist, bool homogeneous = true,
                             const HardSvmConfig& cfg = {}) {
    const std::size_t d = dist.atoms().front().example.point.size();
    for (const auto& a : dist.atoms()) {
        if (a.example.point.size() != d) {
            throw std::invalid_argument("hard_svm: mixed point dimensions");
        }
    }
    double scale = 0.0;
    for (const auto& a : dist.atoms()) scale = std::max(scale, norm(a.example.point));
    if (scale == 0.0) scale = 1.0;

    const std::size_t dim = homogeneous ? d : d + 1;  // v = w or (w, b)
    auto margin_of = [&](const Vec& v, const Vec& x) {
        double m = homogeneous ? 0.0 : v[d];
        for (std::size_t i = 0; i < d; ++i) m += v[i] * x[i] / scale;
        return m;
    };
    auto objective_grad = [&](const Vec& v, double c, Vec& g) {
        double f = 0.0;
        g.assign(dim, 0.0);
        for (std::size_t i = 0; i < d; ++i) {
            f += v[i] * v[i];
            g[i] = 2.0 * v[i];
        }
        for (const auto& a : dist.atoms()) {
            const double m = a.example.label * margin_of(v, a.example.point);
            if (m < 1.0) {
                f += c * a.weight * (1.0 - m);
                const double coef = -c * a.weight * a.example.label;
                for (std::size_t i = 0; i < d; ++i) g[i] += coef * a.example.point[i] / scale;
                if (!homogeneous) g[d] += coef;
            }
        }
        return f;
    };

    Vec v(dim, 0.0);
    Vec g(dim);
    std::size_t total_iters = 0;
    for (double c = cfg.c_start; c <= cfg.c_max; c *= 2.0) {
        Vec best_v = v;
        double best_f = objective_grad(v, c, g);
        for (std::size_t t = 0; t < cfg.iters_per_stage; ++t) {
            const double f = objective_grad(v, c, g);
            if (f < best_f) {
                best_f = f;
                best_v = v;
            }
            // ||w||^2 gives strong convexity 2; classic 1/(mu (t+2)) schedule
            const double step = 1.0 / (2.0 * static_cast<double>(t + 2));
            axpy(v, -step, g);
            ++total_iters;
        }
        v = best_v;
    }

    double min_margin = kInfiniteLoss;
    for (const auto& a : dist.atoms()) {
        min_margin = std::min(min_margin, a.example.label * margin_of(v, a.example.point));
    }

    SolverReport rep;
    rep.iterations = total_iters;
    if (!(min_margin > 0.0)) {
        rep.feasible = false;
        rep.certified = false;
        rep.point = v;
        rep.achieved_loss = kInfiniteLoss;
        return rep;
    }
    // Rescale so the smallest margin is exactly 1, then undo the data scaling.
    Vec w(dim);
    for (std::size_t i = 0; i < d; ++i) w[i] = v[i] / (min_margin * scale);
    if (!homogeneous) w[d] = v[d] / min_margin;
    rep.point = w;
    double n2 = 0.0;
    for (std::size_t i = 0; i < d; ++i) n2 += w[i] * w[i];
    rep.achieved_loss = n2;
    rep.feasible = true;
    rep.certified = true;
    rep.tolerance = 0.01 * n2;  // norm within ~1% of the continuation limit
    rep.opt_estimate = n2;
    return rep;
}

// OPT over an SCO task: delegates to the subgradient solver; the report
// carries the tolerance the value comes with.
inline SolverReport opt_over_class(const FiniteDistribution& dist, const SCOTask& task,
                                   const SolveConfig& cfg = {}) {
    return solve_subgradient(task, dist, cfg);
}

// Exact minimum of the expected task loss over a uniform grid on a
// one-dimensional interval; the verification path for non-convex targets.
inline SolverReport solve_grid_1d(const SCOTask& task, const FiniteDistribution& dist, double lo,
                                  double hi, std::size_t points = 20001) {
    SolverReport rep;
    rep.iterations = points;
    double best = kInfiniteLoss;
    Vec arg{lo};
    for (std::size_t i = 0; i < points; ++i) {
        const double w = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
        const double f = expected_task_loss(task, dist, Vec{w});
        if (f < best) {
            best = f;
            arg = Vec{w};
        }
    }
    rep.point = arg;
    rep.achieved_loss = best;
    // the grid minimum overshoots OPT by at most spacing * Lipschitz; a
    // factor of 10 covers the loss families routed here
    rep.tolerance = 10.0 * (hi - lo) / static_cast<double>(points - 1);
    rep.opt_estimate = std::max(0.0, best - rep.tolerance);
    rep.certified = true;
    return rep;
}

}  // namespace redlearn
