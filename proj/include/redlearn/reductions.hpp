#pragma once

// (alpha, beta)-reductions between learning tasks: constructors for the
// concrete reductions the library ships and an empirical harness that checks
// the claimed contract over finite suites of realizable distributions.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "redlearn/classes.hpp"
#include "redlearn/core.hpp"
#include "redlearn/rng.hpp"
#include "redlearn/sco.hpp"

namespace redlearn {

struct TargetSolution {
    Vec point;
    double achieved = kInfiniteLoss;
    double opt_estimate = 0.0;
    bool certified = false;
    bool ok = false;
    std::string note;
};

using TargetSolver =
    std::function<TargetSolution(const FiniteDistribution&, double, const SolveConfig&)>;

// A pair (r_in, r_out) with a claimed beta(alpha) curve.  The solve hook
// produces an alpha-optimal point of the target task on a pushforward
// distribution; realizable tests membership of a source distribution in the
// reduction's admissible family.
struct Reduction {
    std::string name;
    std::function<LabeledExample(const LabeledExample&)> in_map;
    std::function<Hypothesis(const Vec&)> out_map;
    std::function<double(double)> claimed_beta;
    double default_alpha = 0.05;
    bool exact = false;
    SCOTask target;
    TargetSolver solve;
    std::function<bool(const FiniteDistribution&)> realizable;
};

inline FiniteDistribution pushforward(const Reduction& red, const FiniteDistribution& dist) {
    std::vector<Atom> atoms;
    atoms.reserve(dist.support_size());
    for (const auto& a : dist.atoms()) atoms.push_back({red.in_map(a.example), a.weight});
    return FiniteDistribution(std::move(atoms));  // collided images merge here
}

struct VerificationRecord {
    std::string dist_id;
    double opt_target = 0.0;
    double achieved = kInfiniteLoss;
    double pulled_back_01 = 1.0;
    double bound = 0.0;
    std::size_t probes = 0;  // extra alpha-optimal perturbations checked
    bool pass = false;
    bool inconclusive = false;
    std::string note;
};

struct VerificationReport {
    std::string reduction_name;
    double alpha = 0.0;
    double beta = 0.0;
    double slack = 0.0;
    bool exact_claimed = false;
    std::vector<VerificationRecord> records;
    bool aggregate_pass = false;
};

// Runs the falsifiable fragment of the reduction contract on a finite suite:
// one certified alpha-optimal target point per distribution, pulled back and
// checked against beta + slack; exact reductions additionally need a target
// point of loss <= slack.  The contract quantifies over every alpha-optimal
// point, which no finite run can enumerate, so random perturbations of the
// solver output that are still certifiably alpha-optimal (target loss at most
// opt_estimate + alpha, with opt_estimate a lower bound on OPT) are probed
// too.  The result is "consistent with", never "proved".
inline VerificationReport verify_reduction(const Reduction& red,
                                           const std::vector<FiniteDistribution>& suite,
                                           const SolveConfig& cfg, double alpha, double beta,
                                           double slack = 0.02, std::size_t perturbations = 4) {
    if (!(alpha > 0.0)) {
        throw std::invalid_argument("verify_reduction: alpha must be positive");
    }
    VerificationReport report;
    report.reduction_name = red.name;
    report.alpha = alpha;
    report.beta = beta;
    report.slack = slack;
    report.exact_claimed = red.exact;
    report.aggregate_pass = true;

    std::size_t idx = 0;
    for (const auto& dist : suite) {
        VerificationRecord rec;
        rec.dist_id = "D" + std::to_string(idx++);
        rec.bound = beta + slack;
        if (red.realizable && !red.realizable(dist)) {
            throw std::invalid_argument("verify_reduction: suite distribution " + rec.dist_id +
                                        " is not realizable by the source class");
        }
        const FiniteDistribution pushed = pushforward(red, dist);
        TargetSolution sol = red.solve(pushed, alpha, cfg);
        if (!sol.ok) {
            rec.inconclusive = true;
            rec.pass = false;
            rec.note = sol.note.empty() ? "solver failure" : sol.note;
            report.aggregate_pass = false;
            report.records.push_back(std::move(rec));
            continue;
        }
        rec.opt_target = sol.opt_estimate;
        rec.achieved = sol.achieved;
        rec.note = sol.note;  // e.g. the cap at which the hinge solver met alpha
        const Hypothesis h = red.out_map(sol.point);
        rec.pulled_back_01 = zero_one_loss(dist, h);
        bool pass = sol.certified && rec.pulled_back_01 <= rec.bound;
        if (red.exact && !(sol.achieved <= slack)) {
            pass = false;
            rec.note = "exactness check failed: achieved target loss above slack";
        }
        // perturbations of the solution that stay alpha-optimal must obey the
        // same pulled-back bound
        auto eng = make_engine(0xFACADEULL, idx);
        const double sol_norm = norm(sol.point);
        const double scale = sol_norm > 1e-12 ? sol_norm : 1.0;
        for (std::size_t p = 0; red.target.loss && p < perturbations; ++p) {
            Vec cand = sol.point;
            for (auto& c : cand) c += scale * alpha * (2.0 * uniform01(eng) - 1.0);
            cand = red.target.domain.project(std::move(cand));
            const double cand_loss = expected_task_loss(red.target, pushed, cand);
            if (!(cand_loss <= sol.opt_estimate + alpha)) continue;  // not alpha-optimal
            ++rec.probes;
            const double pulled = zero_one_loss(dist, red.out_map(cand));
            if (pulled > rec.bound) {
                pass = false;
                rec.note = "perturbed alpha-optimal point violated the bound";
            }
        }
        rec.pass = pass;
        if (!pass) report.aggregate_pass = false;
        report.records.push_back(std::move(rec));
    }
    return report;
}

namespace detail {

inline bool strictly_separable(const FiniteDistribution& dist, bool homogeneous) {
    return hard_svm(dist, homogeneous).feasible;
}

// No point carries both labels.
inline bool labels_consistent(const FiniteDistribution& dist) {
    for (const auto& a : dist.atoms()) {
        for (const auto& b : dist.atoms()) {
            if (a.example.point == b.example.point && a.example.label != b.example.label) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// SVM with unregularized hinge loss: identity r_in, r_out(w, a) = c_{w,a},
// claimed (alpha, alpha) for all alpha > 0.  The target domain R^{d+1} is
// unbounded, so the solver grows a norm cap geometrically until the target
// loss drops below alpha.
inline Reduction hinge_reduction(std::size_t d) {
    if (d < 1) throw std::invalid_argument("hinge_reduction: d must be >= 1");
    Reduction red;
    red.name = "hinge";
    red.in_map = [](const LabeledExample& z) { return z; };
    red.out_map = [d](const Vec& v) {
        Vec w(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(d));
        const double a = v[d];
        return Hypothesis::deterministic([w = std::move(w), a](const Vec& x) {
            return static_cast<double>(sign_pm(dot(w, x) + a));
        });
    };
    red.claimed_beta = [](double alpha) { return alpha; };
    red.exact = false;
    red.target = make_hinge_task(d);
    red.realizable = [](const FiniteDistribution& dist) {
        return detail::strictly_separable(dist, false);
    };
    red.solve = [task = red.target](const FiniteDistribution& pushed, double alpha,
                                    const SolveConfig& cfg) {
        TargetSolution sol;
        for (double cap = std::max(cfg.norm_cap, 8.0); cap <= 1048576.0; cap *= 2.0) {
            SolveConfig stage = cfg;
            stage.norm_cap = cap;
            stage.target_alpha = alpha;
            stage.polyak_fstar = 0.0;
            stage.stop_when_below = 0.5 * alpha;
            SolverReport rep = solve_subgradient(task, pushed, stage);
            if (rep.achieved_loss <= alpha) {
                sol.point = rep.point;
                sol.achieved = rep.achieved_loss;
                sol.opt_estimate = 0.0;
                sol.certified = true;
                sol.ok = true;
                sol.note = "cap " + std::to_string(cap);
                return sol;
            }
        }
        sol.ok = false;
        sol.note = "norm cap exhausted before reaching alpha";
        return sol;
    };
    return red;
}

// Hard SVM: identity r_in, r_out(w) = c_w, claimed (alpha, 0), exact.  An
// alpha-optimal point is produced by finding any strict separator and scaling
// it down until its squared norm is below alpha (OPT is 0 by that same
// rescaling, so this certifies alpha-optimality outright).
inline Reduction hard_svm_reduction(std::size_t d) {
    if (d < 1) throw std::invalid_argument("hard_svm_reduction: d must be >= 1");
    Reduction red;
    red.name = "hard-svm";
    red.in_map = [](const LabeledExample& z) { return z; };
    red.out_map = [](const Vec& w) {
        return Hypothesis::deterministic(
            [w](const Vec& x) { return static_cast<double>(sign_pm(dot(w, x))); });
    };
    red.claimed_beta = [](double) { return 0.0; };
    red.exact = true;
    red.target = make_lp_task(d);
    red.realizable = [](const FiniteDistribution& dist) {
        return detail::strictly_separable(dist, true);
    };
    red.solve = [task = red.target](const FiniteDistribution& pushed, double alpha,
                                    const SolveConfig&) {
        TargetSolution sol;
        SolverReport rep = hard_svm(pushed, true);
        if (!rep.feasible) {
            sol.ok = false;
            sol.note = "infeasible: no strict separator";
            return sol;
        }
        const double goal = 0.5 * std::min(alpha, 0.01);
        Vec w = scaled(rep.point, std::sqrt(goal / norm2(rep.point)));
        sol.achieved = expected_task_loss(task, pushed, w);
        if (sol.achieved == kInfiniteLoss) {
            sol.ok = false;
            sol.note = "separator lost feasibility after rescaling";
            return sol;
        }
        sol.point = std::move(w);
        sol.opt_estimate = 0.0;
        sol.certified = true;  // loss <= alpha and OPT = 0 by rescaling
        sol.ok = true;
        return sol;
    };
    return red;
}

// The trivial reduction to one dimension: r_in(x, y) = y, r_out(w) the
// constant randomized hypothesis h_w, claimed (alpha, (1 + alpha) / 2).
inline Reduction trivial_reduction() {
    Reduction red;
    red.name = "trivial";
    red.in_map = [](const LabeledExample& z) { return LabeledExample(Vec{}, z.label); };
    red.out_map = [](const Vec& w) { return Hypothesis::constant(w[0]); };
    red.claimed_beta = [](double alpha) { return 0.5 * (1.0 + alpha); };
    red.default_alpha = 0.01;
    red.exact = false;
    red.target = make_trivial_task();
    red.realizable = detail::labels_consistent;
    red.solve = [task = red.target](const FiniteDistribution& pushed, double alpha,
                                    const SolveConfig& cfg) {
        SolveConfig stage = cfg;
        stage.target_alpha = alpha;
        SolverReport rep = solve_subgradient(task, pushed, stage);
        TargetSolution sol;
        sol.point = rep.point;
        sol.achieved = rep.achieved_loss;
        sol.opt_estimate = rep.opt_estimate;
        sol.certified = rep.certified;
        sol.ok = true;
        return sol;
    };
    return red;
}

// Non-convex reduction of a finite total class to W = [0,1]: each concept c
// gets a distinct anchor w_c, and l_{x,y}(w) = d(w, V_{x,y}) /
// (d(w, V_{x,y}) + d(w, V_{x,-y})) with V_{x,y} = {w_c : c(x) = y}.  Exact
// (alpha, 2 alpha); the target is non-convex, so verification grid-searches.
inline Reduction nonconvex_reduction(const FiniteConceptClass& cls,
                                     const std::vector<double>& w_assignment) {
    if (!cls.is_total()) {
        throw std::invalid_argument("nonconvex_reduction: class must be total");
    }
    if (w_assignment.size() != cls.num_concepts()) {
        throw std::invalid_argument("nonconvex_reduction: one anchor per concept required");
    }
    for (std::size_t i = 0; i < w_assignment.size(); ++i) {
        if (w_assignment[i] < 0.0 || w_assignment[i] > 1.0) {
            throw std::invalid_argument("nonconvex_reduction: anchors must lie in [0,1]");
        }
        for (std::size_t j = i + 1; j < w_assignment.size(); ++j) {
            if (w_assignment[i] == w_assignment[j]) {
                throw std::invalid_argument("nonconvex_reduction: anchors must be injective");
            }
        }
    }
    // V_{x,y} per (point index, label); both must be nonempty for every x.
    const std::size_t n = cls.num_points();
    auto anchors = std::make_shared<std::vector<std::array<std::vector<double>, 2>>>(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < cls.num_concepts(); ++i) {
            const TableEntry v = cls.value(i, j);
            (*anchors)[j][v > 0 ? 1 : 0].push_back(w_assignment[i]);
        }
        if ((*anchors)[j][0].empty() || (*anchors)[j][1].empty()) {
            throw std::invalid_argument(
                "nonconvex_reduction: no concept attains label " +
                std::string((*anchors)[j][0].empty() ? "-1" : "+1") + " at domain point " +
                std::to_string(j));
        }
    }
    auto dist_to = [](double w, const std::vector<double>& set) {
        double d = kInfiniteLoss;
        for (double v : set) d = std::min(d, std::abs(w - v));
        return d;
    };
    auto cls_copy = std::make_shared<FiniteConceptClass>(cls);
    auto point_loss = [anchors, cls_copy, dist_to](const LabeledExample& z, double w) {
        const auto j = cls_copy->find_point(z.point);
        if (j < 0) {
            throw std::domain_error("nonconvex loss: " + z.describe() +
                                    " is not a domain point of the class");
        }
        const auto& pos = (*anchors)[static_cast<std::size_t>(j)][z.label > 0 ? 1 : 0];
        const auto& neg = (*anchors)[static_cast<std::size_t>(j)][z.label > 0 ? 0 : 1];
        const double dy = dist_to(w, pos);
        const double dny = dist_to(w, neg);
        return dy / (dy + dny);
    };

    Reduction red;
    red.name = "nonconvex";
    red.in_map = [](const LabeledExample& z) { return z; };
    red.out_map = [point_loss](const Vec& w) {
        const double wv = w[0];
        return Hypothesis::deterministic([point_loss, wv](const Vec& x) {
            const double lneg = point_loss(LabeledExample(x, -1), wv);
            const double lpos = point_loss(LabeledExample(x, +1), wv);
            return static_cast<double>(sign_pm(lneg - lpos));
        });
    };
    red.claimed_beta = [](double alpha) { return 2.0 * alpha; };
    red.exact = true;
    SCOTask task;
    task.domain = ConvexDomain::box({0.0}, {1.0});
    task.loss = [point_loss](const LabeledExample& z, const Vec& w) {
        return point_loss(z, w[0]);
    };
    task.convex = false;
    task.name = "nonconvex-anchor";
    red.target = task;
    red.realizable = [cls_copy](const FiniteDistribution& dist) {
        return opt_over_class(dist, *cls_copy) == 0.0;
    };
    red.solve = [task](const FiniteDistribution& pushed, double alpha, const SolveConfig&) {
        SolverReport rep = solve_grid_1d(task, pushed, 0.0, 1.0);
        TargetSolution sol;
        sol.point = rep.point;
        sol.achieved = rep.achieved_loss;
        sol.opt_estimate = rep.opt_estimate;
        sol.certified = rep.achieved_loss <= alpha;
        sol.ok = true;
        return sol;
    };
    return red;
}

// ---------------------------------------------------------------------------
// Deterministic suite generators.  Point masses and near-antipodal two-atom
// distributions are the binding cases in the proofs; mixtures add bulk.

// Distributions realizable by a homogeneous half-space with margin: every
// third one is a point mass, every third a two-atom antipodal pair, the rest
// uniform mixtures of `atoms` margin samples.
inline std::vector<FiniteDistribution> make_halfspace_suite(std::size_t d, std::size_t count,
                                                            std::size_t atoms, double margin,
                                                            std::uint64_t seed) {
    if (d < 1) throw std::invalid_argument("make_halfspace_suite: d must be >= 1");
    std::vector<FiniteDistribution> suite;
    suite.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        auto eng = make_engine(seed, i);
        const Vec w = unit_sphere_sample(eng, d);
        const std::uint64_t sub_seed = splitmix64(seed ^ (i * 2654435761ULL + 17));
        FiniteDistribution base =
            sample_margin_distribution(static_cast<unsigned>(d - 1), w, margin,
                                       std::max<std::size_t>(atoms, 2), sub_seed);
        switch (i % 3) {
            case 0:
                suite.push_back(FiniteDistribution::point_mass(base.atoms().front().example));
                break;
            case 1: {
                const LabeledExample& a = base.atoms().front().example;
                LabeledExample b(scaled(a.point, -1.0), -a.label);
                const double p = 0.25 + 0.5 * uniform01(eng);
                suite.push_back(FiniteDistribution({{a, p}, {b, 1.0 - p}}));
                break;
            }
            default:
                suite.push_back(base);
                break;
        }
    }
    return suite;
}

// All-mixture variant: `count` distributions of exactly `atoms` margin
// samples each, uniform weights.
inline std::vector<FiniteDistribution> make_margin_mixture_suite(std::size_t d, std::size_t count,
                                                                 std::size_t atoms, double margin,
                                                                 std::uint64_t seed) {
    std::vector<FiniteDistribution> suite;
    suite.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        auto eng = make_engine(seed, 1000 + i);
        const Vec w = unit_sphere_sample(eng, d);
        suite.push_back(sample_margin_distribution(static_cast<unsigned>(d - 1), w, margin, atoms,
                                                   splitmix64(seed ^ (i * 40503ULL + 29))));
    }
    return suite;
}

// Label-consistent distributions over scattered 1-D points for the trivial
// reduction: point masses, two-atom splits (including p+ = 0.5 and 0.7), and
// random mixtures.
inline std::vector<FiniteDistribution> make_label_suite(std::size_t count, std::uint64_t seed) {
    std::vector<FiniteDistribution> suite;
    suite.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        auto eng = make_engine(seed, 5000 + i);
        if (i % 4 == 0) {
            const int y = (i % 8 == 0) ? +1 : -1;
            suite.push_back(
                FiniteDistribution::point_mass(LabeledExample({uniform(eng, -1, 1)}, y)));
        } else if (i % 4 == 1) {
            const double p = (i == 1) ? 0.7 : (i % 8 == 1 ? 0.5 : 0.2 + 0.6 * uniform01(eng));
            suite.push_back(FiniteDistribution({{LabeledExample({uniform(eng, -1, 1)}, +1), p},
                                                {LabeledExample({uniform(eng, 1, 3)}, -1), 1 - p}}));
        } else {
            const std::size_t m = 3 + static_cast<std::size_t>(eng() % 6);
            std::vector<Atom> atoms;
            double total = 0.0;
            for (std::size_t k = 0; k < m; ++k) {
                const double w = 0.1 + uniform01(eng);
                atoms.push_back({LabeledExample({static_cast<double>(k) + uniform01(eng)},
                                                uniform01(eng) < 0.5 ? +1 : -1),
                                 w});
                total += w;
            }
            for (auto& a : atoms) a.weight /= total;
            suite.push_back(FiniteDistribution(std::move(atoms)));
        }
    }
    return suite;
}

}  // namespace redlearn
