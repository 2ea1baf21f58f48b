#pragma once

// Command implementations behind the experiment-runner CLI.  Each command
// takes a parameter record, runs deterministically for a given seed, and
// returns a pass flag plus JSON (and CSV where the format is defined).

#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "redlearn/classes.hpp"
#include "redlearn/core.hpp"
#include "redlearn/io.hpp"
#include "redlearn/reductions.hpp"
#include "redlearn/representations.hpp"
#include "redlearn/sco.hpp"
#include "redlearn/topology.hpp"

namespace redlearn::cli {

struct CommandResult {
    bool pass = false;
    Json report;
    std::string csv;  // empty when the command has no CSV schema
};

// --------------------------------------------------------------------------
// Builtin specifiers

inline FiniteConceptClass parse_class_spec(const std::string& spec) {
    if (spec.rfind("proj:", 0) == 0) {
        return projection_class(static_cast<unsigned>(std::stoul(spec.substr(5))));
    }
    if (spec == "2hs1d") {
        // the two homogeneous half-spaces of R^1 restricted to {+1, -1}
        return FiniteConceptClass({{+1.0}, {-1.0}}, {{+1, -1}, {-1, +1}},
                                  {"sign(x)", "sign(-x)"});
    }
    // anything else: a JSON file in the classes-module format
    std::ifstream in(spec);
    if (!in) throw std::invalid_argument("class spec '" + spec + "' is not builtin or readable");
    Json j;
    in >> j;
    return class_from_json(j);
}

// margin:<n>:<gamma> names the partial class of margin-gamma linear
// classifiers on the sphere S^n.
inline std::pair<unsigned, double> parse_margin_spec(const std::string& spec) {
    if (spec.rfind("margin:", 0) != 0) {
        throw std::invalid_argument("class spec must look like margin:<n>:<gamma>");
    }
    const auto rest = spec.substr(7);
    const auto colon = rest.find(':');
    if (colon == std::string::npos) {
        throw std::invalid_argument("class spec must look like margin:<n>:<gamma>");
    }
    const unsigned n = static_cast<unsigned>(std::stoul(rest.substr(0, colon)));
    const double gamma = std::stod(rest.substr(colon + 1));
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw std::invalid_argument("margin spec: gamma outside (0, 1)");
    }
    return {n, gamma};
}

inline Majority3Classifier parse_maj3_spec(const std::string& spec) {
    // maj3:<seed>:<dim>
    if (spec.rfind("maj3:", 0) != 0) {
        throw std::invalid_argument("classifier spec must look like maj3:<seed>:<dim>");
    }
    const auto rest = spec.substr(5);
    const auto colon = rest.find(':');
    if (colon == std::string::npos) {
        throw std::invalid_argument("classifier spec must look like maj3:<seed>:<dim>");
    }
    const std::uint64_t seed = std::stoull(rest.substr(0, colon));
    const std::size_t dim = std::stoul(rest.substr(colon + 1));
    auto eng = make_engine(seed, 0x3A3ULL);
    return Majority3Classifier(Halfspace(unit_sphere_sample(eng, dim)),
                               Halfspace(unit_sphere_sample(eng, dim)),
                               Halfspace(unit_sphere_sample(eng, dim)));
}

// --------------------------------------------------------------------------
// vc

struct VcParams {
    std::string class_spec;
    double budget = kVcSearchBudget;
};

inline CommandResult cmd_vc(const VcParams& p) {
    const FiniteConceptClass cls = parse_class_spec(p.class_spec);
    CommandResult res;
    res.report["class"] = p.class_spec;
    res.report["concepts"] = cls.num_concepts();
    res.report["points"] = cls.num_points();
    res.report["vc"] = vc_dimension(cls, p.budget);
    if (cls.is_total()) {
        res.report["dual_vc"] = dual_vc_dimension(cls, p.budget);
    }
    res.pass = true;
    return res;
}

// --------------------------------------------------------------------------
// reduce-verify

struct ReduceVerifyParams {
    std::string reduction;           // trivial | hinge | hard-svm | nonconvex
    std::size_t dim = 2;             // source dimension for the SVM reductions
    double alpha = 0.0;              // 0: use the reduction's default
    double beta = -1.0;              // < 0: use the claimed beta(alpha)
    double slack = 0.02;
    std::string suite = "adversarial";  // adversarial | mixture
    std::size_t suites = 16;
    std::size_t atoms = 10;
    double margin = 0.2;
    std::string class_spec = "2hs1d";  // nonconvex source class (needs both labels everywhere)
    std::uint64_t seed = 0;
    std::size_t max_iters = 100000;
};

// Distributions realizable by a finite class: random concepts labeling random
// sub-supports with random weights.
inline std::vector<FiniteDistribution> make_class_suite(const FiniteConceptClass& cls,
                                                        std::size_t count, std::uint64_t seed) {
    std::vector<FiniteDistribution> suite;
    suite.reserve(count);
    std::size_t draw = 0;
    while (suite.size() < count) {
        auto eng = make_engine(seed, 9100 + draw++);
        if (draw > 100 * count) {
            throw std::runtime_error("make_class_suite: class too sparse to sample suites");
        }
        const std::size_t row = eng() % cls.num_concepts();
        const std::size_t m = 1 + eng() % std::min<std::size_t>(cls.num_points(), 6);
        std::vector<Atom> atoms;
        double total = 0.0;
        std::set<std::size_t> used;
        while (used.size() < m) used.insert(eng() % cls.num_points());
        for (std::size_t j : used) {
            const TableEntry v = cls.value(row, j);
            if (v == kStar) continue;  // partial row: skip undefined points
            const double w = 0.1 + uniform01(eng);
            atoms.push_back({LabeledExample(cls.points()[j], v), w});
            total += w;
        }
        if (atoms.empty()) continue;
        for (auto& a : atoms) a.weight /= total;
        suite.push_back(FiniteDistribution(std::move(atoms)));
    }
    return suite;
}

inline CommandResult cmd_reduce_verify(const ReduceVerifyParams& p) {
    Reduction red;
    std::vector<FiniteDistribution> dists;
    if (p.reduction == "trivial") {
        red = trivial_reduction();
        dists = make_label_suite(p.suites, p.seed);
    } else if (p.reduction == "hinge" || p.reduction == "hard-svm") {
        red = p.reduction == "hinge" ? hinge_reduction(p.dim) : hard_svm_reduction(p.dim);
        dists = p.suite == "mixture"
                    ? make_margin_mixture_suite(p.dim, p.suites, p.atoms, p.margin, p.seed)
                    : make_halfspace_suite(p.dim, p.suites, p.atoms, p.margin, p.seed);
    } else if (p.reduction == "nonconvex") {
        const FiniteConceptClass cls = parse_class_spec(p.class_spec);
        std::vector<double> anchors(cls.num_concepts());
        for (std::size_t i = 0; i < anchors.size(); ++i) {
            anchors[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(anchors.size());
        }
        red = nonconvex_reduction(cls, anchors);
        dists = make_class_suite(cls, p.suites, p.seed);
    } else {
        throw std::invalid_argument("reduce-verify: unknown reduction '" + p.reduction + "'");
    }
    const double alpha = p.alpha > 0.0 ? p.alpha : red.default_alpha;
    const double beta = p.beta >= 0.0 ? p.beta : red.claimed_beta(alpha);
    SolveConfig cfg;
    cfg.max_iters = p.max_iters;
    cfg.target_alpha = alpha;
    const VerificationReport rep = verify_reduction(red, dists, cfg, alpha, beta, p.slack);
    CommandResult res;
    res.pass = rep.aggregate_pass;
    res.report = verification_report_to_json(rep);
    res.csv = verification_report_to_csv(rep);
    return res;
}

// --------------------------------------------------------------------------
// random-projection

struct RandomProjectionParams {
    double gamma = 1.0 / 3.0;
    unsigned d = 500;
    unsigned n = 10;
    std::string class_spec;  // margin:<n>:<gamma> overrides n and gamma
    std::size_t trials = 100000;
    std::uint64_t seed = 0;
    std::size_t seed_count = 1;  // runs with seeds seed, seed+1, ...
};

inline CommandResult cmd_random_projection(RandomProjectionParams p) {
    if (!p.class_spec.empty()) {
        const auto [n, gamma] = parse_margin_spec(p.class_spec);
        p.n = n;
        p.gamma = gamma;
    }
    CommandResult res;
    res.report["gamma"] = p.gamma;
    res.report["d"] = p.d;
    res.report["n"] = p.n;
    res.report["trials"] = p.trials;
    Json rows = Json::array();
    res.csv = sign_flip_csv_header();
    bool all_pass = true;
    for (std::size_t s = 0; s < p.seed_count; ++s) {
        const SignFlipReport rep = sign_flip_rate(p.n, p.d, p.gamma, p.trials, p.seed + s);
        const double margin =
            3.0 * std::sqrt(rep.bound / static_cast<double>(rep.trials));
        const bool pass = rep.empirical_rate <= rep.bound + margin;
        all_pass = all_pass && pass;
        Json row = sign_flip_report_to_json(rep);
        row["pass"] = pass;
        rows.push_back(std::move(row));
        res.csv += sign_flip_report_to_csv_row(rep);
    }
    res.report["rows"] = std::move(rows);
    res.report["all_pass"] = all_pass;
    res.pass = all_pass;
    return res;
}

// --------------------------------------------------------------------------
// helly-cert

struct HellyParams {
    unsigned d = 2;
    double alpha = 0.2;
    std::size_t samples = 100;
    std::size_t sample_size = 6;
    std::uint64_t seed = 0;
    bool planted = false;  // run the planted-violation instance instead
};

// Labelings of random plane points by strict-margin homogeneous half-spaces,
// packaged as a finite total class; the identity map is then an exact
// representation of it.
struct HellyFixture {
    FiniteConceptClass cls;
    Representation repr;
    std::vector<std::vector<LabeledExample>> samples;
};

inline HellyFixture make_helly_exact_fixture(unsigned d, std::size_t n_points,
                                             std::size_t n_classifiers, std::size_t n_samples,
                                             std::size_t sample_size, std::uint64_t seed) {
    auto eng = make_engine(seed, 0x4E11ULL);
    std::vector<Vec> points;
    std::vector<Vec> normals;
    const double min_margin = 0.05;
    while (normals.size() < n_classifiers) {
        points.clear();
        for (std::size_t i = 0; i < n_points; ++i) points.push_back(unit_sphere_sample(eng, d));
        normals.clear();
        for (std::size_t tries = 0; tries < 200 && normals.size() < n_classifiers; ++tries) {
            Vec w = unit_sphere_sample(eng, d);
            bool ok = true;
            for (const auto& x : points) ok = ok && std::abs(dot(w, x)) >= min_margin;
            if (ok) normals.push_back(std::move(w));
        }
    }
    std::vector<std::vector<TableEntry>> table;
    std::set<std::vector<TableEntry>> seen;
    for (const auto& w : normals) {
        std::vector<TableEntry> row(points.size());
        for (std::size_t j = 0; j < points.size(); ++j) {
            row[j] = static_cast<TableEntry>(sign_pm(dot(w, points[j])));
        }
        if (seen.insert(row).second) table.push_back(std::move(row));
    }
    FiniteConceptClass cls(points, std::move(table));
    std::vector<std::vector<LabeledExample>> samples;
    for (std::size_t s = 0; s < n_samples; ++s) {
        auto seng = make_engine(seed, 8200 + s);
        const std::size_t row = seng() % cls.num_concepts();
        std::set<std::size_t> used;
        const std::size_t m = std::min(sample_size, cls.num_points());
        while (used.size() < m) used.insert(seng() % cls.num_points());
        std::vector<LabeledExample> sample;
        for (std::size_t j : used) {
            sample.emplace_back(cls.points()[j], cls.value(row, j));
        }
        samples.push_back(std::move(sample));
    }
    return {std::move(cls), Representation::identity(d), std::move(samples)};
}

// Exact tabulated representation with one image point negated, so the mapped
// sample pins 0 inside the convex hull of a 3-subset.
inline HellyFixture make_helly_planted_fixture() {
    std::vector<Vec> points{{0.0}, {1.0}, {2.0}};
    FiniteConceptClass cls(points, {{+1, +1, +1}}, {"always+1"});
    std::map<Vec, Vec> images{
        {{0.0}, {-1.0, -0.2}},  // flipped from (1.0, 0.2): breaks separability
        {{1.0}, {1.0, 1.0}},
        {{2.0}, {1.0, -1.0}},
    };
    std::vector<std::vector<LabeledExample>> samples{{
        LabeledExample({0.0}, +1),
        LabeledExample({1.0}, +1),
        LabeledExample({2.0}, +1),
    }};
    return {std::move(cls), Representation::tabulated(std::move(images), 2), std::move(samples)};
}

inline CommandResult cmd_helly_cert(const HellyParams& p) {
    HellyFixture fx = p.planted
                          ? make_helly_planted_fixture()
                          : make_helly_exact_fixture(p.d, 10, 6, p.samples, p.sample_size, p.seed);
    const HellyReport rep = helly_certify(fx.repr, fx.cls, p.d, p.alpha, fx.samples);
    CommandResult res;
    res.report = helly_report_to_json(rep);
    res.report["planted"] = p.planted;
    // planted instances must be rejected with the bad subset named
    if (p.planted) {
        bool rejected_with_diag = !rep.exact_on_samples;
        for (const auto& s : rep.samples) {
            if (!s.witnessed && s.failing_subsets.empty()) rejected_with_diag = false;
        }
        res.pass = rejected_with_diag;
    } else {
        res.pass = rep.exact_on_samples;
    }
    return res;
}

// --------------------------------------------------------------------------
// extract-signrank

struct ExtractParams {
    std::string class_spec = "2hs1d";
};

inline CommandResult cmd_extract_signrank(const ExtractParams& p) {
    const FiniteConceptClass cls = parse_class_spec(p.class_spec);
    const std::size_t d = cls.points().front().size();
    const Reduction red = hard_svm_reduction(d);
    const SignRankWitness wit = extract_signrank_witness(cls, red);
    CommandResult res;
    res.report["class"] = p.class_spec;
    res.report["target_dim"] = d;
    res.report["witness"] = witness_to_json(wit);
    res.pass = wit.verified;
    return res;
}

// --------------------------------------------------------------------------
// bu-demo

struct BuDemoParams {
    std::size_t d = 2;
    std::size_t k = 1;
    double delta = 0.0;  // 0: pick 0.45 for random, 0.3 for identity
    std::size_t instances = 1;
    std::uint64_t seed = 0;
    bool identity = false;  // w_t = t with k = d+1
    double tol = 1e-4;
    std::size_t restarts = 64;
};

inline CommandResult cmd_bu_demo(const BuDemoParams& p) {
    if (p.identity && p.k != p.d + 1) {
        throw std::invalid_argument("bu-demo: identity assignments require k = d+1");
    }
    if (!p.identity && p.k > p.d) {
        // collisions are only guaranteed for k <= d
        throw std::invalid_argument("bu-demo: random assignments require k <= d");
    }
    CommandResult res;
    Json instances = Json::array();
    bool all_pass = true;
    for (std::size_t i = 0; i < p.instances; ++i) {
        const std::uint64_t inst_seed = splitmix64(p.seed ^ (0xB0D50ULL + i));
        const double delta = p.delta > 0.0 ? p.delta : (p.identity ? 0.3 : 0.45);
        const CoverWitness cover =
            make_random_cover(p.d, p.k, delta, inst_seed, p.identity);
        auto map = [&cover](const Vec& x) { return phi_map(cover, x).second; };
        AntipodalConfig cfg;
        cfg.restarts = p.restarts;
        cfg.seed = inst_seed;
        AntipodalResult r = antipodal_search(map, p.d, p.tol, cfg);
        if (!p.identity && !r.found) {
            // existence is guaranteed, findability is not: one doubled-budget rerun
            cfg.restarts *= 2;
            cfg.max_steps = 240;
            cfg.seed = splitmix64(inst_seed + 1);
            r = antipodal_search(map, p.d, p.tol, cfg);
        }
        Json inst;
        inst["d"] = p.d;
        inst["k"] = p.k;
        inst["delta"] = delta;
        inst["centers"] = cover.centers.size();
        Json collisions = Json::array();
        if (r.found) {
            Json c;
            c["x"] = vec_to_json(r.x);
            c["g"] = r.g;
            collisions.push_back(std::move(c));
        }
        inst["collisions"] = std::move(collisions);
        inst["best_g"] = r.best_seen;
        const bool pass = p.identity ? r.best_seen >= 1.0 : r.found;
        inst["pass"] = pass;
        all_pass = all_pass && pass;
        instances.push_back(std::move(inst));
    }
    res.report["instances"] = std::move(instances);
    res.report["all_pass"] = all_pass;
    res.pass = all_pass;
    return res;
}

// --------------------------------------------------------------------------
// majority3-check

struct Majority3Params {
    std::size_t instances = 50;
    std::size_t dim = 2;
    std::uint64_t seed = 0;
    bool include_planted = true;
};

// Three unit normals at 120 degrees and the three antipodes of the normals:
// each half-space errs on exactly one atom, so min loss is exactly 1/3.
inline std::pair<Majority3Classifier, FiniteDistribution> planted_majority3_instance() {
    const double s3 = std::sqrt(3.0) / 2.0;
    Halfspace h1{{1.0, 0.0}}, h2{{-0.5, s3}}, h3{{-0.5, -s3}};
    std::vector<LabeledExample> atoms{
        LabeledExample({-1.0, 0.0}, +1),
        LabeledExample({0.5, -s3}, +1),
        LabeledExample({0.5, s3}, +1),
    };
    return {Majority3Classifier(h1, h2, h3), FiniteDistribution::uniform(std::move(atoms))};
}

inline CommandResult cmd_majority3_check(const Majority3Params& p) {
    CommandResult res;
    Json rows = Json::array();
    bool all_pass = true;
    bool planted_tight = !p.include_planted;
    for (std::size_t i = 0; i < p.instances; ++i) {
        Majority3Classifier voter = [&] {
            auto eng = make_engine(p.seed, 100 + i);
            return Majority3Classifier(Halfspace(unit_sphere_sample(eng, p.dim)),
                                       Halfspace(unit_sphere_sample(eng, p.dim)),
                                       Halfspace(unit_sphere_sample(eng, p.dim)));
        }();
        FiniteDistribution dist = [&] {
            auto eng = make_engine(p.seed, 500 + i);
            const std::size_t m = 3 + eng() % 10;
            std::vector<LabeledExample> atoms;
            for (std::size_t j = 0; j < m; ++j) {
                Vec x = unit_sphere_sample(eng, p.dim);
                atoms.emplace_back(x, evaluate(voter, x));
            }
            return FiniteDistribution::uniform(std::move(atoms));
        }();
        const Majority3Report rep = majority3_identity_check(voter, {dist});
        Json row = majority3_report_to_json(rep);
        row["instance"] = i;
        rows.push_back(std::move(row));
        all_pass = all_pass && rep.all_pass;
    }
    if (p.include_planted) {
        auto [voter, dist] = planted_majority3_instance();
        const Majority3Report rep = majority3_identity_check(voter, {dist});
        Json row = majority3_report_to_json(rep);
        row["instance"] = "planted";
        // equality: one error per half-space over three atoms
        planted_tight = rep.records.front().min_loss == 1.0 / 3.0;
        row["tight"] = planted_tight;
        rows.push_back(std::move(row));
        all_pass = all_pass && rep.all_pass;
    }
    res.report["records"] = std::move(rows);
    res.report["all_pass"] = all_pass;
    res.report["planted_tight"] = planted_tight;
    res.pass = all_pass && planted_tight;
    return res;
}

}  // namespace redlearn::cli
