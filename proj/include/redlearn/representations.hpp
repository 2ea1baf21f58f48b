#pragma once

// Half-space representations: Gaussian random projections and the margin
// sign-flip experiment, heuristic/exact half-space fitting, majority-of-3
// identity checks, Helly exactness certification, and minimax sign-rank
// witness extraction from exact reductions.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "redlearn/classes.hpp"
#include "redlearn/core.hpp"
#include "redlearn/reductions.hpp"
#include "redlearn/rng.hpp"
#include "redlearn/sco.hpp"

namespace redlearn {

struct Representation {
    enum class Kind { identity, linear, tabulated };

    Kind kind = Kind::identity;
    std::size_t target_dim = 0;
    std::vector<Vec> matrix;       // linear: target_dim rows
    std::map<Vec, Vec> table;      // tabulated

    static Representation identity(std::size_t dim) {
        Representation r;
        r.kind = Kind::identity;
        r.target_dim = dim;
        return r;
    }
    static Representation linear(std::vector<Vec> m) {
        if (m.empty()) throw std::invalid_argument("Representation: empty matrix");
        Representation r;
        r.kind = Kind::linear;
        r.target_dim = m.size();
        r.matrix = std::move(m);
        return r;
    }
    static Representation tabulated(std::map<Vec, Vec> t, std::size_t dim) {
        Representation r;
        r.kind = Kind::tabulated;
        r.target_dim = dim;
        r.table = std::move(t);
        return r;
    }

    Vec apply(const Vec& x) const {
        switch (kind) {
            case Kind::identity: return x;
            case Kind::linear: {
                Vec y(matrix.size());
                for (std::size_t i = 0; i < matrix.size(); ++i) y[i] = dot(matrix[i], x);
                return y;
            }
            case Kind::tabulated: {
                auto it = table.find(x);
                if (it == table.end()) {
                    throw std::domain_error("Representation: point not tabulated");
                }
                return it->second;
            }
        }
        throw std::logic_error("Representation: bad kind");
    }
};

struct RandomizedRepresentation {
    std::function<Representation(std::uint64_t)> sampler;
    std::size_t target_dim = 0;

    Representation sample(std::uint64_t seed) const { return sampler(seed); }
};

// Distribution over linear maps R^{n+1} -> R^d with independent N(0,1)
// entries; identical seeds yield bitwise-identical matrices.
inline RandomizedRepresentation gaussian_projection_sampler(unsigned n, unsigned d) {
    if (n < 1 || d < 1) {
        throw std::invalid_argument("gaussian_projection_sampler: n, d must be >= 1");
    }
    RandomizedRepresentation rr;
    rr.target_dim = d;
    rr.sampler = [n, d](std::uint64_t seed) {
        auto eng = make_engine(seed, 0xA11CEULL);
        std::vector<Vec> rows(d);
        for (auto& row : rows) row = gaussian_vec(eng, n + 1);
        return Representation::linear(std::move(rows));
    };
    return rr;
}

// d = ceil((10 / gamma^2) * ln(1 / (alpha * delta))), clamped to >= 1.
inline unsigned required_dimension(double alpha, double delta, double gamma) {
    if (!(alpha > 0.0 && alpha < 0.5)) {
        throw std::invalid_argument("required_dimension: alpha outside (0, 1/2)");
    }
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("required_dimension: delta outside (0, 1)");
    }
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw std::invalid_argument("required_dimension: gamma outside (0, 1)");
    }
    const double d = 10.0 / (gamma * gamma) * std::log(1.0 / (alpha * delta));
    return static_cast<unsigned>(std::max(1.0, std::ceil(d)));
}

namespace detail {

// Inverse-CDF sampler for |<w,x>| conditioned on being >= gamma, where w, x
// are independent uniform points of S^n.  The cosine density is proportional
// to (1 - c^2)^{(n-2)/2}; substituting c = sin(theta) turns it into
// cos^{n-1}(theta) on [asin(gamma), pi/2], which is smooth for every n >= 1,
// so a trapezoid CDF table inverts it accurately.
class MarginCosineSampler {
  public:
    MarginCosineSampler(unsigned n, double gamma) {
        const double lo = std::asin(gamma);
        const double hi = std::asin(1.0);
        const std::size_t cells = 4096;
        theta_.resize(cells + 1);
        cdf_.resize(cells + 1);
        std::vector<double> density(cells + 1);
        for (std::size_t i = 0; i <= cells; ++i) {
            theta_[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(cells);
            density[i] = std::pow(std::cos(theta_[i]), static_cast<double>(n) - 1.0);
        }
        cdf_[0] = 0.0;
        for (std::size_t i = 1; i <= cells; ++i) {
            cdf_[i] = cdf_[i - 1] + 0.5 * (density[i - 1] + density[i]) * (theta_[i] - theta_[i - 1]);
        }
        const double total = cdf_.back();
        if (!(total > 0.0)) {
            throw std::invalid_argument("MarginCosineSampler: empty margin region");
        }
        for (auto& v : cdf_) v /= total;
    }

    // Signed cosine: magnitude from the truncated law, sign uniform.
    double sample(std::mt19937_64& eng) const {
        const double u = uniform01(eng);
        const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
        const std::size_t i = std::min<std::size_t>(
            std::max<std::ptrdiff_t>(it - cdf_.begin(), 1), cdf_.size() - 1);
        const double span = cdf_[i] - cdf_[i - 1];
        const double frac = span > 0.0 ? (u - cdf_[i - 1]) / span : 0.0;
        const double theta = theta_[i - 1] + frac * (theta_[i] - theta_[i - 1]);
        const double c = std::sin(theta);
        return (eng() & 1) ? c : -c;
    }

  private:
    std::vector<double> theta_;
    std::vector<double> cdf_;
};

}  // namespace detail

struct SignFlipReport {
    unsigned n = 0;
    unsigned d = 0;
    double gamma = 0.0;
    std::size_t trials = 0;
    std::size_t flips = 0;
    double empirical_rate = 0.0;
    double bound = 0.0;
    std::uint64_t seed = 0;
};

// Monte Carlo estimate of Pr[sign<r(w), r(x)> != sign<w, x>] over random
// Gaussian projections r: R^{n+1} -> R^d and margin pairs |<w,x>| >= gamma,
// against the analytic bound 4 exp(-d gamma^2 / 8).
//
// The projected inner product is simulated through its exact law rather than
// by materializing d x (n+1) matrices: for unit w, x with cosine c the rows
// give i.i.d. bivariate normal pairs, and
//   <r(w), r(x)> = ((1+c)/2) A - ((1-c)/2) B,   A, B ~ chi^2_d independent.
// The ambient dimension n enters through the law of c, exactly as in the
// matrix experiment.  (The explicit-matrix pipeline is kept as a test oracle.)
inline SignFlipReport sign_flip_rate(unsigned n, unsigned d, double gamma, std::size_t trials,
                                     std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("sign_flip_rate: trials must be >= 1");
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw std::invalid_argument("sign_flip_rate: gamma outside (0, 1)");
    }
    detail::MarginCosineSampler cosine(n, gamma);
    SignFlipReport rep;
    rep.n = n;
    rep.d = d;
    rep.gamma = gamma;
    rep.trials = trials;
    rep.seed = seed;
    rep.bound = 4.0 * std::exp(-static_cast<double>(d) * gamma * gamma / 8.0);
    std::size_t flips = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        auto eng = make_engine(seed, t);
        const double c = cosine.sample(eng);
        const double a = chi_square_sample(eng, d);
        const double b = chi_square_sample(eng, d);
        const double projected = 0.5 * (1.0 + c) * a - 0.5 * (1.0 - c) * b;
        if (sign_pm(projected) != sign_pm(c)) ++flips;
    }
    rep.flips = flips;
    rep.empirical_rate = static_cast<double>(flips) / static_cast<double>(trials);
    return rep;
}

// ---------------------------------------------------------------------------
// Best homogeneous half-space fit

struct HalfspaceFit {
    double loss = 1.0;
    Vec w;
    bool exact = false;
};

namespace detail {

inline double fit_loss(const FiniteDistribution& dist, const Vec& w) {
    double loss = 0.0;
    for (const auto& a : dist.atoms()) {
        if (sign_pm(dot(w, a.example.point)) != a.example.label) loss += a.weight;
    }
    return loss;
}

inline void consider(const FiniteDistribution& dist, const Vec& w, HalfspaceFit& best) {
    if (norm(w) < 1e-12) return;
    const double l = fit_loss(dist, w);
    if (l < best.loss) {
        best.loss = l;
        best.w = w;
    }
}

inline Vec cross3(const Vec& a, const Vec& b) {
    return Vec{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

}  // namespace detail

constexpr std::size_t kFitExactMaxPoints = 12;
constexpr std::size_t kFitExactMaxDim = 3;

// Minimum zero-one loss over homogeneous half-spaces.  Exact for dimension
// <= 3 and support <= 12 by enumerating the cells of the central hyperplane
// arrangement (every cell of the arrangement on the unit sphere of w-space
// contains a candidate direction); heuristic upper bound otherwise.
inline HalfspaceFit best_halfspace_fit(const FiniteDistribution& dist,
                                       bool allow_heuristic = true, std::uint64_t seed = 1) {
    const std::size_t m = dist.support_size();
    const std::size_t dim = dist.atoms().front().example.point.size();
    for (const auto& a : dist.atoms()) {
        if (a.example.point.size() != dim) {
            throw std::invalid_argument("best_halfspace_fit: mixed dimensions");
        }
    }
    HalfspaceFit best;
    if (dim <= kFitExactMaxDim && m <= kFitExactMaxPoints) {
        best.exact = true;
        std::vector<Vec> pts;
        for (const auto& a : dist.atoms()) {
            if (norm(a.example.point) > 1e-12) pts.push_back(normalized(a.example.point));
        }
        if (dim == 1) {
            detail::consider(dist, Vec{+1.0}, best);
            detail::consider(dist, Vec{-1.0}, best);
        } else if (dim == 2) {
            // One candidate per angular cell: midpoints between consecutive
            // boundary angles phi_i +- pi/2.
            std::vector<double> bounds;
            for (const auto& p : pts) {
                const double phi = std::atan2(p[1], p[0]);
                for (double t : {phi + M_PI / 2.0, phi - M_PI / 2.0}) {
                    t = std::remainder(t, 2.0 * M_PI);
                    bounds.push_back(t);
                }
            }
            if (bounds.empty()) bounds.push_back(0.0);
            std::sort(bounds.begin(), bounds.end());
            for (std::size_t i = 0; i < bounds.size(); ++i) {
                const double a = bounds[i];
                const double b = i + 1 < bounds.size() ? bounds[i + 1] : bounds.front() + 2.0 * M_PI;
                const double mid = 0.5 * (a + b);
                detail::consider(dist, Vec{std::cos(mid), std::sin(mid)}, best);
            }
        } else {
            // Vertices of the spherical arrangement are intersections of two
            // boundary circles; perturbing into the four adjacent quadrants
            // reaches every cell that has a vertex, and the fallbacks handle
            // arrangements with fewer than two distinct circles.
            const double eps = 1e-6;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                for (std::size_t j = i + 1; j < pts.size(); ++j) {
                    Vec u = detail::cross3(pts[i], pts[j]);
                    if (norm(u) < 1e-9) continue;
                    u = normalized(u);
                    for (double su : {+1.0, -1.0}) {
                        const Vec base = scaled(u, su);
                        detail::consider(dist, base, best);
                        for (double si : {+1.0, -1.0}) {
                            for (double sj : {+1.0, -1.0}) {
                                Vec cand = base;
                                axpy(cand, si * eps, pts[i]);
                                axpy(cand, sj * eps, pts[j]);
                                detail::consider(dist, cand, best);
                            }
                        }
                    }
                }
            }
            for (const auto& p : pts) {
                // two directions spanning the plane orthogonal to p
                Vec ref = std::abs(p[0]) < 0.9 ? Vec{1, 0, 0} : Vec{0, 1, 0};
                Vec b1 = normalized(detail::cross3(p, ref));
                Vec b2 = detail::cross3(p, b1);
                for (const Vec& b : {b1, b2}) {
                    for (double s : {+1.0, -1.0}) {
                        Vec cand = scaled(b, s);
                        detail::consider(dist, cand, best);
                        for (double sp : {+1.0, -1.0}) {
                            Vec c2 = cand;
                            axpy(c2, sp * eps, p);
                            detail::consider(dist, c2, best);
                        }
                    }
                }
                detail::consider(dist, p, best);
                detail::consider(dist, scaled(p, -1.0), best);
            }
            for (std::size_t i = 0; i < 3; ++i) {
                detail::consider(dist, unit(3, i), best);
                detail::consider(dist, scaled(unit(3, i), -1.0), best);
            }
        }
        return best;
    }

    if (!allow_heuristic) {
        throw std::length_error("best_halfspace_fit: instance too large for exact mode (m <= " +
                                std::to_string(kFitExactMaxPoints) + ", dim <= " +
                                std::to_string(kFitExactMaxDim) + ")");
    }
    best.exact = false;
    SolverReport svm = hard_svm(dist, true);
    if (svm.feasible) {
        best.loss = 0.0;
        best.w = svm.point;
        best.exact = true;  // zero loss is a matching lower bound
        return best;
    }
    detail::consider(dist, svm.point, best);
    SCOTask hinge = make_hinge_task(dim);
    for (std::size_t r = 0; r < 16; ++r) {
        auto eng = make_engine(seed, 7000 + r);
        SolveConfig cfg;
        cfg.max_iters = 4000;
        cfg.norm_cap = 4.0 * static_cast<double>(r + 1);
        SolverReport rep = solve_subgradient(hinge, dist, cfg);
        Vec w(rep.point.begin(), rep.point.end() - 1);  // drop the offset: homogeneous fit
        detail::consider(dist, w, best);
        detail::consider(dist, unit_sphere_sample(eng, dim), best);
    }
    return best;
}

// ---------------------------------------------------------------------------
// Majority-of-3 identity representation check

struct Majority3Record {
    std::string dist_id;
    std::array<double, 3> losses{};
    double min_loss = 1.0;
    std::size_t winner = 0;
    bool pass = false;
};

struct Majority3Report {
    std::vector<Majority3Record> records;
    bool all_pass = false;
};

// For every realizable D, some component half-space has loss <= 1/3.  On
// uniform supports the comparison 3 * min_errors <= atom count is integer
// arithmetic, hence exact.
inline Majority3Report majority3_identity_check(const Majority3Classifier& c,
                                                const std::vector<FiniteDistribution>& suite) {
    Majority3Report report;
    report.all_pass = true;
    std::size_t idx = 0;
    for (const auto& dist : suite) {
        if (zero_one_loss(dist, to_hypothesis(c)) != 0.0) {
            throw std::invalid_argument("majority3_identity_check: suite distribution " +
                                        std::to_string(idx) + " is not realizable by the voter");
        }
        Majority3Record rec;
        rec.dist_id = "D" + std::to_string(idx++);
        const Halfspace* hs[3] = {&c.h1, &c.h2, &c.h3};
        bool uniform_weights = true;
        const double w0 = dist.atoms().front().weight;
        for (const auto& a : dist.atoms()) uniform_weights &= (a.weight == w0);
        std::array<std::size_t, 3> errors{};
        for (std::size_t i = 0; i < 3; ++i) {
            double loss = 0.0;
            for (const auto& a : dist.atoms()) {
                if (evaluate(*hs[i], a.example.point) != a.example.label) {
                    loss += a.weight;
                    ++errors[i];
                }
            }
            rec.losses[i] = loss;
            if (loss < rec.min_loss) {
                rec.min_loss = loss;
                rec.winner = i;
            }
        }
        if (uniform_weights) {
            rec.pass = 3 * errors[rec.winner] <= dist.support_size();
        } else {
            rec.pass = rec.min_loss <= 1.0 / 3.0 + 1e-12;
        }
        if (!rec.pass) report.all_pass = false;
        report.records.push_back(std::move(rec));
    }
    return report;
}

// ---------------------------------------------------------------------------
// Helly exactness certification

struct HellySampleResult {
    bool witnessed = false;
    Vec witness;
    std::vector<std::vector<std::size_t>> failing_subsets;  // indices into the sample
};

struct HellyReport {
    bool exact_on_samples = false;
    double alpha = 0.0;
    unsigned d = 0;
    std::vector<HellySampleResult> samples;
};

// For alpha < 1/(d+1), an alpha-representation by half-spaces in R^d is
// exact; certify per sample by finding w_S consistent on the mapped sample.
// On failure the infeasible (d+1)-subsets are enumerated as diagnostics.
inline HellyReport helly_certify(const Representation& repr, const FiniteConceptClass& cls,
                                 unsigned d, double alpha,
                                 const std::vector<std::vector<LabeledExample>>& samples) {
    if (!(alpha < 1.0 / (static_cast<double>(d) + 1.0))) {
        throw std::invalid_argument(
            "helly_certify: exactness only follows for alpha < 1/(d+1) = " +
            std::to_string(1.0 / (static_cast<double>(d) + 1.0)));
    }
    HellyReport report;
    report.alpha = alpha;
    report.d = d;
    report.exact_on_samples = true;
    for (const auto& sample : samples) {
        if (sample.empty()) throw std::invalid_argument("helly_certify: empty sample");
        if (opt_over_class(FiniteDistribution::uniform(sample), cls) != 0.0) {
            throw std::invalid_argument("helly_certify: sample not realizable by the class");
        }
        std::vector<LabeledExample> mapped;
        mapped.reserve(sample.size());
        for (const auto& z : sample) mapped.emplace_back(repr.apply(z.point), z.label);
        HellySampleResult res;
        SolverReport svm = hard_svm(FiniteDistribution::uniform(mapped), true);
        if (svm.feasible) {
            res.witnessed = true;
            res.witness = svm.point;
        } else {
            report.exact_on_samples = false;
            const std::size_t k = std::min<std::size_t>(d + 1, mapped.size());
            detail::for_each_subset(mapped.size(), k, [&](const std::vector<std::size_t>& idx) {
                std::vector<LabeledExample> sub;
                for (std::size_t i : idx) sub.push_back(mapped[i]);
                if (!hard_svm(FiniteDistribution::uniform(sub), true).feasible) {
                    res.failing_subsets.push_back(idx);
                }
                return false;
            });
        }
        report.samples.push_back(std::move(res));
    }
    return report;
}

// ---------------------------------------------------------------------------
// Sign-rank witness extraction

struct SignRankWitness {
    std::size_t dim = 0;            // d + 1
    std::vector<Vec> concept_vectors;  // w(c), one per concept row
    std::vector<Vec> point_vectors;    // phi(x), one per domain point
    bool verified = false;
};

inline double signrank_witness_residual(const SignRankWitness& wit, const FiniteConceptClass& cls) {
    for (std::size_t i = 0; i < cls.num_concepts(); ++i) {
        for (std::size_t j = 0; j < cls.num_points(); ++j) {
            if (sign_pm(dot(wit.concept_vectors[i], wit.point_vectors[j])) != cls.value(i, j)) {
                return 1.0;
            }
        }
    }
    return 0.0;
}

// Builds a sign-rank witness from an exact reduction to a convex target:
// per concept, solve the game min over w of max over x of the target loss at
// r_in(x, c(x)) (value 0 when the reduction is exact); embed W into
// {x_{d+1} = 1}; per domain point, separate the anchor sets V_{x,+1},
// V_{x,-1} by an affine hyperplane and read it as a homogeneous one in
// R^{d+1}.  Points where every concept agrees get the constant functional
// +-e_{d+1}.  The witness is verified exhaustively on all |C| x |X| pairs
// before it is returned.
inline SignRankWitness extract_signrank_witness(const FiniteConceptClass& cls,
                                                const Reduction& red,
                                                const SolveConfig& cfg = {},
                                                double tolerance = 1e-6) {
    if (!cls.is_total()) {
        throw std::invalid_argument("extract_signrank_witness: class must be total");
    }
    if (!red.exact) {
        throw std::invalid_argument("extract_signrank_witness: reduction must be exact");
    }
    if (!red.target.convex) {
        throw std::invalid_argument("extract_signrank_witness: target task must be convex");
    }
    const std::size_t d = red.target.domain.ambient_dim;
    const std::size_t nc = cls.num_concepts();
    const std::size_t np = cls.num_points();

    // Step 1: minimax anchors w_c with pointwise-max loss <= tolerance.
    std::vector<Vec> anchors(nc);
    for (std::size_t i = 0; i < nc; ++i) {
        std::vector<LabeledExample> pushed;
        pushed.reserve(np);
        for (std::size_t j = 0; j < np; ++j) {
            pushed.push_back(red.in_map(LabeledExample(cls.points()[j], cls.value(i, j))));
        }
        Vec w;
        double residual = kInfiniteLoss;
        if (red.target.infinity_valued) {
            SolverReport svm = hard_svm(FiniteDistribution::uniform(pushed), true);
            if (!svm.feasible) {
                throw std::runtime_error(
                    "extract_signrank_witness: target separation infeasible for concept " +
                    std::to_string(i));
            }
            // Scale the separator down; the pointwise max loss becomes ||w||^2.
            w = scaled(svm.point, std::sqrt(0.01 * tolerance / norm2(svm.point)));
            residual = 0.0;
            for (const auto& z : pushed) residual = std::max(residual, red.target.loss(z, w));
        } else {
            // Subgradient descent on the pointwise max of convex losses, with
            // a geometrically grown cap when the domain is unbounded.
            auto max_loss = [&](const Vec& v, std::size_t& arg) {
                double f = -1.0;
                for (std::size_t k = 0; k < pushed.size(); ++k) {
                    const double l = red.target.loss(pushed[k], v);
                    if (l > f) {
                        f = l;
                        arg = k;
                    }
                }
                return f;
            };
            for (double cap = 8.0; cap <= 1048576.0 && !(residual <= tolerance); cap *= 2.0) {
                ConvexDomain domain = red.target.domain.bounded()
                                          ? red.target.domain
                                          : ConvexDomain::ball(zeros(d), cap);
                Vec x = domain.project(domain.some_point());
                std::size_t arg = 0;
                double best_f = max_loss(x, arg);
                Vec best_x = x;
                const std::size_t iters = std::max<std::size_t>(cfg.max_iters, 20000);
                for (std::size_t t = 0; t < iters && best_f > 0.5 * tolerance; ++t) {
                    const double f = max_loss(x, arg);
                    if (f < best_f) {
                        best_f = f;
                        best_x = x;
                    }
                    Vec g = red.target.subgradient(pushed[arg], x);
                    const double gn2 = norm2(g);
                    if (gn2 == 0.0) break;
                    axpy(x, -f / gn2, g);  // Polyak toward 0
                    x = domain.project(std::move(x));
                }
                residual = best_f;
                w = best_x;
                if (red.target.domain.bounded()) break;
            }
        }
        if (!(residual <= tolerance)) {
            throw std::runtime_error("extract_signrank_witness: minimax residual " +
                                     std::to_string(residual) + " above tolerance for concept " +
                                     std::to_string(i));
        }
        anchors[i] = std::move(w);
    }

    SignRankWitness wit;
    wit.dim = d + 1;
    wit.concept_vectors.resize(nc);
    for (std::size_t i = 0; i < nc; ++i) {
        Vec w = anchors[i];
        w.push_back(1.0);  // embed W into the hyperplane {x_{d+1} = 1}
        wit.concept_vectors[i] = std::move(w);
    }

    // Step 2: separating functional per domain point.
    wit.point_vectors.resize(np);
    for (std::size_t j = 0; j < np; ++j) {
        std::vector<LabeledExample> labeled;
        bool has_pos = false, has_neg = false;
        for (std::size_t i = 0; i < nc; ++i) {
            const int y = cls.value(i, j);
            (y > 0 ? has_pos : has_neg) = true;
            labeled.emplace_back(anchors[i], y);
        }
        if (!has_pos || !has_neg) {
            // Unanimous point: the constant functional on the embedding
            // coordinate realizes the shared label.
            Vec phi = zeros(d + 1);
            phi[d] = has_pos ? +1.0 : -1.0;
            wit.point_vectors[j] = std::move(phi);
            continue;
        }
        SolverReport sep = hard_svm(FiniteDistribution::uniform(labeled), false);
        if (!sep.feasible) {
            throw std::runtime_error(
                "extract_signrank_witness: separation infeasible at domain point " +
                std::to_string(j));
        }
        wit.point_vectors[j] = sep.point;  // (normal, offset) = homogeneous in R^{d+1}
    }

    if (signrank_witness_residual(wit, cls) != 0.0) {
        throw std::runtime_error(
            "extract_signrank_witness: exhaustive sign verification failed");
    }
    wit.verified = true;
    return wit;
}

// ---------------------------------------------------------------------------
// Representations are reductions

// r_in(x, y) = (r(x), y), r_out(h)(x) = h(r(x)); claimed (gamma, gamma +
// alpha) for every gamma >= 0.  The target is PAC learning of homogeneous
// half-spaces in the representation's dimension, solved by hard_svm with a
// half-space-fit fallback.
inline Reduction representation_to_reduction(const Representation& repr, double alpha) {
    if (alpha < 0.0) throw std::invalid_argument("representation_to_reduction: alpha < 0");
    Reduction red;
    red.name = "representation";
    auto repr_copy = std::make_shared<Representation>(repr);
    red.in_map = [repr_copy](const LabeledExample& z) {
        return LabeledExample(repr_copy->apply(z.point), z.label);
    };
    red.out_map = [repr_copy](const Vec& w) {
        return Hypothesis::deterministic([repr_copy, w](const Vec& x) {
            return static_cast<double>(sign_pm(dot(w, repr_copy->apply(x))));
        });
    };
    red.claimed_beta = [alpha](double gamma) { return gamma + alpha; };
    red.exact = (alpha == 0.0);
    red.target.name = "pac-halfspace";
    red.target.domain = ConvexDomain::all_of_rk(repr.target_dim);
    red.solve = [](const FiniteDistribution& pushed, double gamma, const SolveConfig&) {
        TargetSolution sol;
        SolverReport svm = hard_svm(pushed, true);
        if (svm.feasible) {
            sol.point = svm.point;
            sol.achieved = 0.0;
            sol.opt_estimate = 0.0;
            sol.certified = true;
            sol.ok = true;
            return sol;
        }
        HalfspaceFit fit = best_halfspace_fit(pushed);
        sol.point = fit.w;
        sol.achieved = fit.loss;
        sol.opt_estimate = fit.exact ? fit.loss : 0.0;
        sol.certified = fit.exact || fit.loss <= gamma;
        sol.ok = !fit.w.empty();
        return sol;
    };
    return red;
}

}  // namespace redlearn
