#pragma once

// Concrete concept classes and brute-force combinatorial dimension search.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "redlearn/core.hpp"
#include "redlearn/rng.hpp"
#include "redlearn/vec.hpp"

namespace redlearn {

// Table entry: +1, -1, or 0 for "*" (undefined).
using TableEntry = std::int8_t;
constexpr TableEntry kStar = 0;

// Finite class as a table: rows are concepts, columns are domain points.
class FiniteConceptClass {
  public:
    FiniteConceptClass(std::vector<Vec> domain_points,
                       std::vector<std::vector<TableEntry>> table,
                       std::vector<std::string> names = {})
        : points_(std::move(domain_points)), table_(std::move(table)), names_(std::move(names)) {
        if (points_.empty() || table_.empty()) {
            throw std::invalid_argument("FiniteConceptClass: empty domain or class");
        }
        for (const auto& row : table_) {
            if (row.size() != points_.size()) {
                throw std::invalid_argument("FiniteConceptClass: row width != domain size");
            }
            for (TableEntry e : row) {
                if (e != +1 && e != -1 && e != kStar) {
                    throw std::invalid_argument("FiniteConceptClass: entry outside {+1,-1,*}");
                }
            }
        }
        std::set<std::vector<TableEntry>> seen(table_.begin(), table_.end());
        if (seen.size() != table_.size()) {
            throw std::invalid_argument("FiniteConceptClass: duplicate concept rows");
        }
        if (!names_.empty() && names_.size() != table_.size()) {
            throw std::invalid_argument("FiniteConceptClass: names/table size mismatch");
        }
        total_ = true;
        for (const auto& row : table_)
            for (TableEntry e : row)
                if (e == kStar) total_ = false;
    }

    std::size_t num_concepts() const { return table_.size(); }
    std::size_t num_points() const { return points_.size(); }
    bool is_total() const { return total_; }
    const std::vector<Vec>& points() const { return points_; }
    const std::vector<std::vector<TableEntry>>& table() const { return table_; }
    const std::vector<std::string>& names() const { return names_; }

    TableEntry value(std::size_t concept_idx, std::size_t point_idx) const {
        return table_.at(concept_idx).at(point_idx);
    }

    // Index of an exact point match; -1 when absent.
    std::ptrdiff_t find_point(const Vec& x) const {
        for (std::size_t j = 0; j < points_.size(); ++j)
            if (points_[j] == x) return static_cast<std::ptrdiff_t>(j);
        return -1;
    }

  private:
    std::vector<Vec> points_;
    std::vector<std::vector<TableEntry>> table_;
    std::vector<std::string> names_;
    bool total_ = false;
};

// U_d: the d projection functions h_i(x) = x_i on X = {+-1}^d.
inline FiniteConceptClass projection_class(unsigned d) {
    if (d < 1) throw std::invalid_argument("projection_class: d must be >= 1");
    if (d > 16) {
        throw std::length_error("projection_class: d > 16 would need a 2^d-column table");
    }
    const std::size_t n_points = std::size_t{1} << d;
    std::vector<Vec> points(n_points, Vec(d));
    for (std::size_t m = 0; m < n_points; ++m)
        for (unsigned i = 0; i < d; ++i) points[m][i] = (m >> i) & 1 ? +1.0 : -1.0;
    std::vector<std::vector<TableEntry>> table(d, std::vector<TableEntry>(n_points));
    std::vector<std::string> names(d);
    for (unsigned i = 0; i < d; ++i) {
        for (std::size_t m = 0; m < n_points; ++m)
            table[i][m] = points[m][i] > 0 ? TableEntry{+1} : TableEntry{-1};
        names[i] = "proj_" + std::to_string(i + 1);
    }
    return FiniteConceptClass(std::move(points), std::move(table), std::move(names));
}

namespace detail {

// Visit all k-subsets of {0..n-1}; stop early when visit returns true.
template <typename Visit>
bool for_each_subset(std::size_t n, std::size_t k, Visit visit) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
        if (visit(idx)) return true;
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) return false;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

inline double binomial(std::size_t n, std::size_t k) {
    double r = 1.0;
    for (std::size_t i = 0; i < k; ++i) r *= static_cast<double>(n - i) / static_cast<double>(i + 1);
    return r;
}

// A subset is shattered when every labeling is realized by a concept whose
// support covers it; realized patterns are collected as bitmasks.  Small
// subsets track the pattern set in one word.
inline bool is_shattered(const FiniteConceptClass& c, const std::vector<std::size_t>& subset) {
    const std::size_t k = subset.size();
    const std::uint64_t want = std::uint64_t{1} << k;
    if (k <= 6) {
        std::uint64_t seen = 0;
        const std::uint64_t all = (want == 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << want) - 1;
        for (const auto& row : c.table()) {
            std::uint64_t mask = 0;
            bool covered = true;
            for (std::size_t i = 0; i < k; ++i) {
                const TableEntry e = row[subset[i]];
                if (e == kStar) {
                    covered = false;
                    break;
                }
                if (e > 0) mask |= std::uint64_t{1} << i;
            }
            if (!covered) continue;
            seen |= std::uint64_t{1} << mask;
            if (seen == all) return true;
        }
        return false;
    }
    std::set<std::uint64_t> patterns;
    for (const auto& row : c.table()) {
        std::uint64_t mask = 0;
        bool covered = true;
        for (std::size_t i = 0; i < k; ++i) {
            const TableEntry e = row[subset[i]];
            if (e == kStar) {
                covered = false;
                break;
            }
            if (e > 0) mask |= std::uint64_t{1} << i;
        }
        if (!covered) continue;
        patterns.insert(mask);
        if (patterns.size() == want) return true;
    }
    return false;
}

}  // namespace detail

constexpr double kVcSearchBudget = 1e8;

// Exact VC dimension by exhaustive shattering search, sizes increasing, with
// early exit at the first size admitting no shattered subset.  Sizes above
// log2(|C|) cannot be shattered and are never searched.
inline unsigned vc_dimension(const FiniteConceptClass& c, double budget = kVcSearchBudget) {
    const std::size_t n = c.num_points();
    std::size_t max_size = 0;
    while ((std::size_t{1} << (max_size + 1)) <= c.num_concepts()) ++max_size;
    max_size = std::min(max_size, n);

    double work = 0.0;
    for (std::size_t k = 1; k <= max_size; ++k) {
        work += detail::binomial(n, k) * static_cast<double>(c.num_concepts());
        if (work > budget) {
            throw std::length_error(
                "vc_dimension: exhaustive search budget exceeded at subset size " +
                std::to_string(k) + "; use vc_lower_bound for a sampled estimate");
        }
        const bool found = detail::for_each_subset(
            n, k, [&](const std::vector<std::size_t>& s) { return detail::is_shattered(c, s); });
        if (!found) return static_cast<unsigned>(k - 1);
    }
    return static_cast<unsigned>(max_size);
}

// Sampled lower bound: best shattered size among random subsets.
inline unsigned vc_lower_bound(const FiniteConceptClass& c, std::size_t tries, std::uint64_t seed) {
    auto eng = make_engine(seed);
    const std::size_t n = c.num_points();
    std::size_t max_size = 0;
    while ((std::size_t{1} << (max_size + 1)) <= c.num_concepts()) ++max_size;
    max_size = std::min(max_size, n);
    unsigned best = 0;
    for (std::size_t k = best + 1; k <= max_size; ++k) {
        for (std::size_t t = 0; t < tries; ++t) {
            std::set<std::size_t> pick;
            while (pick.size() < k) pick.insert(static_cast<std::size_t>(eng() % n));
            std::vector<std::size_t> subset(pick.begin(), pick.end());
            if (detail::is_shattered(c, subset)) {
                best = static_cast<unsigned>(k);
                break;
            }
        }
        if (best < k) break;
    }
    return best;
}

// Transpose of the table; duplicate rows are merged and recorded by joining
// the column names with '='.  Defined for total classes only.
inline FiniteConceptClass dual_class(const FiniteConceptClass& c) {
    if (!c.is_total()) {
        throw std::invalid_argument("dual_class: dual is defined for total classes only");
    }
    std::map<std::vector<TableEntry>, std::vector<std::size_t>> rows;
    for (std::size_t j = 0; j < c.num_points(); ++j) {
        std::vector<TableEntry> row(c.num_concepts());
        for (std::size_t i = 0; i < c.num_concepts(); ++i) row[i] = c.value(i, j);
        rows[row].push_back(j);
    }
    // dual domain: one point per original concept
    std::vector<Vec> points;
    points.reserve(c.num_concepts());
    for (std::size_t i = 0; i < c.num_concepts(); ++i) {
        points.push_back(Vec{static_cast<double>(i)});
    }
    std::vector<std::vector<TableEntry>> table;
    std::vector<std::string> names;
    for (const auto& [row, sources] : rows) {
        table.push_back(row);
        std::string name;
        for (std::size_t s : sources) {
            if (!name.empty()) name += "=";
            name += "x" + std::to_string(s);
        }
        names.push_back(name);
    }
    return FiniteConceptClass(std::move(points), std::move(table), std::move(names));
}

inline unsigned dual_vc_dimension(const FiniteConceptClass& c, double budget = kVcSearchBudget) {
    return vc_dimension(dual_class(c), budget);
}

// Exact minimum of L_D over a finite class; '*' on an atom counts as a
// mistake.  Atoms must sit on domain points of the class.
inline double opt_over_class(const FiniteDistribution& dist, const FiniteConceptClass& c) {
    if (c.num_concepts() == 0) throw std::domain_error("opt_over_class: empty class");
    std::vector<std::size_t> cols;
    cols.reserve(dist.support_size());
    for (const auto& a : dist.atoms()) {
        const auto j = c.find_point(a.example.point);
        if (j < 0) {
            throw std::domain_error("opt_over_class: atom " + a.example.describe() +
                                    " is not a domain point of the class");
        }
        cols.push_back(static_cast<std::size_t>(j));
    }
    double best = kInfiniteLoss;
    for (std::size_t i = 0; i < c.num_concepts(); ++i) {
        double loss = 0.0;
        std::size_t k = 0;
        for (const auto& a : dist.atoms()) {
            const TableEntry v = c.value(i, cols[k++]);
            if (v != a.example.label) loss += a.weight;
        }
        best = std::min(best, loss);
    }
    return best;
}

// ---------------------------------------------------------------------------
// Geometric classifiers

struct Halfspace {
    Vec normal;
    double offset = 0.0;  // 0 for homogeneous

    Halfspace(Vec w, double b = 0.0) : normal(std::move(w)), offset(b) {
        if (norm(normal) == 0.0) throw std::invalid_argument("Halfspace: zero normal");
    }
};

// Partial linear classifier on the sphere, undefined inside the margin band.
struct MarginClassifier {
    Vec normal;  // unit
    double margin;

    MarginClassifier(Vec w, double gamma) : normal(normalized(w)), margin(gamma) {
        if (!(gamma > 0.0)) throw std::invalid_argument("MarginClassifier: margin must be > 0");
    }
};

struct Majority3Classifier {
    Halfspace h1, h2, h3;

    Majority3Classifier(Halfspace a, Halfspace b, Halfspace c)
        : h1(std::move(a)), h2(std::move(b)), h3(std::move(c)) {
        if (h1.offset != 0.0 || h2.offset != 0.0 || h3.offset != 0.0) {
            throw std::invalid_argument("Majority3Classifier: half-spaces must be homogeneous");
        }
        if (h1.normal.size() != h2.normal.size() || h2.normal.size() != h3.normal.size()) {
            throw std::invalid_argument("Majority3Classifier: mixed ambient dimensions");
        }
    }
};

inline int evaluate(const Halfspace& h, const Vec& x) {
    return sign_pm(dot(h.normal, x) + h.offset);
}

// Returns 0 for '*' inside the margin band.
inline int evaluate(const MarginClassifier& c, const Vec& x) {
    const double v = dot(c.normal, x);
    if (std::abs(v) < c.margin) return 0;
    return sign_pm(v);
}

inline int evaluate(const Majority3Classifier& c, const Vec& x) {
    const int s = evaluate(c.h1, x) + evaluate(c.h2, x) + evaluate(c.h3, x);
    return sign_pm(s);
}

inline Hypothesis to_hypothesis(const Halfspace& h) {
    return Hypothesis::deterministic(
        [h](const Vec& x) { return static_cast<double>(evaluate(h, x)); });
}

inline Hypothesis to_hypothesis(const Majority3Classifier& c) {
    return Hypothesis::deterministic(
        [c](const Vec& x) { return static_cast<double>(evaluate(c, x)); });
}

// m uniform-weight samples from the unit sphere S^n in R^{n+1}, rejected until
// |<w,x>| >= gamma and labeled sign<w,x>; realizable by construction.
inline FiniteDistribution sample_margin_distribution(unsigned n, const Vec& w, double gamma,
                                                     std::size_t m, std::uint64_t seed) {
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw std::invalid_argument("sample_margin_distribution: gamma outside (0,1)");
    }
    if (w.size() != n + 1) {
        throw std::invalid_argument("sample_margin_distribution: w must live in R^{n+1}");
    }
    const Vec u = normalized(w);
    auto eng = make_engine(seed);
    std::vector<LabeledExample> examples;
    examples.reserve(m);
    std::size_t consecutive_rejections = 0;
    while (examples.size() < m) {
        Vec x = unit_sphere_sample(eng, n + 1);
        const double v = dot(u, x);
        if (std::abs(v) < gamma) {
            if (++consecutive_rejections > 1000000) {
                throw std::invalid_argument(
                    "sample_margin_distribution: rejection stalled; margin too wide for S^" +
                    std::to_string(n));
            }
            continue;
        }
        consecutive_rejections = 0;
        examples.emplace_back(std::move(x), sign_pm(v));
    }
    return FiniteDistribution::uniform(std::move(examples));
}

}  // namespace redlearn
