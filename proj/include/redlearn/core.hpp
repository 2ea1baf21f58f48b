#pragma once

// Labeled examples, finitely supported distributions, hypotheses and losses.
// Everything is an immutable value after construction; distributions are
// finitely supported so expectations and optima are exactly computable.

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "redlearn/vec.hpp"

namespace redlearn {

constexpr double kInfiniteLoss = std::numeric_limits<double>::infinity();

// Normalization tolerances: constructors renormalize mass off by at most
// kMassRejectTol and reject anything worse.
constexpr double kMassCheckTol = 1e-12;
constexpr double kMassRejectTol = 1e-6;

struct LabeledExample {
    Vec point;
    int label = +1;  // +1 or -1 exactly

    LabeledExample() = default;
    LabeledExample(Vec p, int y) : point(std::move(p)), label(y) {
        if (label != +1 && label != -1) {
            throw std::invalid_argument("LabeledExample: label must be +1 or -1");
        }
    }

    friend bool operator==(const LabeledExample& a, const LabeledExample& b) {
        return a.label == b.label && a.point == b.point;
    }
    friend bool operator<(const LabeledExample& a, const LabeledExample& b) {
        if (a.label != b.label) return a.label < b.label;
        return a.point < b.point;
    }

    std::string describe() const {
        std::string s = "(";
        for (std::size_t i = 0; i < point.size(); ++i) {
            if (i) s += ", ";
            s += std::to_string(point[i]);
        }
        s += label > 0 ? "; +1)" : "; -1)";
        return s;
    }
};

struct Atom {
    LabeledExample example;
    double weight = 0.0;
};

// Finitely supported probability distribution over labeled examples.
// Duplicate (point, label) pairs are merged at construction; weights are
// renormalized to sum exactly to 1.
class FiniteDistribution {
  public:
    FiniteDistribution() = default;

    explicit FiniteDistribution(std::vector<Atom> atoms) {
        std::map<LabeledExample, double> merged;
        double total = 0.0;
        for (auto& a : atoms) {
            if (!(a.weight > 0.0)) {
                throw std::invalid_argument("FiniteDistribution: weights must be positive");
            }
            merged[a.example] += a.weight;
            total += a.weight;
        }
        if (merged.empty()) throw std::invalid_argument("FiniteDistribution: no atoms");
        if (std::abs(total - 1.0) > kMassRejectTol) {
            throw std::invalid_argument("FiniteDistribution: mass " + std::to_string(total) +
                                        " is off by more than " + std::to_string(kMassRejectTol));
        }
        atoms_.reserve(merged.size());
        for (auto& [ex, w] : merged) atoms_.push_back({ex, w / total});
    }

    static FiniteDistribution point_mass(LabeledExample ex) {
        return FiniteDistribution({Atom{std::move(ex), 1.0}});
    }

    static FiniteDistribution uniform(std::vector<LabeledExample> examples) {
        if (examples.empty()) throw std::invalid_argument("uniform: no examples");
        std::vector<Atom> atoms;
        atoms.reserve(examples.size());
        const double w = 1.0 / static_cast<double>(examples.size());
        for (auto& ex : examples) atoms.push_back({std::move(ex), w});
        return FiniteDistribution(std::move(atoms));
    }

    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t support_size() const { return atoms_.size(); }

    double total_mass() const {
        double s = 0.0;
        for (const auto& a : atoms_) s += a.weight;
        return s;
    }

    friend bool operator==(const FiniteDistribution& a, const FiniteDistribution& b) {
        if (a.atoms_.size() != b.atoms_.size()) return false;
        for (std::size_t i = 0; i < a.atoms_.size(); ++i) {
            if (!(a.atoms_[i].example == b.atoms_[i].example)) return false;
            if (std::abs(a.atoms_[i].weight - b.atoms_[i].weight) > kMassCheckTol) return false;
        }
        return true;
    }

  private:
    std::vector<Atom> atoms_;  // sorted by example, weights summing to 1
};

// lambda * a + (1 - lambda) * b
inline FiniteDistribution mix(const FiniteDistribution& a, const FiniteDistribution& b,
                              double lambda) {
    if (lambda < 0.0 || lambda > 1.0) throw std::invalid_argument("mix: lambda outside [0,1]");
    std::vector<Atom> atoms;
    for (const auto& at : a.atoms())
        if (lambda > 0.0) atoms.push_back({at.example, lambda * at.weight});
    for (const auto& at : b.atoms())
        if (lambda < 1.0) atoms.push_back({at.example, (1.0 - lambda) * at.weight});
    return FiniteDistribution(std::move(atoms));
}

// A hypothesis evaluates points to [-1, 1]; deterministic ones must return
// exactly +1 or -1.  A randomized hypothesis with value h(x) is read as
// predicting +1 with probability (1 + h(x)) / 2.
struct Hypothesis {
    enum class Kind { deterministic, randomized };

    Kind kind = Kind::deterministic;
    std::function<double(const Vec&)> eval;

    static Hypothesis deterministic(std::function<double(const Vec&)> f) {
        return Hypothesis{Kind::deterministic, std::move(f)};
    }
    static Hypothesis randomized(std::function<double(const Vec&)> f) {
        return Hypothesis{Kind::randomized, std::move(f)};
    }
    static Hypothesis constant(double value) {
        return Hypothesis{Kind::randomized, [value](const Vec&) { return value; }};
    }

    double operator()(const Vec& x) const {
        const double v = eval(x);
        if (kind == Kind::deterministic) {
            if (v != 1.0 && v != -1.0) {
                throw std::domain_error("Hypothesis: deterministic value not in {+1,-1}");
            }
        } else if (v < -1.0 - 1e-12 || v > 1.0 + 1e-12) {
            throw std::domain_error("Hypothesis: randomized value outside [-1,1]");
        }
        return v;
    }
};

using LossMap = std::function<double(const LabeledExample&)>;

// L_D = sum of weight * loss(atom); +inf as soon as a positive-weight atom
// has infinite loss.  A NaN loss marks the atom as undefined.
inline double expected_loss(const FiniteDistribution& dist, const LossMap& loss) {
    double total = 0.0;
    for (const auto& a : dist.atoms()) {
        const double l = loss(a.example);
        if (std::isnan(l)) {
            throw std::domain_error("expected_loss: loss undefined on atom " +
                                    a.example.describe());
        }
        if (l < 0.0) {
            throw std::domain_error("expected_loss: negative loss on atom " +
                                    a.example.describe());
        }
        if (l == kInfiniteLoss) return kInfiniteLoss;
        total += a.weight * l;
    }
    return total;
}

// Expected 0/1 loss.  The formula |h(x) - y| / 2 covers both cases: for
// deterministic h it is the misclassification indicator, for randomized h the
// expected classification error.
inline double zero_one_loss(const FiniteDistribution& dist, const Hypothesis& h) {
    return expected_loss(dist, [&h](const LabeledExample& z) {
        return 0.5 * std::abs(h(z.point) - static_cast<double>(z.label));
    });
}

// The involution D -> -D: flip every label, keep weights.
inline FiniteDistribution flip_labels(const FiniteDistribution& dist) {
    std::vector<Atom> atoms;
    atoms.reserve(dist.support_size());
    for (const auto& a : dist.atoms()) {
        atoms.push_back({LabeledExample(a.example.point, -a.example.label), a.weight});
    }
    return FiniteDistribution(std::move(atoms));
}

// Total variation distance, 1/2 * L1 over the union of supports.
inline double total_variation(const FiniteDistribution& d1, const FiniteDistribution& d2) {
    std::map<LabeledExample, double> diff;
    for (const auto& a : d1.atoms()) diff[a.example] += a.weight;
    for (const auto& a : d2.atoms()) diff[a.example] -= a.weight;
    double l1 = 0.0;
    for (const auto& [ex, d] : diff) l1 += std::abs(d);
    return 0.5 * l1;
}

}  // namespace redlearn
