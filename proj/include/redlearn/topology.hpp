#pragma once

// Numerical side of the Borsuk-Ulam construction: ball covers of the sphere,
// the subordinate partition of unity, the chi/phi maps built from it, and a
// multi-start search for antipodal collisions phi(x) = phi(-x).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "redlearn/rng.hpp"
#include "redlearn/vec.hpp"

namespace redlearn {

constexpr double kHuge = std::numeric_limits<double>::infinity();

// Finite set of unit centers T with radius delta and one assignment w_t per
// center; the balls B_delta(t) must cover the sphere.
struct CoverWitness {
    std::vector<Vec> centers;      // unit vectors in R^{d+1}
    double delta = 0.0;
    std::vector<Vec> assignments;  // w_t in R^k

    CoverWitness(std::vector<Vec> c, double del, std::vector<Vec> w)
        : centers(std::move(c)), delta(del), assignments(std::move(w)) {
        if (centers.empty()) throw std::invalid_argument("CoverWitness: no centers");
        if (!(delta > 0.0)) throw std::invalid_argument("CoverWitness: delta must be > 0");
        if (assignments.size() != centers.size()) {
            throw std::invalid_argument("CoverWitness: one assignment per center required");
        }
        const std::size_t amb = centers.front().size();
        const std::size_t k = assignments.front().size();
        for (const auto& t : centers) {
            if (t.size() != amb) throw std::invalid_argument("CoverWitness: mixed center dims");
            if (std::abs(norm(t) - 1.0) > 1e-9) {
                throw std::invalid_argument("CoverWitness: centers must be unit vectors");
            }
        }
        for (const auto& w : assignments) {
            if (w.size() != k) throw std::invalid_argument("CoverWitness: mixed assignment dims");
        }
    }

    std::size_t sphere_dim() const { return centers.front().size() - 1; }
    std::size_t target_dim() const { return assignments.front().size(); }
};

inline double nearest_center_distance(const CoverWitness& cover, const Vec& x) {
    double best = kHuge;
    for (const auto& t : cover.centers) best = std::min(best, dist(x, t));
    return best;
}

// rho_t(x) proportional to max(0, delta - dist(x, t)): the distance from x to
// the complement of B_delta(t), normalized over the cover.
inline Vec partition_of_unity(const CoverWitness& cover, const Vec& x) {
    Vec w(cover.centers.size(), 0.0);
    double sum = 0.0;
    double nearest = kHuge;
    for (std::size_t i = 0; i < cover.centers.size(); ++i) {
        const double d = dist(x, cover.centers[i]);
        nearest = std::min(nearest, d);
        w[i] = std::max(0.0, cover.delta - d);
        sum += w[i];
    }
    if (sum <= 0.0) {
        throw std::domain_error("partition_of_unity: point not covered; nearest center at " +
                                std::to_string(nearest) + " > delta " +
                                std::to_string(cover.delta));
    }
    for (auto& v : w) v /= sum;
    return w;
}

// chi(x) = sum rho_t(x) t  (within delta of x),  phi(x) = sum rho_t(x) w_t.
inline std::pair<Vec, Vec> phi_map(const CoverWitness& cover, const Vec& x) {
    const Vec rho = partition_of_unity(cover, x);
    Vec chi = zeros(x.size());
    Vec phi = zeros(cover.target_dim());
    for (std::size_t i = 0; i < rho.size(); ++i) {
        if (rho[i] == 0.0) continue;
        axpy(chi, rho[i], cover.centers[i]);
        axpy(phi, rho[i], cover.assignments[i]);
    }
    return {std::move(chi), std::move(phi)};
}

struct CoverageReport {
    double worst_distance = 0.0;  // best estimate of max-min distance to centers
    bool covered = false;
    double residual = 0.0;        // delta - worst_distance
};

// Probabilistic check plus multi-start ascent of the distance-to-nearest-
// center function; coverage itself is only certified up to this estimate.
inline CoverageReport verify_coverage(const CoverWitness& cover, std::size_t probes = 100000,
                                      std::size_t restarts = 16, std::uint64_t seed = 1) {
    const std::size_t amb = cover.centers.front().size();
    double worst = 0.0;
    Vec worst_x;
    for (std::size_t p = 0; p < probes; ++p) {
        auto eng = make_engine(seed, p);
        Vec x = unit_sphere_sample(eng, amb);
        const double d = nearest_center_distance(cover, x);
        if (d > worst) {
            worst = d;
            worst_x = x;
        }
    }
    // Ascend from the worst probes: move away from the nearest center.
    for (std::size_t r = 0; r < restarts; ++r) {
        auto eng = make_engine(seed, 900000 + r);
        Vec x = (r == 0 && !worst_x.empty()) ? worst_x : unit_sphere_sample(eng, amb);
        double step = 0.25;
        double d = nearest_center_distance(cover, x);
        for (std::size_t it = 0; it < 200; ++it) {
            const Vec* nearest = &cover.centers.front();
            double dn = kHuge;
            for (const auto& t : cover.centers) {
                const double dt = dist(x, t);
                if (dt < dn) {
                    dn = dt;
                    nearest = &t;
                }
            }
            Vec away = sub(x, *nearest);
            if (norm(away) < 1e-12) away = unit_sphere_sample(eng, amb);
            Vec cand = normalized(add(x, scaled(normalized(away), step)));
            const double dc = nearest_center_distance(cover, cand);
            if (dc > d) {
                x = std::move(cand);
                d = dc;
            } else {
                step *= 0.5;
                if (step < 1e-9) break;
            }
        }
        worst = std::max(worst, d);
    }
    CoverageReport rep;
    rep.worst_distance = worst;
    rep.covered = worst <= cover.delta;
    rep.residual = cover.delta - worst;
    return rep;
}

// Greedy farthest-point cover of S^d with target covering radius; assignments
// are either w_t = t ("identity", k = d+1) or seeded Gaussian points in R^k.
inline CoverWitness make_random_cover(std::size_t d, std::size_t k, double delta,
                                      std::uint64_t seed, bool identity_assignments = false,
                                      std::size_t max_centers = 20000) {
    if (identity_assignments && k != d + 1) {
        throw std::invalid_argument("make_random_cover: identity assignments need k = d+1");
    }
    const std::size_t amb = d + 1;
    const double target_radius = delta / 1.25;  // slack between cover radius and delta
    // candidate pool
    const std::size_t pool_size = 20000;
    std::vector<Vec> pool(pool_size);
    for (std::size_t i = 0; i < pool_size; ++i) {
        auto eng = make_engine(seed, 31000 + i);
        pool[i] = unit_sphere_sample(eng, amb);
    }
    std::vector<double> dist_to_centers(pool_size, kHuge);
    std::vector<Vec> centers;
    centers.push_back(pool[0]);
    for (;;) {
        double far = 0.0;
        std::size_t far_idx = 0;
        for (std::size_t i = 0; i < pool_size; ++i) {
            dist_to_centers[i] = std::min(dist_to_centers[i], dist(pool[i], centers.back()));
            if (dist_to_centers[i] > far) {
                far = dist_to_centers[i];
                far_idx = i;
            }
        }
        if (far <= target_radius || centers.size() >= max_centers) break;
        centers.push_back(pool[far_idx]);
    }
    std::vector<Vec> assignments;
    assignments.reserve(centers.size());
    if (identity_assignments) {
        assignments = centers;
    } else {
        for (std::size_t i = 0; i < centers.size(); ++i) {
            auto eng = make_engine(seed, 77000 + i);
            assignments.push_back(gaussian_vec(eng, k));
        }
    }
    CoverWitness cover(std::move(centers), delta, std::move(assignments));
    CoverageReport cov = verify_coverage(cover, 20000, 8, seed);
    if (!cov.covered) {
        throw std::runtime_error("make_random_cover: cover verification failed, worst distance " +
                                 std::to_string(cov.worst_distance) + " > delta " +
                                 std::to_string(delta));
    }
    return cover;
}

// ---------------------------------------------------------------------------
// Antipodal collision search

struct AntipodalResult {
    Vec x;
    double g = kHuge;     // ||map(x) - map(-x)|| at the returned point
    double best_seen = kHuge;  // minimum over every probe evaluated
    bool found = false;
    std::size_t evaluations = 0;
};

struct AntipodalConfig {
    std::size_t restarts = 64;
    std::size_t max_steps = 120;
    double fd_step = 1e-6;
    std::uint64_t seed = 1;
};

// Minimizes g(x) = ||map(x) - map(-x)|| over the sphere by damped
// Gauss-Newton on the residual with finite-difference Jacobians, restarted
// from seeded random points.  Existence (k <= d) does not imply findability;
// callers rerun with a doubled budget before declaring failure.
inline AntipodalResult antipodal_search(const std::function<Vec(const Vec&)>& map,
                                        std::size_t sphere_dim, double tol,
                                        const AntipodalConfig& cfg = {}) {
    const std::size_t amb = sphere_dim + 1;
    AntipodalResult out;

    auto residual = [&](const Vec& x) { return sub(map(x), map(scaled(x, -1.0))); };
    auto record = [&](const Vec& x, const Vec& r) {
        const double g = norm(r);
        ++out.evaluations;
        if (g < out.best_seen) {
            out.best_seen = g;
            out.x = x;
            out.g = g;
        }
        return g;
    };

    for (std::size_t restart = 0; restart < cfg.restarts && !out.found; ++restart) {
        auto eng = make_engine(cfg.seed, restart);
        Vec x = unit_sphere_sample(eng, amb);
        Vec r = residual(x);
        double g = record(x, r);
        double lambda = 1e-3;
        for (std::size_t step = 0; step < cfg.max_steps; ++step) {
            if (g <= tol) break;
            const std::size_t k = r.size();
            // finite-difference Jacobian of the residual, column per ambient coordinate
            std::vector<Vec> jac(amb);
            for (std::size_t l = 0; l < amb; ++l) {
                Vec xp = x, xm = x;
                xp[l] += cfg.fd_step;
                xm[l] -= cfg.fd_step;
                const Vec rp = residual(normalized(xp));
                const Vec rm = residual(normalized(xm));
                jac[l] = scaled(sub(rp, rm), 0.5 / cfg.fd_step);
            }
            // normal equations (J^T J + lambda I) s = J^T r in R^{amb}
            std::vector<Vec> a(amb, Vec(amb, 0.0));
            Vec rhs(amb, 0.0);
            for (std::size_t i = 0; i < amb; ++i) {
                for (std::size_t j = 0; j < amb; ++j) {
                    double s = 0.0;
                    for (std::size_t c = 0; c < k; ++c) s += jac[i][c] * jac[j][c];
                    a[i][j] = s;
                }
                a[i][i] += lambda;
                rhs[i] = dot(jac[i], r);
            }
            // Gaussian elimination with partial pivoting
            Vec s(amb, 0.0);
            {
                std::vector<Vec> m = a;
                Vec b = rhs;
                bool singular = false;
                for (std::size_t col = 0; col < amb; ++col) {
                    std::size_t piv = col;
                    for (std::size_t row = col + 1; row < amb; ++row) {
                        if (std::abs(m[row][col]) > std::abs(m[piv][col])) piv = row;
                    }
                    if (std::abs(m[piv][col]) < 1e-14) {
                        singular = true;
                        break;
                    }
                    std::swap(m[piv], m[col]);
                    std::swap(b[piv], b[col]);
                    for (std::size_t row = col + 1; row < amb; ++row) {
                        const double f = m[row][col] / m[col][col];
                        for (std::size_t cc = col; cc < amb; ++cc) m[row][cc] -= f * m[col][cc];
                        b[row] -= f * b[col];
                    }
                }
                if (singular) break;
                for (std::size_t col = amb; col-- > 0;) {
                    double v = b[col];
                    for (std::size_t cc = col + 1; cc < amb; ++cc) v -= m[col][cc] * s[cc];
                    s[col] = v / m[col][col];
                }
            }
            Vec cand = x;
            axpy(cand, -1.0, s);
            if (norm(cand) < 1e-9) break;
            cand = normalized(cand);
            const Vec rc = residual(cand);
            const double gc = record(cand, rc);
            if (gc < g) {
                x = std::move(cand);
                r = rc;
                g = gc;
                lambda = std::max(lambda / 3.0, 1e-12);
            } else {
                lambda *= 4.0;
                if (lambda > 1e8) break;
            }
        }
        if (out.best_seen <= tol) out.found = true;
    }
    return out;
}

}  // namespace redlearn
