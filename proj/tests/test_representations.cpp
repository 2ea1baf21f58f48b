#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "redlearn/cli.hpp"
#include "redlearn/representations.hpp"

using namespace redlearn;

TEST_CASE("gaussian projection sampler: shape, determinism, linearity, moments") {
    const auto rr = gaussian_projection_sampler(4, 3);
    const Representation r1 = rr.sample(42);
    const Representation r2 = rr.sample(42);
    REQUIRE(r1.matrix.size() == 3);
    REQUIRE(r1.matrix.front().size() == 5);
    for (std::size_t i = 0; i < 3; ++i) CHECK(r1.matrix[i] == r2.matrix[i]);  // bitwise

    const Representation r3 = rr.sample(43);
    CHECK(r3.matrix[0] != r1.matrix[0]);

    auto eng = make_engine(9);
    const Vec x = gaussian_vec(eng, 5);
    CHECK(dist(r1.apply(scaled(x, 2.5)), scaled(r1.apply(x), 2.5)) <= 1e-12);

    // mean over 10^6 entries within 3 sigma of 0
    const auto wide = gaussian_projection_sampler(99, 100);  // 10000 entries per draw
    double sum = 0.0;
    std::size_t count = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        const Representation r = wide.sample(s);
        for (const auto& row : r.matrix) {
            for (double v : row) {
                sum += v;
                ++count;
            }
        }
    }
    const double mean = sum / static_cast<double>(count);
    CHECK(count == 1000000);
    CHECK(std::abs(mean) <= 3.0 / std::sqrt(static_cast<double>(count)));
}

TEST_CASE("required dimension formula") {
    CHECK(required_dimension(0.1, 0.1, 1.0 / 3.0) == 415);  // ceil(90 ln 100)
    // halving alpha*delta from the anchor adds 62 = floor(90 ln 2) here
    CHECK(required_dimension(0.1, 0.05, 1.0 / 3.0) - required_dimension(0.1, 0.1, 1.0 / 3.0) == 62);
    // increments are always floor or ceil of (10/gamma^2) ln 2
    const double step = 90.0 * std::log(2.0);
    auto eng = make_engine(12);
    for (int i = 0; i < 50; ++i) {
        const double alpha = uniform(eng, 0.01, 0.45);
        const double delta = uniform(eng, 0.01, 0.9);
        const int diff = static_cast<int>(required_dimension(alpha, delta / 2.0, 1.0 / 3.0)) -
                         static_cast<int>(required_dimension(alpha, delta, 1.0 / 3.0));
        CHECK(diff >= static_cast<int>(std::floor(step)));
        CHECK(diff <= static_cast<int>(std::ceil(step)));
    }
    CHECK_THROWS_AS(required_dimension(0.6, 0.1, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(required_dimension(0.1, 1.5, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(required_dimension(0.1, 0.1, 1.5), std::invalid_argument);
}

TEST_CASE("sign flip rate: bound value, monotone d, determinism") {
    const auto rep = sign_flip_rate(10, 500, 1.0 / 3.0, 2000, 5);
    CHECK(rep.bound == doctest::Approx(3.857e-3).epsilon(1e-3));
    CHECK(rep.empirical_rate <= rep.bound + 3.0 * std::sqrt(rep.bound / 2000.0));

    const auto rep2 = sign_flip_rate(10, 500, 1.0 / 3.0, 2000, 5);
    CHECK(rep.flips == rep2.flips);  // determinism

    // large d at fixed trials: empirical rate 0
    const auto big = sign_flip_rate(10, 4000, 1.0 / 3.0, 500, 6);
    CHECK(big.empirical_rate == 0.0);
}

TEST_CASE("sign flip rate agrees with the explicit-matrix oracle at small scale") {
    const unsigned n = 3, d = 20;
    const double gamma = 0.3;
    const std::size_t trials = 20000;
    const auto fast = sign_flip_rate(n, d, gamma, trials, 11);
    const double slow = oracles::sign_flip_rate_explicit(n, d, gamma, trials, 12);
    // two independent Monte Carlo runs of the same law: compare within 5 sigma
    const double p = 0.5 * (fast.empirical_rate + slow);
    const double sigma = std::sqrt(2.0 * std::max(p * (1.0 - p), 1e-9) / trials);
    CHECK(std::abs(fast.empirical_rate - slow) <= 5.0 * sigma);
}

TEST_CASE("sign flip rate is dimension independent within noise") {
    const std::size_t trials = 20000;
    const auto lo = sign_flip_rate(10, 60, 1.0 / 3.0, trials, 21);
    const auto hi = sign_flip_rate(100, 60, 1.0 / 3.0, trials, 22);
    const double sigma = std::sqrt(lo.empirical_rate * (1 - lo.empirical_rate) / trials +
                                   hi.empirical_rate * (1 - hi.empirical_rate) / trials);
    if (sigma > 0.0) {
        CHECK(std::abs(lo.empirical_rate - hi.empirical_rate) <= 5.0 * sigma);
    } else {
        CHECK(lo.empirical_rate == hi.empirical_rate);
    }
}

TEST_CASE("empirical flip rate within bound across a seed sweep") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        for (unsigned d : {300u, 500u}) {
            const auto rep = sign_flip_rate(10, d, 1.0 / 3.0, 10000, seed);
            CHECK(rep.empirical_rate <=
                  rep.bound + 3.0 * std::sqrt(rep.bound * (1.0 - rep.bound) / 10000.0));
        }
    }
}

TEST_CASE("best halfspace fit: separable, contradictory, frozen XOR-like") {
    // strictly separable: exact zero
    auto eng = make_engine(3);
    const Vec w = unit_sphere_sample(eng, 2);
    const auto sep = sample_margin_distribution(1, w, 0.2, 8, 17);
    const auto fit = best_halfspace_fit(sep);
    CHECK(fit.exact);
    CHECK(fit.loss == 0.0);

    // contradictory labels on one point: nothing beats 1/2
    const FiniteDistribution contra(
        {{LabeledExample({1.0, 1.0}, +1), 0.5}, {LabeledExample({1.0, 1.0}, -1), 0.5}});
    CHECK(best_halfspace_fit(contra).loss == doctest::Approx(0.5).epsilon(1e-12));

    // frozen XOR-like instance: three positive points surround the origin
    // (no half-plane holds all three), one benign fourth point; min loss 1/4
    const FiniteDistribution xorish({
        {LabeledExample({1.0, 0.1}, +1), 0.25},
        {LabeledExample({-0.6, 0.8}, +1), 0.25},
        {LabeledExample({-0.5, -0.9}, +1), 0.25},
        {LabeledExample({0.9, -0.3}, +1), 0.25},
    });
    const auto xfit = best_halfspace_fit(xorish);
    CHECK(xfit.exact);
    CHECK(xfit.loss == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(xfit.loss == doctest::Approx(oracles::best_halfspace_loss_oracle(xorish)).epsilon(1e-12));
}

TEST_CASE("best halfspace fit equals the Gordan oracle on random small instances") {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        auto eng = make_engine(seed, 606);
        const std::size_t dim = 2 + seed % 2;  // 2 or 3
        const std::size_t m = 4 + eng() % 5;   // 4..8 points
        std::vector<LabeledExample> atoms;
        for (std::size_t i = 0; i < m; ++i) {
            atoms.emplace_back(unit_sphere_sample(eng, dim), uniform01(eng) < 0.5 ? +1 : -1);
        }
        const auto dist = FiniteDistribution::uniform(atoms);
        const auto fit = best_halfspace_fit(dist);
        REQUIRE(fit.exact);
        const double oracle = oracles::best_halfspace_loss_oracle(dist);
        CHECK(fit.loss == doctest::Approx(oracle).epsilon(1e-9));
    }
}

TEST_CASE("best halfspace fit refuses big instances without heuristic permission") {
    auto eng = make_engine(8);
    std::vector<LabeledExample> atoms;
    for (int i = 0; i < 20; ++i) {
        atoms.emplace_back(unit_sphere_sample(eng, 4), i % 2 ? +1 : -1);
    }
    const auto dist = FiniteDistribution::uniform(atoms);
    CHECK_THROWS_AS(best_halfspace_fit(dist, false), std::length_error);
    const auto fit = best_halfspace_fit(dist, true);  // heuristic mode works
    CHECK(fit.loss <= 0.5);
}

TEST_CASE("majority3 identity check: agreement, adversarial, planted equality") {
    auto eng = make_engine(77);
    const Majority3Classifier voter(Halfspace(unit_sphere_sample(eng, 2)),
                                    Halfspace(unit_sphere_sample(eng, 2)),
                                    Halfspace(unit_sphere_sample(eng, 2)));
    // concentrated where all three agree: every loss is 0
    Vec x = unit_sphere_sample(eng, 2);
    while (!(evaluate(voter.h1, x) == evaluate(voter.h2, x) &&
             evaluate(voter.h2, x) == evaluate(voter.h3, x))) {
        x = unit_sphere_sample(eng, 2);
    }
    const auto agree = FiniteDistribution::point_mass(LabeledExample(x, evaluate(voter, x)));
    const auto rep = majority3_identity_check(voter, {agree});
    CHECK(rep.all_pass);
    CHECK(rep.records.front().losses[0] == 0.0);
    CHECK(rep.records.front().losses[1] == 0.0);
    CHECK(rep.records.front().losses[2] == 0.0);

    // planted worst case: min loss exactly 1/3
    const auto [pvoter, pdist] = cli::planted_majority3_instance();
    const auto prep = majority3_identity_check(pvoter, {pdist});
    CHECK(prep.all_pass);
    CHECK(prep.records.front().min_loss == 1.0 / 3.0);

    // non-realizable suite distribution is a precondition error
    const auto bad = FiniteDistribution::point_mass(LabeledExample(x, -evaluate(voter, x)));
    CHECK_THROWS_AS(majority3_identity_check(voter, {bad}), std::invalid_argument);
}

TEST_CASE("helly certification: exact fixtures always pass") {
    const auto fx = cli::make_helly_exact_fixture(2, 10, 6, 25, 6, 3131);
    const auto rep = helly_certify(fx.repr, fx.cls, 2, 0.2, fx.samples);
    CHECK(rep.exact_on_samples);
    for (const auto& s : rep.samples) {
        CHECK(s.witnessed);
        CHECK(s.failing_subsets.empty());
    }
}

TEST_CASE("helly certification: threshold precondition") {
    const auto fx = cli::make_helly_exact_fixture(2, 8, 4, 2, 4, 77);
    CHECK_THROWS_AS(helly_certify(fx.repr, fx.cls, 2, 0.34, fx.samples), std::invalid_argument);
    CHECK_THROWS_AS(helly_certify(fx.repr, fx.cls, 2, 1.0 / 3.0, fx.samples),
                    std::invalid_argument);
}

TEST_CASE("helly certification localizes the planted violation") {
    const auto fx = cli::make_helly_planted_fixture();
    const auto rep = helly_certify(fx.repr, fx.cls, 2, 0.2, fx.samples);
    CHECK_FALSE(rep.exact_on_samples);
    REQUIRE(rep.samples.size() == 1);
    CHECK_FALSE(rep.samples.front().witnessed);
    REQUIRE(rep.samples.front().failing_subsets.size() == 1);
    CHECK(rep.samples.front().failing_subsets.front() == std::vector<std::size_t>{0, 1, 2});
    // the planted 3-subset is genuinely infeasible: Gordan agrees
    std::vector<Vec> qs;
    for (const auto& z : fx.samples.front()) {
        qs.push_back(scaled(fx.repr.apply(z.point), z.label));
    }
    CHECK_FALSE(oracles::gordan_feasible(qs));
}

TEST_CASE("sign-rank witness for two half-spaces on the line") {
    const auto cls = cli::parse_class_spec("2hs1d");
    const auto red = hard_svm_reduction(1);
    const auto wit = extract_signrank_witness(cls, red);
    CHECK(wit.verified);
    CHECK(wit.dim == 2);
    REQUIRE(wit.concept_vectors.size() == 2);
    REQUIRE(wit.point_vectors.size() == 2);
    for (std::size_t i = 0; i < cls.num_concepts(); ++i) {
        for (std::size_t j = 0; j < cls.num_points(); ++j) {
            CHECK(sign_pm(dot(wit.concept_vectors[i], wit.point_vectors[j])) == cls.value(i, j));
        }
    }
}

TEST_CASE("sign-rank witness for U_2 through the identity representation") {
    const auto cls = projection_class(2);
    const auto red = hard_svm_reduction(2);
    const auto wit = extract_signrank_witness(cls, red);
    CHECK(wit.verified);
    CHECK(wit.dim == 3);
    // scale freedom: scaling any w(c) by lambda > 0 preserves the sign table
    for (double lambda : {0.01, 3.0, 250.0}) {
        for (std::size_t i = 0; i < cls.num_concepts(); ++i) {
            const Vec scaled_w = scaled(wit.concept_vectors[i], lambda);
            for (std::size_t j = 0; j < cls.num_points(); ++j) {
                CHECK(sign_pm(dot(scaled_w, wit.point_vectors[j])) == cls.value(i, j));
            }
        }
    }
}

TEST_CASE("sign-rank extraction via the finite-loss minimax path") {
    // same 1-d class, but through a finite convex target so the pointwise-max
    // subgradient branch is exercised: the homogeneous hinge on W = R^1
    const auto cls = cli::parse_class_spec("2hs1d");
    Reduction red = hard_svm_reduction(1);
    SCOTask homogeneous_hinge;
    homogeneous_hinge.domain = ConvexDomain::all_of_rk(1);
    homogeneous_hinge.loss = [](const LabeledExample& z, const Vec& w) {
        return std::max(0.0, 1.0 - z.label * dot(w, z.point));
    };
    homogeneous_hinge.subgradient = [](const LabeledExample& z, const Vec& w) {
        if (1.0 - z.label * dot(w, z.point) > 0.0) {
            return scaled(z.point, -static_cast<double>(z.label));
        }
        return zeros(w.size());
    };
    homogeneous_hinge.name = "hinge-homogeneous-1d";
    red.target = homogeneous_hinge;
    const auto witness = extract_signrank_witness(cls, red, {}, 1e-6);
    CHECK(witness.verified);
}

TEST_CASE("sign-rank witness for a three-concept half-space class in the plane") {
    // labelings of four plane points by three strict-margin half-spaces
    const std::vector<Vec> points{{1.0, 0.2}, {-0.3, 1.0}, {-1.0, -0.4}, {0.6, -1.0}};
    const std::vector<Vec> normals{{1.0, 0.0}, {0.0, 1.0}, {-0.707, 0.707}};
    std::vector<std::vector<TableEntry>> table;
    for (const auto& w : normals) {
        std::vector<TableEntry> row;
        for (const auto& x : points) row.push_back(static_cast<TableEntry>(sign_pm(dot(w, x))));
        table.push_back(std::move(row));
    }
    const FiniteConceptClass cls(points, table);
    const auto wit = extract_signrank_witness(cls, hard_svm_reduction(2));
    CHECK(wit.verified);
    CHECK(wit.dim == 3);
    CHECK(signrank_witness_residual(wit, cls) == 0.0);
}

TEST_CASE("extraction rejects inexact and non-convex reductions") {
    const auto cls = projection_class(2);
    CHECK_THROWS_AS(extract_signrank_witness(cls, hinge_reduction(2)), std::invalid_argument);
    const std::vector<double> anchors{0.2, 0.8};
    CHECK_THROWS_AS(extract_signrank_witness(cls, nonconvex_reduction(cls, anchors)),
                    std::invalid_argument);
}

TEST_CASE("representation-to-reduction adapter") {
    // exact representation: claimed (gamma, gamma)
    const auto repr = Representation::identity(2);
    const auto red = representation_to_reduction(repr, 0.0);
    CHECK(red.exact);
    CHECK(red.claimed_beta(0.1) == doctest::Approx(0.1));

    // pulled-back loss equals target loss: L_{D1}(h1) = L_{D2}(h2)
    const auto suite = make_halfspace_suite(2, 4, 6, 0.2, 313);
    for (const auto& d : suite) {
        const auto pushed = pushforward(red, d);
        auto eng = make_engine(1);
        for (int i = 0; i < 20; ++i) {
            const Vec w = unit_sphere_sample(eng, 2);
            const Hypothesis h2 = Hypothesis::deterministic(
                [&w](const Vec& x) { return static_cast<double>(sign_pm(dot(w, x))); });
            CHECK(zero_one_loss(d, red.out_map(w)) ==
                  doctest::Approx(zero_one_loss(pushed, h2)).epsilon(1e-12));
        }
    }

    // identity representation: the reduction is the identity adapter
    const auto d = suite[0];
    CHECK(pushforward(red, d) == d);

    // with alpha = 0 the claimed pair at gamma = 0.1 is (0.1, 0.1): verify
    const auto rep = verify_reduction(red, suite, {}, 0.1, red.claimed_beta(0.1), 0.02);
    CHECK(rep.aggregate_pass);

    // a nontrivial linear representation keeps the loss identity
    const auto rr = gaussian_projection_sampler(1, 3);
    const auto lin = representation_to_reduction(rr.sample(5), 0.0);
    const auto pushed = pushforward(lin, d);
    CHECK(pushed.atoms().front().example.point.size() == 3);
}

TEST_CASE("tabulated representation rejects unknown points") {
    std::map<Vec, Vec> table{{{0.0}, {1.0, 0.0}}};
    const auto repr = Representation::tabulated(std::move(table), 2);
    CHECK(repr.apply({0.0}) == Vec{1.0, 0.0});
    CHECK_THROWS_AS(repr.apply({9.0}), std::domain_error);
}
