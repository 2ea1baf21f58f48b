// Acceptance suite: one line per criterion, exit 0 iff all pass.
// Every tolerance is pinned here, in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "redlearn/cli.hpp"
#include "redlearn/classes.hpp"
#include "redlearn/reductions.hpp"
#include "redlearn/representations.hpp"
#include "redlearn/topology.hpp"

using namespace redlearn;

namespace {

int failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void report(int id, const std::string& name, bool pass, double seconds,
            const std::string& detail = "") {
    std::printf("%s  criterion %2d  %-28s  %6.1fs%s%s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
                seconds, detail.empty() ? "" : "  ", detail.c_str());
    if (!pass) ++failures;
}

// 1. VC and dual VC of the projection classes, exact integers, < 10 s.
void criterion_1() {
    Timer timer;
    bool pass = true;
    std::string detail;
    for (unsigned d : {2u, 4u, 8u}) {
        const auto res = cli::cmd_vc({"proj:" + std::to_string(d), kVcSearchBudget});
        const unsigned vc = res.report.at("vc").get<unsigned>();
        const unsigned dual = res.report.at("dual_vc").get<unsigned>();
        const unsigned expected_vc = static_cast<unsigned>(std::floor(std::log2(d)));
        pass = pass && vc == expected_vc && dual == d;
        detail += "proj:" + std::to_string(d) + " vc=" + std::to_string(vc) +
                  " dual=" + std::to_string(dual) + " ";
    }
    pass = pass && timer.seconds() < 10.0;
    report(1, "projection dimensions", pass, timer.seconds(), detail);
}

// 2. Trivial reduction at alpha = 0.01 over a 16-distribution suite:
//    pulled-back loss <= (1 + alpha)/2 + 0.02 and achieved target loss within
//    0.02 of min{p+, p-}.  < 30 s.
void criterion_2() {
    Timer timer;
    const double alpha = 0.01;
    const auto red = trivial_reduction();
    const auto suite = make_label_suite(16, 20240801);
    SolveConfig cfg;
    cfg.target_alpha = alpha;
    const auto rep = verify_reduction(red, suite, cfg, alpha, red.claimed_beta(alpha), 0.02);
    bool pass = rep.aggregate_pass && rep.records.size() == 16;
    for (std::size_t i = 0; i < suite.size(); ++i) {
        const auto& r = rep.records[i];
        pass = pass && r.pulled_back_01 <= 0.5 * (1.0 + alpha) + 0.02;
        double p_plus = 0.0;
        for (const auto& a : suite[i].atoms()) {
            if (a.example.label > 0) p_plus += a.weight;
        }
        pass = pass && std::abs(r.achieved - std::min(p_plus, 1.0 - p_plus)) <= 0.02;
    }
    pass = pass && timer.seconds() < 30.0;
    report(2, "trivial reduction", pass, timer.seconds());
}

// 3. Hinge reduction on 8 separable 10-atom suites in R^2: target loss
//    <= 0.05 and pulled-back loss <= 0.05 + 0.02.  < 2 min.
void criterion_3() {
    Timer timer;
    const double alpha = 0.05;
    const auto red = hinge_reduction(2);
    const auto suite = make_margin_mixture_suite(2, 8, 10, 0.2, 314159);
    const auto rep = verify_reduction(red, suite, {}, alpha, red.claimed_beta(alpha), 0.02);
    bool pass = rep.aggregate_pass && rep.records.size() == 8;
    for (const auto& r : rep.records) {
        pass = pass && r.achieved <= alpha && r.pulled_back_01 <= alpha + 0.02;
    }
    pass = pass && timer.seconds() < 120.0;
    report(3, "hinge reduction", pass, timer.seconds());
}

// 4. Hard-SVM reduction on the same suites: pulled-back loss exactly 0 and
//    exactness witness opt <= 0.02 via rescaling.  < 2 min.
void criterion_4() {
    Timer timer;
    const double alpha = 0.05;
    const auto red = hard_svm_reduction(2);
    const auto suite = make_margin_mixture_suite(2, 8, 10, 0.2, 314159);
    const auto rep = verify_reduction(red, suite, {}, alpha, red.claimed_beta(alpha), 0.02);
    bool pass = rep.aggregate_pass && rep.records.size() == 8;
    for (const auto& r : rep.records) {
        pass = pass && r.pulled_back_01 == 0.0 && r.achieved <= 0.02;
    }
    pass = pass && timer.seconds() < 120.0;
    report(4, "hard-svm reduction", pass, timer.seconds());
}

// 5. Random projection: gamma = 1/3, d in {300, 500}, 1e5 trials, 10 seeds.
//    Empirical rate <= bound + 3 sqrt(bound / trials) in every run; rates at
//    n = 10 and n = 100 agree within 5 combined sigma; the d = 500 bound is
//    about 3.86e-3.  < 5 min.
void criterion_5() {
    Timer timer;
    const double gamma = 1.0 / 3.0;
    const std::size_t trials = 100000;
    bool pass = true;
    std::string detail;
    for (unsigned d : {300u, 500u}) {
        for (unsigned n : {10u, 100u}) {
            for (std::uint64_t seed = 1; seed <= 10; ++seed) {
                const auto rep = sign_flip_rate(n, d, gamma, trials, seed);
                const double margin = 3.0 * std::sqrt(rep.bound / static_cast<double>(trials));
                pass = pass && rep.empirical_rate <= rep.bound + margin;
            }
        }
        // dimension independence at this d: compare mean rates over one seed
        const auto lo = sign_flip_rate(10, d, gamma, trials, 99);
        const auto hi = sign_flip_rate(100, d, gamma, trials, 98);
        const double sigma =
            std::sqrt(lo.empirical_rate * (1 - lo.empirical_rate) / trials +
                      hi.empirical_rate * (1 - hi.empirical_rate) / trials);
        if (sigma > 0.0) {
            pass = pass && std::abs(lo.empirical_rate - hi.empirical_rate) < 5.0 * sigma;
        } else {
            pass = pass && lo.empirical_rate == hi.empirical_rate;
        }
    }
    const double bound500 = 4.0 * std::exp(-500.0 * gamma * gamma / 8.0);
    pass = pass && std::abs(bound500 - 3.857e-3) < 1e-5;
    detail = "bound(d=500)=" + std::to_string(bound500);
    pass = pass && timer.seconds() < 300.0;
    report(5, "random projection bound", pass, timer.seconds(), detail);
}

// 6. Majority-of-3 across 50 random realizable instances plus the planted
//    worst case: min loss <= 1/3 exactly, equality on the planted instance.
//    < 30 s.
void criterion_6() {
    Timer timer;
    cli::Majority3Params p;
    p.instances = 50;
    p.dim = 2;
    p.seed = 60001;
    p.include_planted = true;
    const auto res = cli::cmd_majority3_check(p);
    bool pass = res.pass && res.report.at("planted_tight").get<bool>();
    pass = pass && timer.seconds() < 30.0;
    report(6, "majority-of-3", pass, timer.seconds());
}

// 7. Helly certifier: d = 2, alpha = 0.2, 100/100 samples witnessed; the
//    planted violation is rejected with the failing 3-subset identified.
//    < 1 min.
void criterion_7() {
    Timer timer;
    const auto fx = cli::make_helly_exact_fixture(2, 10, 6, 100, 6, 70707);
    const auto rep = helly_certify(fx.repr, fx.cls, 2, 0.2, fx.samples);
    bool pass = rep.exact_on_samples && rep.samples.size() == 100;
    std::size_t witnessed = 0;
    for (const auto& s : rep.samples) witnessed += s.witnessed ? 1 : 0;
    pass = pass && witnessed == 100;

    const auto planted = cli::make_helly_planted_fixture();
    const auto bad = helly_certify(planted.repr, planted.cls, 2, 0.2, planted.samples);
    pass = pass && !bad.exact_on_samples;
    pass = pass && bad.samples.size() == 1 && !bad.samples.front().witnessed;
    const auto& fails = bad.samples.front().failing_subsets;
    pass = pass && fails.size() == 1 && fails.front() == std::vector<std::size_t>{0, 1, 2};
    pass = pass && timer.seconds() < 60.0;
    report(7, "helly certifier", pass, timer.seconds(),
           "witnessed=" + std::to_string(witnessed) + "/100");
}

// 8. Sign-rank extraction for two half-spaces in R^1 and for U_2, both
//    through exact hard-SVM reductions; exhaustive sign check.  < 1 min.
void criterion_8() {
    Timer timer;
    bool pass = true;
    for (const std::string spec : {"2hs1d", "proj:2"}) {
        const auto cls = cli::parse_class_spec(spec);
        const std::size_t d = cls.points().front().size();
        const auto wit = extract_signrank_witness(cls, hard_svm_reduction(d));
        pass = pass && wit.verified && wit.dim == d + 1;
        for (std::size_t i = 0; i < cls.num_concepts() && pass; ++i) {
            for (std::size_t j = 0; j < cls.num_points(); ++j) {
                pass = pass &&
                       sign_pm(dot(wit.concept_vectors[i], wit.point_vectors[j])) == cls.value(i, j);
            }
        }
    }
    pass = pass && timer.seconds() < 60.0;
    report(8, "sign-rank extraction", pass, timer.seconds());
}

// 9. Borsuk-Ulam demo: 20 random covers with k <= d in {2, 3} yield a
//    collision g <= 1e-4; 20 identity covers with k = d + 1, delta = 0.3
//    never probe below g = 1.  < 3 min.
void criterion_9() {
    Timer timer;
    bool pass = true;
    std::size_t found = 0;
    struct Combo {
        std::size_t d, k, count;
    };
    const std::vector<Combo> combos{{2, 1, 4}, {2, 2, 6}, {3, 1, 2}, {3, 2, 4}, {3, 3, 4}};
    std::size_t instance = 0;
    for (const auto& combo : combos) {
        for (std::size_t i = 0; i < combo.count; ++i, ++instance) {
            const std::uint64_t seed = splitmix64(0x9A11 + instance);
            const auto cover = make_random_cover(combo.d, combo.k, 0.45, seed);
            auto map = [&cover](const Vec& x) { return phi_map(cover, x).second; };
            AntipodalConfig cfg;
            cfg.seed = seed;
            auto res = antipodal_search(map, combo.d, 1e-4, cfg);
            if (!res.found) {
                cfg.restarts *= 2;
                cfg.max_steps = 240;
                cfg.seed = splitmix64(seed + 1);
                res = antipodal_search(map, combo.d, 1e-4, cfg);
            }
            pass = pass && res.found;
            found += res.found ? 1 : 0;
        }
    }
    double min_best = kHuge;
    for (std::size_t d : {2, 3}) {
        for (std::size_t i = 0; i < 10; ++i) {
            const std::uint64_t seed = splitmix64(0xB0B0 + 10 * d + i);
            const auto cover = make_random_cover(d, d + 1, 0.3, seed, true);
            auto map = [&cover](const Vec& x) { return phi_map(cover, x).second; };
            AntipodalConfig cfg;
            cfg.restarts = 8;
            cfg.max_steps = 40;
            cfg.seed = seed;
            const auto res = antipodal_search(map, d, 1.0, cfg);
            pass = pass && !res.found && res.best_seen >= 1.0;
            min_best = std::min(min_best, res.best_seen);
        }
    }
    pass = pass && timer.seconds() < 180.0;
    report(9, "borsuk-ulam demo", pass, timer.seconds(),
           "collisions=" + std::to_string(found) + "/20 identity min g=" +
               std::to_string(min_best));
}

// 10. Module property suites at their stated tolerances.  The full set runs
//     as the unit-test binaries; the named invariants are re-checked here.
void criterion_10() {
    Timer timer;
    bool pass = true;

    // loss complement identity to 1e-12
    const auto suite = make_label_suite(8, 1001);
    for (const auto& d : suite) {
        const Hypothesis h = Hypothesis::constant(0.37);
        pass = pass && std::abs(zero_one_loss(d, h) + zero_one_loss(flip_labels(d), h) - 1.0) <=
                           1e-12;
    }

    // pushforward mass to 1e-12
    const auto red = trivial_reduction();
    for (const auto& d : suite) {
        pass = pass && std::abs(pushforward(red, d).total_mass() - 1.0) <= 1e-12;
    }

    // convexity and subgradient inequalities to 1e-9 on 1000 random pairs
    const SCOTask hinge = make_hinge_task(2);
    auto eng = make_engine(4242);
    for (int i = 0; i < 1000 && pass; ++i) {
        const LabeledExample z({uniform(eng, -2, 2), uniform(eng, -2, 2)},
                               uniform01(eng) < 0.5 ? +1 : -1);
        const Vec u = gaussian_vec(eng, 3);
        const Vec v = gaussian_vec(eng, 3);
        Vec mid = scaled(add(u, v), 0.5);
        pass = pass && hinge.loss(z, mid) <= 0.5 * (hinge.loss(z, u) + hinge.loss(z, v)) + 1e-9;
        const Vec g = hinge.subgradient(z, u);
        pass = pass && hinge.loss(z, v) >= hinge.loss(z, u) + dot(g, sub(v, u)) - 1e-9;
    }

    // partition-of-unity normalization to 1e-12
    const auto cover = make_random_cover(2, 1, 0.45, 77);
    for (int i = 0; i < 200 && pass; ++i) {
        const Vec x = unit_sphere_sample(eng, 3);
        const Vec rho = partition_of_unity(cover, x);
        double sum = 0.0;
        for (std::size_t j = 0; j < rho.size(); ++j) {
            pass = pass && rho[j] >= 0.0;
            if (dist(x, cover.centers[j]) >= cover.delta) pass = pass && rho[j] == 0.0;
            sum += rho[j];
        }
        pass = pass && std::abs(sum - 1.0) <= 1e-12;
    }

    // seed determinism: bitwise identical projection matrices
    const auto rr = gaussian_projection_sampler(6, 4);
    const auto r1 = rr.sample(123), r2 = rr.sample(123);
    for (std::size_t i = 0; i < r1.matrix.size(); ++i) pass = pass && r1.matrix[i] == r2.matrix[i];

    report(10, "module property suites", pass, timer.seconds());
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    if (failures == 0) {
        std::printf("ACCEPTANCE: all criteria passed\n");
        return 0;
    }
    std::printf("ACCEPTANCE: %d criterion(s) failed\n", failures);
    return 1;
}
