#include "slra/experiments.hpp"

#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

using namespace slra;

TEST_CASE("toy table") {
    const auto rows = run_toy(5);
    REQUIRE(rows.size() == 5);
    const double lambdas[] = {1.0, 0.5, 1.0 / 6.0, -1.0 / 12.0, 7.0 / 60.0};
    const double xs[] = {1.0, -1.0, -1.0, -1.0, 1.0};
    for (int i = 0; i < 5; ++i) {
        CHECK(rows[i].n == i + 1);
        CHECK(std::abs(rows[i].lambda - lambdas[i]) <= 1e-12);
        CHECK(rows[i].x == xs[i]);
    }
    CHECK_THROWS_AS(run_toy(0), DomainError);
}

TEST_CASE("parallel_for") {
    std::vector<int> hits(100, 0);
    parallel_for(100, [&](long i) { hits[i] += 1; }, 4);
    for (int h : hits) CHECK(h == 1);
    CHECK_THROWS_WITH_AS(parallel_for(50, [](long i) {
        if (i == 7 || i == 30) throw std::runtime_error("trial " + std::to_string(i));
    }, 3), "trial 7", std::runtime_error);

    setenv("SLRA_THREADS", "1", 1);
    CHECK(worker_count() == 1);
    setenv("SLRA_THREADS", "junk", 1);
    CHECK(worker_count() >= 1);
    unsetenv("SLRA_THREADS");
}

TEST_CASE("study aggregation") {
    StudyConfig cfg;
    cfg.trials = 1;
    cfg.iters = 0;
    const StudyReport r = run_study(cfg);
    const StudyTrial t = run_study_trial(cfg, 0);
    for (const MethodSummary* m : r.methods()) {
        REQUIRE(m->mean_primal.size() == 1);
        CHECK(std::isfinite(m->mean_primal[0]));
    }
    // dual at Lambda^0 = 0 is -N*(0) for DA
    CHECK(r.da.mean_dual[0] == t.da.dual[0]);
    CHECK(r.da.mean_gtdist == t.da.gtdist);

    cfg.iters = 15;
    const StudyReport one = run_study(cfg);
    const StudyTrial tr = run_study_trial(cfg, 0);
    CHECK(one.ada.mean_primal == tr.ada.primal);
    CHECK(one.mod_ada.mean_dual == tr.mod_ada.dual);
    CHECK(one.da.mean_gtdist == tr.da.gtdist);
    CHECK(one.da.mean_singvals == tr.da.singvals);
    CHECK(one.mean_singvals_truth == tr.singvals_truth);

    // reproducible and independent of the worker count
    cfg.trials = 3;
    setenv("SLRA_THREADS", "1", 1);
    const StudyReport a = run_study(cfg);
    setenv("SLRA_THREADS", "3", 1);
    const StudyReport b = run_study(cfg);
    unsetenv("SLRA_THREADS");
    CHECK(a.da.mean_primal == b.da.mean_primal);
    CHECK(a.ada.mean_dual == b.ada.mean_dual);
    CHECK(a.mod_ada.gtdist == b.mod_ada.gtdist);

    StudyConfig bad;
    bad.sigma0 = 0.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("study sanity") {
    StudyConfig cfg;
    cfg.trials = 3;
    cfg.iters = 60;
    const StudyReport noisy = run_study(cfg);
    // the truth has rank 8; noise lifts the trailing singular values
    CHECK(noisy.mean_singvals_truth[8] < 1e-8 * noisy.mean_singvals_truth[0]);
    CHECK(noisy.mean_singvals_noisy[9] > noisy.mean_singvals_truth[9]);
    CHECK(noisy.da.mean_singvals[9] < 0.05 * noisy.mean_singvals_noisy[9]);
    // primal and dual approach each other
    const auto& d = noisy.ada;
    CHECK(d.mean_primal.back() - d.mean_dual.back() < 0.1 * (d.mean_primal.front() - d.mean_dual.front()));

    cfg.noise = 0.0;
    const StudyReport clean = run_study(cfg);
    CHECK(clean.da.mean_gtdist < 0.1 * noisy.da.mean_gtdist);
}

TEST_CASE("frequency estimation trial without noise") {
    FreqestConfig cfg;
    cfg.snr_levels = {300.0};
    cfg.trials = 1;
    const FreqestTrial t = run_freqest_trial(cfg, 0, 0);
    const double scale = hankel_from_vector(sample_signal(cfg.model), cfg.spec).norm();
    CHECK(t.converged);
    CHECK(t.fro_da_clean < 1e-6 * scale);
    CHECK(t.fro_esprit_clean < 1e-6 * scale);
    CHECK(std::abs(t.fro_da - t.fro_esprit) < 1e-6 * scale);

    FreqestConfig bad;
    bad.spec = HankelSpec{100, 100};
    CHECK_THROWS_AS(bad.validate(), ShapeError);
}

TEST_CASE("frequency estimation trial with noise") {
    FreqestConfig cfg;
    cfg.snr_levels = {10.0};
    cfg.trials = 1;
    const FreqestTrial t = run_freqest_trial(cfg, 0, 0);
    CHECK(t.converged);
    CHECK(t.sigma0 > 0.0);
    CHECK(t.fro_da < t.fro_esprit);
    CHECK(t.scaled_fro_diff() == doctest::Approx((t.fro_esprit - t.fro_da) * std::pow(10.0, 0.5)));
}

TEST_CASE("histogram") {
    const Histogram h = make_histogram({0.0, 1.0, 2.0, 3.0, 4.0}, 2);
    CHECK(h.lo == 0.0);
    CHECK(h.hi == 4.0);
    REQUIRE(h.counts.size() == 2);
    CHECK(h.counts[0] + h.counts[1] == 5);
    CHECK_THROWS_AS(make_histogram({1.0}, 0), DomainError);
}

TEST_CASE("solve entry point") {
    // rank-2 Hankel plus tiny noise with sigma0 between sigma_2 and sigma_3
    const HankelSpec spec{20, 20};
    CVec v(spec.length());
    for (Index k = 0; k < v.size(); ++k) v[k] = std::polar(1.0, 0.3 * k) + 0.5 * std::polar(1.0, -1.1 * k);
    Rng rng(1);
    const Mat data = add_matrix_noise(hankel_from_vector(v, spec), 1e-3, rng);
    const RVec s = singular_values(data);
    SolveOptions o;
    o.sigma0 = 0.5 * (s[1] + s[2]);
    const SolveOutcome r = solve_hankel(data, spec, o);
    CHECK(r.rank == 2);

    SolveOptions h;
    h.rank_hint = 2;
    CHECK(solve_hankel(data, spec, h).rank == 2);

    const SolveOutcome z = solve_hankel(Mat::Zero(5, 5), HankelSpec{5, 5}, SolveOptions{});
    CHECK(z.result.x_star.norm() == 0.0);
    CHECK_THROWS_AS(solve_hankel(data, HankelSpec{19, 21}, o), ShapeError);
}
