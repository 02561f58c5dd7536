#pragma once

#include "slra/esprit.hpp"
#include "slra/signals.hpp"
#include "slra/solvers.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace slra {

/// Worker count: hardware concurrency, capped by SLRA_THREADS when set.
unsigned worker_count();

/// Runs fn(0..count-1) on up to `workers` threads. Exceptions are rethrown
/// (the one from the lowest index wins).
void parallel_for(long count, const std::function<void(long)>& fn, unsigned workers = worker_count());

// ---- cosine-sum convergence study ------------------------------------------

struct StudyConfig {
    long trials = 100;
    long iters = 100;
    double alpha = 0.1;
    double sigma0 = 1.0;
    double noise = 0.1;      ///< per-entry std of the noise added to the Hankel matrix
    long samples = kCosSumSamples;
    std::uint64_t seed = 0;
    bool track_objectives = true;
    bool ada = true;         ///< include plain ADA
    bool mod_ada = true;
    bool da = true;

    void validate() const;
};

inline constexpr int kReportedSingvals = 10;

struct MethodTrial {
    std::vector<double> primal;
    std::vector<double> dual;
    RVec singvals;
    double gtdist = 0.0;     ///< |H - H_gt| / |H_gt|
    double gtdist_sq = 0.0;  ///< |H - H_gt|^2 / |H_gt|^2
    long iterations = 0;
    bool degenerate = false;
};

struct StudyTrial {
    RVec singvals_truth;
    RVec singvals_noisy;
    MethodTrial da;
    MethodTrial ada;
    MethodTrial mod_ada;
};

/// One trial: draw the cosine sum, build the Hankel ground truth, add noise
/// and run the requested methods. Seed seed + trial.
StudyTrial run_study_trial(const StudyConfig& cfg, long trial);

struct MethodSummary {
    std::string name;
    bool present = false;
    std::vector<double> mean_primal;
    std::vector<double> mean_dual;
    RVec mean_singvals;
    double mean_gtdist = 0.0;
    double mean_gtdist_sq = 0.0;
    std::vector<double> gtdist;  ///< per trial
    long degenerate_trials = 0;
};

struct StudyReport {
    StudyConfig config;
    long trials = 0;
    RVec mean_singvals_truth;
    RVec mean_singvals_noisy;
    MethodSummary da;
    MethodSummary ada;
    MethodSummary mod_ada;

    std::vector<const MethodSummary*> methods() const;
};

StudyReport run_study(const StudyConfig& cfg);

// ---- scalar toy ------------------------------------------------------------

struct ToyRow {
    long n = 0;
    double x = 0.0;
    double lambda = 0.0;
};

/// DA on |x^2 - 1| with M = {0} and harmonic steps; rows n = 1..iters.
std::vector<ToyRow> run_toy(long iters = 5);

// ---- frequency estimation study --------------------------------------------

struct FreqestConfig {
    long trials = 100;
    std::vector<double> snr_levels = {0.0, 2.5, 5.0, 7.5, 10.0, 12.5, 15.0, 17.5, 20.0, 22.5, 25.0};
    int p = 4;
    long max_iters = 5000;
    double stop_tol = 1e-6;
    std::uint64_t seed = 0;
    HankelSpec spec{129, 129};
    SignalModel model = four_exponential_model();

    void validate() const;
};

struct FreqestTrial {
    double snr = 0.0;
    long trial = 0;
    double sigma0 = 0.0;
    long iterations = 0;
    bool converged = false;
    // errors against the measured (noisy) signal
    double fro_da = 0.0;
    double fro_esprit = 0.0;
    double l2_da = 0.0;
    double l2_esprit = 0.0;
    // errors against the noiseless signal
    double fro_da_clean = 0.0;
    double fro_esprit_clean = 0.0;
    double l2_da_clean = 0.0;
    double l2_esprit_clean = 0.0;

    double scaled_fro_diff() const;  ///< (esprit - da) 10^{snr/20}
    double scaled_l2_diff() const;
};

FreqestTrial run_freqest_trial(const FreqestConfig& cfg, std::size_t level, long trial);

struct FreqestReport {
    std::vector<FreqestTrial> trials;
    double fro_da_win_fraction = 0.0;   ///< share with fro_da < fro_esprit
    double l2_esprit_win_fraction = 0.0;
    long unconverged = 0;
};

FreqestReport run_freqest(const FreqestConfig& cfg);

struct Histogram {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<long> counts;
};

Histogram make_histogram(const std::vector<double>& values, int bins);

// ---- general entry point ---------------------------------------------------

struct SolveOptions {
    Variant variant = Variant::da;
    double alpha = 0.1;
    double sigma0 = 0.0;  ///< <= 0 selects the gap heuristic with rank_hint
    int rank_hint = 1;
    long max_iters = 1000;
    double stop_tol = 1e-6;
    bool inv_sqrt_steps = false;  ///< DA only
};

struct SolveOutcome {
    SolverResult result;
    double sigma0 = 0.0;
    int rank = 0;
    double primal = 0.0;
    double dual = 0.0;
};

SolveOutcome solve_hankel(const Mat& data, const HankelSpec& spec, const SolveOptions& opts);

} // namespace slra
