#include "slra/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace slra {

unsigned worker_count() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SLRA_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return n;
}

void parallel_for(long count, const std::function<void(long)>& fn, unsigned workers) {
    if (count <= 0) return;
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::min<long>(count, 1L << 16))));
    if (workers == 1) {
        for (long i = 0; i < count; ++i) fn(i);
        return;
    }
    set_blas_threads(1);
    std::atomic<long> next{0};
    std::mutex mu;
    long failed_at = std::numeric_limits<long>::max();
    std::exception_ptr failure;
    auto body = [&] {
        for (long i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (i < failed_at) {
                    failed_at = i;
                    failure = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

// ---- cosine-sum study --------------------------------------------------------

void StudyConfig::validate() const {
    if (trials < 1) throw DomainError("trials must be >= 1");
    if (iters < 0) throw DomainError("iters must be >= 0");
    if (!(sigma0 > 0.0)) throw DomainError("sigma0 must be positive");
    if (!(noise >= 0.0)) throw DomainError("noise must be >= 0");
    if ((ada || mod_ada) && !(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0, 1]");
    if (samples < 2 * kReportedSingvals) throw DomainError("samples must be >= 20");
}

namespace {

RVec leading(const RVec& s) {
    RVec out = RVec::Zero(kReportedSingvals);
    const Index k = std::min<Index>(kReportedSingvals, s.size());
    out.head(k) = s.head(k);
    return out;
}

MethodTrial run_method(const RankObjective& obj, const HankelSubspace& sub, const Mat& truth, SolverConfig cfg,
                       const StudyConfig& study) {
    cfg.max_iters = study.iters;
    cfg.stop_tol = 0.0;
    cfg.track_objectives = study.track_objectives;
    const SolverResult r = run(obj, sub, cfg);
    MethodTrial out;
    for (const auto& rec : r.trace.records) {
        out.primal.push_back(rec.primal);
        out.dual.push_back(rec.dual);
    }
    out.singvals = leading(singular_values(r.x_star));
    const double t2 = truth.squaredNorm();
    out.gtdist_sq = (r.x_star - truth).squaredNorm() / t2;
    out.gtdist = std::sqrt(out.gtdist_sq);
    out.iterations = static_cast<long>(r.trace.records.size()) - 1;
    out.degenerate = r.degenerate_warning;
    return out;
}

void accumulate(MethodSummary& s, const MethodTrial& t) {
    if (s.mean_primal.empty()) {
        s.mean_primal.assign(t.primal.size(), 0.0);
        s.mean_dual.assign(t.dual.size(), 0.0);
        s.mean_singvals = RVec::Zero(kReportedSingvals);
    }
    for (std::size_t i = 0; i < t.primal.size(); ++i) {
        s.mean_primal[i] += t.primal[i];
        s.mean_dual[i] += t.dual[i];
    }
    s.mean_singvals += t.singvals;
    s.mean_gtdist += t.gtdist;
    s.mean_gtdist_sq += t.gtdist_sq;
    s.gtdist.push_back(t.gtdist);
    if (t.degenerate) ++s.degenerate_trials;
}

void finish(MethodSummary& s, long trials) {
    const double k = static_cast<double>(trials);
    for (auto& v : s.mean_primal) v /= k;
    for (auto& v : s.mean_dual) v /= k;
    s.mean_singvals /= k;
    s.mean_gtdist /= k;
    s.mean_gtdist_sq /= k;
}

} // namespace

StudyTrial run_study_trial(const StudyConfig& cfg, long trial) {
    cfg.validate();
    Rng rng(cfg.seed + static_cast<std::uint64_t>(trial));
    const auto terms = draw_cos_sum_terms(rng);
    const RVec f = cos_sum_samples(terms, cfg.samples);
    const HankelSpec spec = HankelSpec::for_length(cfg.samples);
    const HankelSubspace sub(spec);
    const Mat truth = hankel_from_vector(f.cast<cplx>(), spec);
    const Mat data = add_matrix_noise(truth, cfg.noise, rng);
    const RankObjective obj(data, cfg.sigma0);

    StudyTrial out;
    out.singvals_truth = leading(singular_values(truth));
    out.singvals_noisy = leading(singular_values(data));
    if (cfg.da) out.da = run_method(obj, sub, truth, SolverConfig::da(), cfg);
    if (cfg.ada) out.ada = run_method(obj, sub, truth, SolverConfig::ada(cfg.alpha), cfg);
    if (cfg.mod_ada) out.mod_ada = run_method(obj, sub, truth, SolverConfig::mod_ada(cfg.alpha), cfg);
    return out;
}

std::vector<const MethodSummary*> StudyReport::methods() const {
    std::vector<const MethodSummary*> out;
    for (const MethodSummary* m : {&da, &ada, &mod_ada})
        if (m->present) out.push_back(m);
    return out;
}

StudyReport run_study(const StudyConfig& cfg) {
    cfg.validate();
    std::vector<StudyTrial> trials(static_cast<std::size_t>(cfg.trials));
    parallel_for(cfg.trials, [&](long t) { trials[static_cast<std::size_t>(t)] = run_study_trial(cfg, t); });

    StudyReport rep;
    rep.config = cfg;
    rep.trials = cfg.trials;
    rep.da.name = "da";
    rep.ada.name = "ada";
    rep.mod_ada.name = "mod_ada";
    rep.da.present = cfg.da;
    rep.ada.present = cfg.ada;
    rep.mod_ada.present = cfg.mod_ada;
    rep.mean_singvals_truth = RVec::Zero(kReportedSingvals);
    rep.mean_singvals_noisy = RVec::Zero(kReportedSingvals);
    for (const auto& t : trials) {
        rep.mean_singvals_truth += t.singvals_truth;
        rep.mean_singvals_noisy += t.singvals_noisy;
        if (cfg.da) accumulate(rep.da, t.da);
        if (cfg.ada) accumulate(rep.ada, t.ada);
        if (cfg.mod_ada) accumulate(rep.mod_ada, t.mod_ada);
    }
    const double k = static_cast<double>(cfg.trials);
    rep.mean_singvals_truth /= k;
    rep.mean_singvals_noisy /= k;
    for (MethodSummary* m : {&rep.da, &rep.ada, &rep.mod_ada})
        if (m->present) finish(*m, cfg.trials);
    return rep;
}

// ---- toy -----------------------------------------------------------------------

std::vector<ToyRow> run_toy(long iters) {
    if (iters < 1) throw DomainError("run_toy: iters must be >= 1");
    const ToyObjective obj;
    const ZeroSubspace sub(1, 1);
    SolverConfig cfg = SolverConfig::da(StepSchedule::harmonic());
    cfg.max_iters = iters;
    cfg.stop_tol = 0.0;
    cfg.track_objectives = false;
    cfg.record_lambdas = true;
    const SolverResult r = run(obj, sub, cfg);
    std::vector<ToyRow> rows;
    const auto& lam = r.trace.lambdas;
    for (long n = 1; n <= iters; ++n) {
        ToyRow row;
        row.n = n;
        row.lambda = lam[static_cast<std::size_t>(n)](0, 0).real();
        const double prev = lam[static_cast<std::size_t>(n - 1)](0, 0).real();
        // Lambda^n = Lambda^{n-1} + x^n / n
        row.x = std::round((row.lambda - prev) / r.trace.records[static_cast<std::size_t>(n - 1)].step_size);
        rows.push_back(row);
    }
    return rows;
}

// ---- frequency estimation ----------------------------------------------------------

void FreqestConfig::validate() const {
    if (trials < 1) throw DomainError("trials must be >= 1");
    if (snr_levels.empty()) throw DomainError("at least one SNR level required");
    if (max_iters < 1) throw DomainError("max_iters must be >= 1");
    spec.validate();
    if (spec.length() != model.grid.count) {
        throw ShapeError("freqest: Hankel " + std::to_string(spec.rows) + "x" + std::to_string(spec.cols) +
                         " needs " + std::to_string(spec.length()) + " samples, model has " +
                         std::to_string(model.grid.count));
    }
}

double FreqestTrial::scaled_fro_diff() const { return (fro_esprit - fro_da) * std::pow(10.0, snr / 20.0); }
double FreqestTrial::scaled_l2_diff() const { return (l2_esprit - l2_da) * std::pow(10.0, snr / 20.0); }

FreqestTrial run_freqest_trial(const FreqestConfig& cfg, std::size_t level, long trial) {
    FreqestTrial out;
    out.snr = cfg.snr_levels.at(level);
    out.trial = trial;
    const auto global = static_cast<std::uint64_t>(level) * static_cast<std::uint64_t>(cfg.trials) +
                        static_cast<std::uint64_t>(trial);
    Rng rng(cfg.seed + global);
    const CVec clean = sample_signal(cfg.model);
    const CVec y = add_noise(clean, NoiseSpec::snr(out.snr, 0), rng);
    const HankelSubspace sub(cfg.spec);
    const Mat data = sub.from_vector(y);
    const Mat clean_h = sub.from_vector(clean);
    out.sigma0 = sigma0_heuristic(data, cfg.p);

    const RankObjective obj(data, out.sigma0, SvdMethod::thresholded);
    SolverConfig sc = SolverConfig::da(StepSchedule::inv_sqrt());
    sc.max_iters = cfg.max_iters;
    sc.stop_tol = cfg.stop_tol;
    sc.track_objectives = false;
    const SolverResult r = run(obj, sub, sc);
    out.iterations = r.trace.back().n;
    out.converged = r.converged();
    const Mat& a = r.x_last;
    const CVec av = sub.to_vector(a);

    EspritEstimate est;
    try {
        est = esprit_estimate(y, cfg.p, cfg.spec, cfg.model.grid, cfg.model.delta);
    } catch (const RankDeficientError& e) {
        est = e.partial();
    }
    const CVec& e = est.reconstruction;
    const Mat eh = sub.from_vector(e);

    out.fro_da = (a - data).norm();
    out.fro_esprit = (eh - data).norm();
    out.l2_da = (av - y).norm();
    out.l2_esprit = (e - y).norm();
    out.fro_da_clean = (a - clean_h).norm();
    out.fro_esprit_clean = (eh - clean_h).norm();
    out.l2_da_clean = (av - clean).norm();
    out.l2_esprit_clean = (e - clean).norm();
    return out;
}

FreqestReport run_freqest(const FreqestConfig& cfg) {
    cfg.validate();
    const long levels = static_cast<long>(cfg.snr_levels.size());
    FreqestReport rep;
    rep.trials.resize(static_cast<std::size_t>(levels * cfg.trials));
    parallel_for(levels * cfg.trials, [&](long i) {
        rep.trials[static_cast<std::size_t>(i)] =
            run_freqest_trial(cfg, static_cast<std::size_t>(i / cfg.trials), i % cfg.trials);
    });
    long fro = 0;
    long l2 = 0;
    for (const auto& t : rep.trials) {
        if (t.fro_da < t.fro_esprit) ++fro;
        if (t.l2_esprit < t.l2_da) ++l2;
        if (!t.converged) ++rep.unconverged;
    }
    const double total = static_cast<double>(rep.trials.size());
    rep.fro_da_win_fraction = static_cast<double>(fro) / total;
    rep.l2_esprit_win_fraction = static_cast<double>(l2) / total;
    return rep;
}

Histogram make_histogram(const std::vector<double>& values, int bins) {
    if (bins < 1) throw DomainError("make_histogram: bins must be >= 1");
    Histogram h;
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    if (values.empty()) return h;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    h.lo = *lo;
    h.hi = *hi;
    const double width = h.hi > h.lo ? (h.hi - h.lo) / bins : 1.0;
    for (double v : values) {
        auto b = static_cast<long>((v - h.lo) / width);
        b = std::clamp<long>(b, 0, bins - 1);
        ++h.counts[static_cast<std::size_t>(b)];
    }
    return h;
}

// ---- solve ---------------------------------------------------------------------------

SolveOutcome solve_hankel(const Mat& data, const HankelSpec& spec, const SolveOptions& opts) {
    const HankelSubspace sub(spec);
    if (data.rows() != spec.rows || data.cols() != spec.cols) throw ShapeError("solve: data does not match spec");
    SolveOutcome out;
    if (opts.sigma0 > 0.0) {
        out.sigma0 = opts.sigma0;
    } else {
        const RVec s = singular_values(data);
        if (s[0] == 0.0) {
            out.sigma0 = 1.0;
        } else {
            out.sigma0 = sigma0_heuristic(data, opts.rank_hint);
            if (!(out.sigma0 > 0.0)) out.sigma0 = 0.5 * s[opts.rank_hint - 1];
        }
    }
    const RankObjective obj(data, out.sigma0);
    SolverConfig cfg;
    switch (opts.variant) {
    case Variant::da: cfg = SolverConfig::da(opts.inv_sqrt_steps ? StepSchedule::inv_sqrt() : StepSchedule::harmonic()); break;
    case Variant::ada: cfg = SolverConfig::ada(opts.alpha); break;
    case Variant::mod_ada: cfg = SolverConfig::mod_ada(opts.alpha); break;
    }
    cfg.max_iters = opts.max_iters;
    cfg.stop_tol = opts.stop_tol;
    out.result = run(obj, sub, cfg);
    const auto& best = out.result.trace.records[static_cast<std::size_t>(out.result.trace.back().best_n)];
    // x_star is within the feasibility residual of a low-rank iterate, so by
    // Weyl's inequality its trailing singular values are at most that residual.
    const double feas = opts.variant == Variant::da ? best.feas_residual : out.result.trace.back().feas_residual;
    const RVec s = singular_values(out.result.x_star);
    for (Index j = 0; j < s.size(); ++j)
        if (s[j] > std::max(kDefaultRankTol * s[0], feas)) ++out.rank;
    out.primal = opts.variant == Variant::da ? best.primal : out.result.trace.back().primal;
    out.dual = best.dual;
    return out;
}

} // namespace slra
