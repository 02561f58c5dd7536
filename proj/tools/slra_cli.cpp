#include "slra/experiments.hpp"
#include "slra/trace_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace slra;

namespace {

struct Options {
    std::uint64_t seed = 0;
    long trials = 100;
    long iters = 100;
    double alpha = 0.1;
    std::optional<double> sigma0;
    std::string out = ".";
    std::string config;

    double noise = 0.1;
    long samples = kCosSumSamples;
    std::vector<double> snr_levels = FreqestConfig{}.snr_levels;
    int p = 4;
    long max_iters = 5000;
    double stop_tol = 1e-6;
    int bins = 40;
    std::string variant = "da";
    std::string input;
    long rows = 0;
    bool inv_sqrt = false;
};

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

void apply_config(Options& o, const std::string& path) {
    std::ifstream is(path);
    if (!is) throw UsageError("cannot open config " + path);
    json j;
    try {
        j = json::parse(is);
    } catch (const json::exception& e) {
        throw UsageError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw UsageError("config: expected a JSON object");
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "seed") o.seed = v.get<std::uint64_t>();
            else if (key == "trials") o.trials = v.get<long>();
            else if (key == "iters") o.iters = v.get<long>();
            else if (key == "alpha") o.alpha = v.get<double>();
            else if (key == "sigma0") o.sigma0 = v.get<double>();
            else if (key == "out") o.out = v.get<std::string>();
            else if (key == "noise") o.noise = v.get<double>();
            else if (key == "samples") o.samples = v.get<long>();
            else if (key == "snr_levels") o.snr_levels = v.get<std::vector<double>>();
            else if (key == "p") o.p = v.get<int>();
            else if (key == "max_iters") o.max_iters = v.get<long>();
            else if (key == "stop_tol") o.stop_tol = v.get<double>();
            else if (key == "bins") o.bins = v.get<int>();
            else if (key == "variant") o.variant = v.get<std::string>();
            else if (key == "input") o.input = v.get<std::string>();
            else if (key == "rows") o.rows = v.get<long>();
            else if (key == "inv_sqrt") o.inv_sqrt = v.get<bool>();
            else throw UsageError("config: unknown key '" + key + "'");
        }
    } catch (const json::exception& e) {
        throw UsageError(std::string("config: ") + e.what());
    }
}

fs::path out_dir(const Options& o) {
    fs::path dir(o.out);
    fs::create_directories(dir);
    return dir;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << j.dump(2) << '\n';
}

StudyConfig study_config(const Options& o) {
    StudyConfig c;
    c.trials = o.trials;
    c.iters = o.iters;
    c.alpha = o.alpha;
    c.sigma0 = o.sigma0.value_or(1.0);
    c.noise = o.noise;
    c.samples = o.samples;
    c.seed = o.seed;
    return c;
}

json study_summary(const StudyReport& r) {
    json j;
    j["trials"] = r.trials;
    j["iters"] = r.config.iters;
    j["alpha"] = r.config.alpha;
    j["sigma0"] = r.config.sigma0;
    j["noise"] = r.config.noise;
    j["samples"] = r.config.samples;
    j["seed"] = r.config.seed;
    for (const MethodSummary* m : r.methods()) {
        j["methods"][m->name] = {
            {"mean_distance", m->mean_gtdist},
            {"mean_distance_sq", m->mean_gtdist_sq},
            {"final_primal", m->mean_primal.empty() ? 0.0 : m->mean_primal.back()},
            {"final_dual", m->mean_dual.empty() ? 0.0 : m->mean_dual.back()},
            {"degenerate_trials", m->degenerate_trials},
        };
    }
    return j;
}

int cmd_converge(const Options& o) {
    StudyConfig c = study_config(o);
    const StudyReport r = run_study(c);
    const fs::path dir = out_dir(o);
    std::ofstream os(dir / "curves.csv");
    os << "n,method,primal,dual\n";
    for (const MethodSummary* m : r.methods())
        for (std::size_t n = 0; n < m->mean_primal.size(); ++n)
            os << n << ',' << m->name << ',' << num(m->mean_primal[n]) << ',' << num(m->mean_dual[n]) << '\n';
    write_json(dir / "summary.json", study_summary(r));
    std::printf("%-8s %18s %18s\n", "method", "final primal", "final dual");
    for (const MethodSummary* m : r.methods()) {
        std::printf("%-8s %18.10g %18.10g\n", m->name.c_str(), m->mean_primal.back(), m->mean_dual.back());
    }
    return 0;
}

int cmd_singvals(const Options& o) {
    StudyConfig c = study_config(o);
    c.track_objectives = false;
    const StudyReport r = run_study(c);
    const fs::path dir = out_dir(o);
    std::ofstream os(dir / "singvals.csv");
    os << "k,truth,noisy,da,ada,mod_ada\n";
    for (int k = 0; k < kReportedSingvals; ++k) {
        os << k + 1 << ',' << num(r.mean_singvals_truth[k]) << ',' << num(r.mean_singvals_noisy[k]) << ','
           << num(r.da.mean_singvals[k]) << ',' << num(r.ada.mean_singvals[k]) << ','
           << num(r.mod_ada.mean_singvals[k]) << '\n';
    }
    std::printf("%3s %12s %12s %12s %12s %12s\n", "k", "truth", "noisy", "da", "ada", "mod_ada");
    for (int k = 0; k < kReportedSingvals; ++k) {
        std::printf("%3d %12.6f %12.6f %12.6f %12.6f %12.6f\n", k + 1, r.mean_singvals_truth[k],
                    r.mean_singvals_noisy[k], r.da.mean_singvals[k], r.ada.mean_singvals[k],
                    r.mod_ada.mean_singvals[k]);
    }
    return 0;
}

int cmd_gtdist(const Options& o) {
    StudyConfig c = study_config(o);
    c.track_objectives = false;
    const StudyReport r = run_study(c);
    const fs::path dir = out_dir(o);
    std::ofstream os(dir / "gtdist.csv");
    os << "method,alpha,trials,mean_distance,mean_distance_sq\n";
    std::printf("alpha = %g, %ld trials, %ld iterations\n", c.alpha, c.trials, c.iters);
    std::printf("%-8s %14s %14s\n", "method", "|H-Hgt|/|Hgt|", "squared");
    for (const MethodSummary* m : r.methods()) {
        os << m->name << ',' << num(c.alpha) << ',' << r.trials << ',' << num(m->mean_gtdist) << ','
           << num(m->mean_gtdist_sq) << '\n';
        std::printf("%-8s %14.6f %14.3e\n", m->name.c_str(), m->mean_gtdist, m->mean_gtdist_sq);
    }
    write_json(dir / "summary.json", study_summary(r));
    return 0;
}

int cmd_toy(const Options& o, bool iters_given) {
    const long iters = iters_given ? std::max(5L, std::min(o.iters, 1000L)) : 5L;
    const auto rows = run_toy(iters);
    const fs::path dir = out_dir(o);
    std::ofstream os(dir / "toy.csv");
    os << "n,x,lambda\n";
    std::printf("%3s %4s %22s\n", "n", "x", "lambda");
    for (const auto& r : rows) {
        os << r.n << ',' << num(r.x) << ',' << num(r.lambda) << '\n';
        std::printf("%3ld %+4.0f %22.17g\n", r.n, r.x, r.lambda);
    }
    const double expected[5] = {1.0, 0.5, 1.0 / 6.0, -1.0 / 12.0, 7.0 / 60.0};
    for (int i = 0; i < 5; ++i) {
        if (std::abs(rows[static_cast<std::size_t>(i)].lambda - expected[i]) > 1e-12) {
            std::fprintf(stderr, "toy: lambda^%d = %.17g, expected %.17g\n", i + 1,
                         rows[static_cast<std::size_t>(i)].lambda, expected[i]);
            return 1;
        }
    }
    return 0;
}

int cmd_freqest(const Options& o) {
    FreqestConfig c;
    c.trials = o.trials;
    c.snr_levels = o.snr_levels;
    c.p = o.p;
    c.max_iters = o.max_iters;
    c.stop_tol = o.stop_tol;
    c.seed = o.seed;
    const FreqestReport r = run_freqest(c);
    const fs::path dir = out_dir(o);
    std::ofstream os(dir / "freqest_trials.csv");
    os << "snr,trial,sigma0,iterations,converged,fro_da,fro_esprit,l2_da,l2_esprit,"
          "fro_da_clean,fro_esprit_clean,l2_da_clean,l2_esprit_clean,scaled_fro_diff,scaled_l2_diff\n";
    std::vector<double> fro;
    std::vector<double> l2;
    for (const auto& t : r.trials) {
        os << num(t.snr) << ',' << t.trial << ',' << num(t.sigma0) << ',' << t.iterations << ','
           << (t.converged ? 1 : 0) << ',' << num(t.fro_da) << ',' << num(t.fro_esprit) << ',' << num(t.l2_da)
           << ',' << num(t.l2_esprit) << ',' << num(t.fro_da_clean) << ',' << num(t.fro_esprit_clean) << ','
           << num(t.l2_da_clean) << ',' << num(t.l2_esprit_clean) << ',' << num(t.scaled_fro_diff()) << ','
           << num(t.scaled_l2_diff()) << '\n';
        fro.push_back(t.scaled_fro_diff());
        l2.push_back(t.scaled_l2_diff());
    }
    const Histogram hf = make_histogram(fro, o.bins);
    const Histogram hl = make_histogram(l2, o.bins);
    std::ofstream hs(dir / "freqest_hist.csv");
    hs << "measure,bin,lo,hi,count\n";
    for (const auto& [name, h] : {std::pair{"frobenius", &hf}, std::pair{"l2", &hl}}) {
        const double w = (h->hi - h->lo) / static_cast<double>(h->counts.size());
        for (std::size_t b = 0; b < h->counts.size(); ++b) {
            hs << name << ',' << b << ',' << num(h->lo + w * static_cast<double>(b)) << ','
               << num(h->lo + w * static_cast<double>(b + 1)) << ',' << h->counts[b] << '\n';
        }
    }
    json j;
    j["trials_per_level"] = c.trials;
    j["snr_levels"] = c.snr_levels;
    j["fro_da_win_fraction"] = r.fro_da_win_fraction;
    j["l2_esprit_win_fraction"] = r.l2_esprit_win_fraction;
    j["unconverged"] = r.unconverged;
    write_json(dir / "summary.json", j);
    std::printf("trials: %zu\n", r.trials.size());
    std::printf("dual ascent Frobenius error below ESPRIT: %.1f%%\n", 100.0 * r.fro_da_win_fraction);
    std::printf("ESPRIT l2 error below dual ascent:        %.1f%%\n", 100.0 * r.l2_esprit_win_fraction);
    if (r.unconverged > 0) std::printf("runs stopped at max_iters: %ld\n", r.unconverged);
    return 0;
}

int cmd_solve(const Options& o) {
    if (o.input.empty()) throw UsageError("solve: --input is required");
    const fs::path in(o.input);
    Mat data;
    HankelSpec spec;
    RVec index;
    std::ifstream probe(in);
    if (!probe) throw UsageError("cannot open " + in.string());
    std::string header;
    std::getline(probe, header);
    if (!header.empty() && header.back() == '\r') header.pop_back();
    probe.close();
    if (header == "index,re,im") {
        const SignalSamples s = read_signal_csv(in);
        const long len = s.values.size();
        if (len < 1) throw FormatError("solve: empty signal");
        if (o.rows > 0) {
            if (o.rows > len) {
                throw FormatError("solve: " + std::to_string(o.rows) + " rows need at least that many samples, got " +
                                  std::to_string(len));
            }
            spec = HankelSpec{o.rows, len - o.rows + 1};
        } else {
            spec = HankelSpec::for_length(len);
        }
        data = hankel_from_vector(s.values, spec);
        index = s.index;
    } else if (header == "row,col,re,im") {
        std::ifstream is(in);
        std::getline(is, header);
        std::vector<std::tuple<long, long, cplx>> cells;
        long rows = 0;
        long cols = 0;
        std::string line;
        while (std::getline(is, line)) {
            if (line.empty() || line == "\r") continue;
            long r = 0;
            long c = 0;
            double re = 0.0;
            double im = 0.0;
            if (std::sscanf(line.c_str(), "%ld,%ld,%lf,%lf", &r, &c, &re, &im) != 4 || r < 0 || c < 0) {
                throw FormatError("solve: bad matrix line '" + line + "'");
            }
            cells.emplace_back(r, c, cplx(re, im));
            rows = std::max(rows, r + 1);
            cols = std::max(cols, c + 1);
        }
        if (static_cast<long>(cells.size()) != rows * cols) throw FormatError("solve: matrix file is incomplete");
        data = Mat::Zero(rows, cols);
        for (const auto& [r, c, v] : cells) data(r, c) = v;
        spec = HankelSpec{rows, cols};
        index = RVec::LinSpaced(spec.length(), 0.0, static_cast<double>(spec.length() - 1));
    } else {
        throw FormatError("solve: unrecognised input header '" + header + "' (expected index,re,im or row,col,re,im)");
    }

    SolveOptions so;
    so.variant = variant_from_string(o.variant);
    so.alpha = o.alpha;
    so.sigma0 = o.sigma0.value_or(0.0);
    so.rank_hint = o.p;
    so.max_iters = o.max_iters;
    so.stop_tol = o.stop_tol;
    so.inv_sqrt_steps = o.inv_sqrt;
    const SolveOutcome r = solve_hankel(data, spec, so);

    const fs::path dir = out_dir(o);
    write_signal_csv(dir / "x_star.csv", index, vector_from_hankel(r.result.x_star, spec));
    {
        std::ofstream os(dir / "lambda_star.csv");
        os << "row,col,re,im\n";
        const Mat& l = r.result.lambda_star;
        for (Index j = 0; j < l.rows(); ++j)
            for (Index k = 0; k < l.cols(); ++k)
                os << j << ',' << k << ',' << num(l(j, k).real()) << ',' << num(l(j, k).imag()) << '\n';
    }
    write_trace_csv(dir / "trace.csv", r.result.trace);
    const auto& last = r.result.trace.back();
    json j;
    j["status"] = status_string(r.result);
    j["variant"] = to_string(so.variant);
    j["rows"] = spec.rows;
    j["cols"] = spec.cols;
    j["sigma0"] = r.sigma0;
    j["iterations"] = last.n;
    j["primal"] = r.primal;
    j["dual"] = r.dual;
    j["feas_residual"] = last.feas_residual;
    j["best_n"] = last.best_n;
    j["rank"] = r.rank;
    write_json(dir / "summary.json", j);
    std::printf("status %s, %ld iterations, rank %d, primal %.10g, dual %.10g\n", status_string(r.result).c_str(),
                last.n, r.rank, r.primal, r.dual);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Structured low-rank approximation by dual ascent"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--seed", o.seed, "Base seed; trial t uses seed + t")->capture_default_str();
    app.add_option("--trials", o.trials, "Trials (per SNR level for freqest)")->capture_default_str();
    auto* iters_opt = app.add_option("--iters", o.iters, "Iterations for converge/singvals/gtdist")->capture_default_str();
    app.add_option("--alpha", o.alpha, "Augmentation weight and asymptotic step")->capture_default_str();
    app.add_option("--sigma0", o.sigma0, "Rank penalty level (study default 1.0; solve default: gap heuristic)");
    app.add_option("--out", o.out, "Output directory")->capture_default_str();
    app.add_option("--config", o.config, "JSON file whose keys override the flags");
    app.add_option("--noise", o.noise, "Per-entry noise std for the cosine-sum studies")->capture_default_str();
    app.add_option("--samples", o.samples, "Cosine-sum samples")->capture_default_str();
    app.add_option("--snr", o.snr_levels, "SNR levels in dBW (freqest)");
    app.add_option("--p", o.p, "Model order (freqest, solve heuristic)")->capture_default_str();
    app.add_option("--max-iters", o.max_iters, "Iteration cap (freqest, solve)")->capture_default_str();
    app.add_option("--stop-tol", o.stop_tol, "Feasibility stopping tolerance (freqest, solve)")->capture_default_str();
    app.add_option("--bins", o.bins, "Histogram bins (freqest)")->capture_default_str();

    auto* converge = app.add_subcommand("converge", "Mean primal and dual curves of DA, ADA and mod-ADA");
    auto* singvals = app.add_subcommand("singvals", "Mean leading singular values of data, truth and outputs");
    auto* gtdist = app.add_subcommand("gtdist", "Mean normalized distance to the ground truth");
    auto* toy = app.add_subcommand("toy", "Dual ascent on |x^2 - 1|");
    auto* freqest = app.add_subcommand("freqest", "Dual ascent against ESPRIT on the four-exponential signal");
    auto* solve = app.add_subcommand("solve", "Run a solver on a signal or matrix file");
    solve->add_option("--input", o.input, "Signal CSV (index,re,im) or matrix CSV (row,col,re,im)");
    solve->add_option("--variant", o.variant, "da, ada or mod_ada")->capture_default_str();
    solve->add_option("--rows", o.rows, "Hankel rows for signal input");
    solve->add_flag("--inv-sqrt", o.inv_sqrt, "DA steps min(1, 1/sqrt(n+1))");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (!o.config.empty()) apply_config(o, o.config);
        if (converge->parsed()) return cmd_converge(o);
        if (singvals->parsed()) return cmd_singvals(o);
        if (gtdist->parsed()) return cmd_gtdist(o);
        if (toy->parsed()) return cmd_toy(o, iters_opt->count() > 0);
        if (freqest->parsed()) return cmd_freqest(o);
        if (solve->parsed()) return cmd_solve(o);
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 1;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
