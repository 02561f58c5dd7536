#pragma once

#include "slra/matops.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <vector>

namespace slra {

using Rng = std::mt19937_64;

struct ExpTerm {
    cplx c;
    cplx zeta;
};

/// Sample positions j_k = start + k * step, k = 0..count-1.
struct SampleGrid {
    double start = 0.0;
    long count = 1;
    double step = 1.0;

    double position(long k) const { return start + static_cast<double>(k) * step; }
};

/// f(j) = sum_p c_p exp(zeta_p j delta) on a sample grid.
struct SignalModel {
    std::vector<ExpTerm> terms;
    SampleGrid grid;
    double delta = 1.0;

    void validate() const;
};

CVec sample_signal(const SignalModel& m);

/// The four-term test signal on j = -128..128 with delta = 1/256.
SignalModel four_exponential_model();

/// One a e^{bt} cos(10 c t + d pi) term, a, d ~ U[0,1], b, c ~ N(0,1).
struct CosSumTerm {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;
};

inline constexpr long kCosSumSamples = 200;
inline constexpr int kCosSumTerms = 4;

std::vector<CosSumTerm> draw_cos_sum_terms(Rng& rng, int terms = kCosSumTerms);
RVec cos_sum_samples(const std::vector<CosSumTerm>& terms, long count = kCosSumSamples);

/// The same sum written as 2 * terms exponentials on t in [-1, 1].
SignalModel cos_sum_model(const std::vector<CosSumTerm>& terms, long count = kCosSumSamples);

RVec gen_cos_sum(Rng& rng, long count = kCosSumSamples);
RVec gen_cos_sum(std::uint64_t seed, long count = kCosSumSamples);

struct NoiseSpec {
    enum class Mode { fixed_sigma, snr };
    Mode mode = Mode::fixed_sigma;
    double sigma = 0.0;
    double snr_dbw = 0.0;
    std::uint64_t seed = 0;

    static NoiseSpec fixed(double sigma, std::uint64_t seed) { return {Mode::fixed_sigma, sigma, 0.0, seed}; }
    static NoiseSpec snr(double dbw, std::uint64_t seed) { return {Mode::snr, 0.0, dbw, seed}; }
};

double rms(const CVec& f);

/// Noise standard deviation implied by spec for signal f.
double noise_sigma(const CVec& f, const NoiseSpec& spec);

/// Elementwise Gaussian noise. Complex signals get real and imaginary parts of
/// variance sigma^2 / 2 each, real signals real noise of variance sigma^2.
CVec add_noise(const CVec& f, const NoiseSpec& spec);
CVec add_noise(const CVec& f, const NoiseSpec& spec, Rng& rng);
RVec add_noise(const RVec& f, double sigma, Rng& rng);

/// Same convention applied to every matrix entry.
Mat add_matrix_noise(const Mat& x, double sigma, Rng& rng);

/// (sigma_P + sigma_{P+1}) / 2, 1-based.
double sigma0_heuristic(const Mat& f, int p);

struct SignalSamples {
    RVec index;
    CVec values;
};

/// CSV with header index,re,im.
void write_signal_csv(std::ostream& os, const RVec& index, const CVec& values);
void write_signal_csv(const std::filesystem::path& path, const RVec& index, const CVec& values);
SignalSamples read_signal_csv(std::istream& is);
SignalSamples read_signal_csv(const std::filesystem::path& path);

/// JSON {terms: [{c_re, c_im, zeta_re, zeta_im}], delta, grid: {start, count, step}}.
std::string model_to_json(const SignalModel& m);
SignalModel model_from_json(const std::string& text);
void write_model_json(const std::filesystem::path& path, const SignalModel& m);
SignalModel read_model_json(const std::filesystem::path& path);

} // namespace slra
