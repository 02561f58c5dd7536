#include "slra/signals.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

namespace slra {

void SignalModel::validate() const {
    if (terms.empty()) throw DomainError("SignalModel: at least one term required");
    if (grid.count < 1) throw DomainError("SignalModel: grid count must be >= 1");
    if (!std::isfinite(grid.start) || !std::isfinite(grid.step) || !std::isfinite(delta)) {
        throw DomainError("SignalModel: grid and delta must be finite");
    }
    for (const auto& t : terms) {
        if (!std::isfinite(t.c.real()) || !std::isfinite(t.c.imag()) || !std::isfinite(t.zeta.real()) ||
            !std::isfinite(t.zeta.imag())) {
            throw DomainError("SignalModel: non-finite term");
        }
    }
}

CVec sample_signal(const SignalModel& m) {
    m.validate();
    const double j_max = std::max(std::abs(m.grid.position(0)), std::abs(m.grid.position(m.grid.count - 1)));
    for (const auto& t : m.terms) {
        const double growth = std::abs(t.zeta.real()) * j_max * std::abs(m.delta);
        if (growth > 700.0) {
            throw DomainError("sample_signal: exp overflow, |Re(zeta) j delta| reaches " + std::to_string(growth));
        }
    }
    CVec f = CVec::Zero(m.grid.count);
    for (long k = 0; k < m.grid.count; ++k) {
        const double j = m.grid.position(k) * m.delta;
        for (const auto& t : m.terms) f[k] += t.c * std::exp(t.zeta * j);
    }
    return f;
}

SignalModel four_exponential_model() {
    SignalModel m;
    m.terms = {
        {{1.0, 0.0}, {0.0, 5924.0}},
        {{0.62348, 0.78183}, {0.0, 804.24}},
        {{-0.22252, 0.97493}, {0.0, 695.88}},
        {{-0.90097, 0.43388}, {0.0, 7937.6}},
    };
    m.grid = {-128.0, 257, 1.0};
    m.delta = 1.0 / 256.0;
    return m;
}

std::vector<CosSumTerm> draw_cos_sum_terms(Rng& rng, int terms) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<CosSumTerm> out(static_cast<std::size_t>(terms));
    for (auto& t : out) {
        t.a = uni(rng);
        t.d = uni(rng);
        t.b = gauss(rng);
        t.c = gauss(rng);
    }
    return out;
}

namespace {

double cos_sum_time(long k, long count) {
    return count == 1 ? -1.0 : -1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(count - 1);
}

} // namespace

RVec cos_sum_samples(const std::vector<CosSumTerm>& terms, long count) {
    if (count < 1) throw DomainError("cos_sum_samples: count must be >= 1");
    RVec f = RVec::Zero(count);
    for (long k = 0; k < count; ++k) {
        const double t = cos_sum_time(k, count);
        for (const auto& p : terms) f[k] += p.a * std::exp(p.b * t) * std::cos(10.0 * p.c * t + p.d * std::numbers::pi);
    }
    return f;
}

SignalModel cos_sum_model(const std::vector<CosSumTerm>& terms, long count) {
    if (count < 2) throw DomainError("cos_sum_model: count must be >= 2");
    SignalModel m;
    for (const auto& p : terms) {
        const cplx phase = std::polar(0.5 * p.a, p.d * std::numbers::pi);
        m.terms.push_back({phase, {p.b, 10.0 * p.c}});
        m.terms.push_back({std::conj(phase), {p.b, -10.0 * p.c}});
    }
    m.grid = {-1.0, count, 2.0 / static_cast<double>(count - 1)};
    m.delta = 1.0;
    return m;
}

RVec gen_cos_sum(Rng& rng, long count) { return cos_sum_samples(draw_cos_sum_terms(rng), count); }

RVec gen_cos_sum(std::uint64_t seed, long count) {
    Rng rng(seed);
    return gen_cos_sum(rng, count);
}

double rms(const CVec& f) {
    if (f.size() == 0) return 0.0;
    return std::sqrt(f.squaredNorm() / static_cast<double>(f.size()));
}

double noise_sigma(const CVec& f, const NoiseSpec& spec) {
    if (spec.mode == NoiseSpec::Mode::snr) {
        if (!std::isfinite(spec.snr_dbw)) throw DomainError("add_noise: snr must be finite");
        return rms(f) * std::pow(10.0, -spec.snr_dbw / 20.0);
    }
    if (!(spec.sigma >= 0.0) || !std::isfinite(spec.sigma)) throw DomainError("add_noise: sigma must be >= 0");
    return spec.sigma;
}

CVec add_noise(const CVec& f, const NoiseSpec& spec) {
    Rng rng(spec.seed);
    return add_noise(f, spec, rng);
}

CVec add_noise(const CVec& f, const NoiseSpec& spec, Rng& rng) {
    const double sigma = noise_sigma(f, spec);
    const bool complex_signal = (f.imag().array() != 0.0).any();
    std::normal_distribution<double> gauss(0.0, 1.0);
    CVec out = f;
    if (sigma == 0.0) return out;
    if (complex_signal) {
        const double s = sigma / std::sqrt(2.0);
        for (Index k = 0; k < out.size(); ++k) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            out[k] += cplx(s * re, s * im);
        }
    } else {
        for (Index k = 0; k < out.size(); ++k) out[k] += sigma * gauss(rng);
    }
    return out;
}

RVec add_noise(const RVec& f, double sigma, Rng& rng) {
    if (!(sigma >= 0.0)) throw DomainError("add_noise: sigma must be >= 0");
    std::normal_distribution<double> gauss(0.0, 1.0);
    RVec out = f;
    for (Index k = 0; k < out.size(); ++k) out[k] += sigma * gauss(rng);
    return out;
}

Mat add_matrix_noise(const Mat& x, double sigma, Rng& rng) {
    if (!(sigma >= 0.0)) throw DomainError("add_matrix_noise: sigma must be >= 0");
    const bool complex_data = (x.imag().array() != 0.0).any();
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat out = x;
    const double s = complex_data ? sigma / std::sqrt(2.0) : sigma;
    // column-major fill, fixed order for reproducibility
    for (Index k = 0; k < out.cols(); ++k) {
        for (Index j = 0; j < out.rows(); ++j) {
            if (complex_data) {
                const double re = gauss(rng);
                const double im = gauss(rng);
                out(j, k) += cplx(s * re, s * im);
            } else {
                out(j, k) += s * gauss(rng);
            }
        }
    }
    return out;
}

double sigma0_heuristic(const Mat& f, int p) {
    const Index k = std::min(f.rows(), f.cols());
    if (p < 1 || p + 1 > k) {
        throw DomainError("sigma0_heuristic: P = " + std::to_string(p) + " needs 1 <= P < " + std::to_string(k));
    }
    const RVec s = singular_values(f);
    return 0.5 * (s[p - 1] + s[p]);
}

void write_signal_csv(std::ostream& os, const RVec& index, const CVec& values) {
    if (index.size() != values.size()) throw ShapeError("write_signal_csv: index and values differ in length");
    os << "index,re,im\n";
    char buf[96];
    for (Index k = 0; k < values.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", index[k], values[k].real(), values[k].imag());
        os << buf;
    }
}

void write_signal_csv(const std::filesystem::path& path, const RVec& index, const CVec& values) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_signal_csv(os, index, values);
}

SignalSamples read_signal_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw FormatError("signal csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "index,re,im") throw FormatError("signal csv: expected header index,re,im");
    std::vector<double> idx;
    std::vector<cplx> vals;
    long lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string a, b, c, extra;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c, ',') ||
            std::getline(ss, extra, ',')) {
            throw FormatError("signal csv: line " + std::to_string(lineno) + " needs 3 fields");
        }
        try {
            idx.push_back(std::stod(a));
            vals.emplace_back(std::stod(b), std::stod(c));
        } catch (const std::logic_error&) {
            throw FormatError("signal csv: bad number on line " + std::to_string(lineno));
        }
    }
    SignalSamples out;
    out.index = Eigen::Map<const RVec>(idx.data(), static_cast<Index>(idx.size()));
    out.values = Eigen::Map<const CVec>(vals.data(), static_cast<Index>(vals.size()));
    return out;
}

SignalSamples read_signal_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw FormatError("cannot open " + path.string());
    return read_signal_csv(is);
}

std::string model_to_json(const SignalModel& m) {
    nlohmann::json j;
    j["terms"] = nlohmann::json::array();
    for (const auto& t : m.terms) {
        j["terms"].push_back({{"c_re", t.c.real()}, {"c_im", t.c.imag()}, {"zeta_re", t.zeta.real()},
                              {"zeta_im", t.zeta.imag()}});
    }
    j["delta"] = m.delta;
    j["grid"] = {{"start", m.grid.start}, {"count", m.grid.count}, {"step", m.grid.step}};
    return j.dump(2);
}

SignalModel model_from_json(const std::string& text) {
    SignalModel m;
    try {
        const auto j = nlohmann::json::parse(text);
        for (const auto& t : j.at("terms")) {
            m.terms.push_back({{t.at("c_re").get<double>(), t.at("c_im").get<double>()},
                               {t.at("zeta_re").get<double>(), t.at("zeta_im").get<double>()}});
        }
        m.delta = j.at("delta").get<double>();
        const auto& g = j.at("grid");
        m.grid = {g.at("start").get<double>(), g.at("count").get<long>(), g.at("step").get<double>()};
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("model json: ") + e.what());
    }
    m.validate();
    return m;
}

void write_model_json(const std::filesystem::path& path, const SignalModel& m) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os << model_to_json(m) << '\n';
}

SignalModel read_model_json(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw FormatError("cannot open " + path.string());
    std::stringstream ss;
    ss << is.rdbuf();
    return model_from_json(ss.str());
}

} // namespace slra
