#include "slra/esprit.hpp"
#include "slra/signals.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace slra;

namespace {

std::vector<double> sorted_angles(const std::vector<cplx>& zetas, double scale) {
    std::vector<double> out;
    for (const cplx& z : zetas) out.push_back(std::arg(std::exp(z * scale)));
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST_CASE("single exponential is recovered exactly") {
    SignalModel m;
    m.terms = {{{1, 0}, {0, 0.1}}};
    m.grid = {0.0, 63, 1.0};
    const CVec f = sample_signal(m);
    const HankelSpec spec = HankelSpec::for_length(63);
    const EspritEstimate e = esprit_estimate(f, 1, spec, m.grid, 1.0);
    REQUIRE(e.zetas.size() == 1);
    CHECK(std::abs(e.zetas[0] - cplx(0, 0.1)) < 1e-8);
    CHECK(std::abs(e.coeffs[0] - 1.0) < 1e-8);
    CHECK((e.reconstruction - f).norm() < 1e-8 * f.norm());
}

TEST_CASE("zero signal is rank deficient") {
    const SampleGrid grid{0.0, 21, 1.0};
    const HankelSpec spec = HankelSpec::for_length(21);
    CHECK_THROWS_AS(esprit_estimate(CVec::Zero(21), 1, spec, grid, 1.0), RankDeficientError);
    try {
        esprit_estimate(CVec::Zero(21), 1, spec, grid, 1.0);
    } catch (const RankDeficientError& e) {
        CHECK(e.partial().zetas.empty());
    }
    // two modes cannot come from a single exponential
    SignalModel m;
    m.terms = {{{1, 0}, {0, 0.3}}};
    m.grid = grid;
    CHECK_THROWS_AS(esprit_estimate(sample_signal(m), 2, spec, grid, 1.0), RankDeficientError);
}

TEST_CASE("argument checks") {
    const SampleGrid grid{0.0, 21, 1.0};
    CHECK_THROWS_AS(esprit_estimate(CVec::Ones(20), 1, HankelSpec::for_length(21), grid, 1.0), ShapeError);
    CHECK_THROWS_AS(esprit_estimate(CVec::Ones(21), 11, HankelSpec{11, 11}, grid, 1.0), DomainError);
    CHECK_THROWS_AS(esprit_estimate(CVec::Ones(21), 0, HankelSpec{11, 11}, grid, 1.0), DomainError);
}

TEST_CASE("noiseless four-exponential signal") {
    const SignalModel m = four_exponential_model();
    const CVec f = sample_signal(m);
    const HankelSpec spec{129, 129};
    const EspritEstimate e = esprit_estimate(f, 4, spec, m.grid, m.delta);
    CHECK((e.reconstruction - f).norm() < 1e-6 * f.norm());
    std::vector<cplx> truth;
    for (const auto& t : m.terms) truth.push_back(t.zeta);
    // exponents are only defined modulo 2 pi i / delta; compare per-sample phases
    const auto a = sorted_angles(e.zetas, m.delta);
    const auto b = sorted_angles(truth, m.delta);
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-6 * std::abs(b[i]));
    for (const cplx& z : e.zetas) CHECK(std::abs(z.real()) < 1e-6);
    // amplitudes match after pairing by phase
    for (const auto& t : m.terms) {
        bool found = false;
        for (std::size_t i = 0; i < 4; ++i) {
            if (std::abs(std::exp(e.zetas[i] * m.delta) - std::exp(t.zeta * m.delta)) < 1e-6) {
                CHECK(std::abs(e.coeffs[i] - t.c) < 1e-6);
                found = true;
            }
        }
        CHECK(found);
    }
}

TEST_CASE("error against the reference") {
    const SignalModel m = four_exponential_model();
    const CVec f = sample_signal(m);
    const HankelSpec spec{129, 129};
    const EspritError clean = esprit_hankel_error(f, f, 4, spec, m.grid, m.delta);
    CHECK(clean.frobenius < 1e-6 * hankel_from_vector(f, spec).norm());
    CHECK(clean.l2 < 1e-6 * f.norm());
    double prev = 0.0;
    for (double snr : {30.0, 10.0, -10.0}) {
        const CVec y = add_noise(f, NoiseSpec::snr(snr, 3));
        const EspritError e = esprit_hankel_error(y, f, 4, spec, m.grid, m.delta);
        CHECK(e.frobenius > prev);
        prev = e.frobenius;
    }
    CHECK_THROWS_AS(esprit_hankel_error(f, CVec::Zero(3), 4, spec, m.grid, m.delta), ShapeError);
}
