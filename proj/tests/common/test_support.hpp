#pragma once

#include "slra/signals.hpp"
#include "slra/subspace.hpp"

#include <cstdint>
#include <numbers>
#include <random>

namespace slra::testing {

inline Mat random_mat(Rng& rng, Index rows, Index cols, bool complex_entries = true) {
    std::normal_distribution<double> g(0.0, 1.0);
    Mat a(rows, cols);
    for (Index k = 0; k < cols; ++k)
        for (Index j = 0; j < rows; ++j) a(j, k) = cplx(g(rng), complex_entries ? g(rng) : 0.0);
    return a;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// Noisy 40x40 Hankel problem from 79 cosine-sum samples, noise 0.1 per entry.
struct HankelProblem {
    HankelSpec spec{40, 40};
    Mat truth;
    Mat data;
};

inline HankelProblem cos_sum_problem(std::uint64_t seed, double noise = 0.1) {
    HankelProblem p;
    Rng rng(seed);
    const RVec f = gen_cos_sum(rng, p.spec.length());
    p.truth = hankel_from_vector(f.cast<cplx>(), p.spec);
    p.data = add_matrix_noise(p.truth, noise, rng);
    return p;
}

// P exponentials with frequencies at least 0.05 rad apart and mild damping.
inline SignalModel random_kronecker_model(Rng& rng, int p, long length) {
    std::uniform_real_distribution<double> freq(-std::numbers::pi, std::numbers::pi);
    std::uniform_real_distribution<double> damp(-0.01, 0.01);
    std::uniform_real_distribution<double> mag(0.5, 1.5);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    SignalModel m;
    while (static_cast<int>(m.terms.size()) < p) {
        const double w = freq(rng);
        bool far = true;
        for (const auto& t : m.terms) {
            const double d = std::abs(std::remainder(w - t.zeta.imag(), 2.0 * std::numbers::pi));
            far = far && d > 0.05;
        }
        if (far) m.terms.push_back({std::polar(mag(rng), phase(rng)), {damp(rng), w}});
    }
    m.grid = {0.0, length, 1.0};
    m.delta = 1.0;
    return m;
}

} // namespace slra::testing
