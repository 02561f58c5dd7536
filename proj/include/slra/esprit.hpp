#pragma once

#include "slra/signals.hpp"
#include "slra/subspace.hpp"

#include <vector>

namespace slra {

struct EspritEstimate {
    std::vector<cplx> zetas;
    std::vector<cplx> coeffs;
    CVec reconstruction;  ///< sum_p coeffs_p exp(zetas_p j delta) on the input grid
};

/// Fewer than P resolvable modes. partial() holds the estimate for the modes
/// that could be resolved (possibly none).
class RankDeficientError : public NumericalError {
public:
    RankDeficientError(const std::string& what, EspritEstimate partial)
        : NumericalError(what), partial_(std::move(partial)) {}
    const EspritEstimate& partial() const { return partial_; }

private:
    EspritEstimate partial_;
};

/// Shift-invariance ESPRIT on the P leading left singular vectors of the
/// Hankel matrix of f, then least-squares amplitudes. Exponents use the
/// principal log, so they are defined modulo 2 pi i / (grid.step delta).
EspritEstimate esprit_estimate(const CVec& f, int p, const HankelSpec& spec, const SampleGrid& grid,
                               double delta);

struct EspritError {
    double frobenius = 0.0;  ///< |H(reconstruction) - H(reference)|
    double l2 = 0.0;         ///< |reconstruction - reference|
    EspritEstimate estimate;
};

EspritError esprit_hankel_error(const CVec& f_noisy, const CVec& f_reference, int p, const HankelSpec& spec,
                                const SampleGrid& grid, double delta);

} // namespace slra
