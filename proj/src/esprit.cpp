#include "slra/esprit.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace slra {

namespace {

constexpr double kModeTol = 1e-12;

EspritEstimate fit(const CVec& f, const Mat& u, const SampleGrid& grid, double delta) {
    const Index p = u.cols();
    EspritEstimate est;
    if (p == 0) {
        est.reconstruction = CVec::Zero(f.size());
        return est;
    }
    const Index m = u.rows();
    const Mat psi = u.topRows(m - 1).completeOrthogonalDecomposition().solve(u.bottomRows(m - 1));
    Eigen::ComplexEigenSolver<Mat> eig(psi, false);
    if (eig.info() != Eigen::Success) throw NumericalError("esprit: eigenvalue solver failed");
    const double scale = grid.step * delta;
    Mat vander(f.size(), p);
    for (Index q = 0; q < p; ++q) {
        const cplx zeta = std::log(eig.eigenvalues()[q]) / scale;
        est.zetas.push_back(zeta);
        for (Index k = 0; k < f.size(); ++k) vander(k, q) = std::exp(zeta * (grid.position(k) * delta));
    }
    const CVec c = vander.completeOrthogonalDecomposition().solve(f);
    est.coeffs.assign(c.data(), c.data() + c.size());
    est.reconstruction = vander * c;
    return est;
}

} // namespace

EspritEstimate esprit_estimate(const CVec& f, int p, const HankelSpec& spec, const SampleGrid& grid,
                               double delta) {
    spec.validate();
    if (f.size() != spec.length()) {
        throw ShapeError("esprit_estimate: signal length " + std::to_string(f.size()) + " != rows + cols - 1 = " +
                         std::to_string(spec.length()));
    }
    if (grid.count != f.size()) throw ShapeError("esprit_estimate: grid count does not match signal length");
    if (p < 1 || p > std::min(spec.rows - 1, spec.cols)) {
        throw DomainError("esprit_estimate: P = " + std::to_string(p) + " out of range for " +
                          std::to_string(spec.rows) + "x" + std::to_string(spec.cols));
    }
    const SvdFactors s = svd(hankel_from_vector(f, spec));
    Index resolved = 0;
    for (Index q = 0; q < p; ++q)
        if (s.sigma[q] > kModeTol * std::max(s.sigma[0], 1e-300)) ++resolved;
    if (s.sigma[0] == 0.0) resolved = 0;
    if (resolved < p) {
        EspritEstimate partial = fit(f, s.U.leftCols(resolved), grid, delta);
        throw RankDeficientError("esprit_estimate: only " + std::to_string(resolved) + " of " +
                                     std::to_string(p) + " modes resolvable",
                                 std::move(partial));
    }
    return fit(f, s.U.leftCols(p), grid, delta);
}

EspritError esprit_hankel_error(const CVec& f_noisy, const CVec& f_reference, int p, const HankelSpec& spec,
                                const SampleGrid& grid, double delta) {
    if (f_reference.size() != f_noisy.size()) throw ShapeError("esprit_hankel_error: reference length mismatch");
    EspritError out;
    out.estimate = esprit_estimate(f_noisy, p, spec, grid, delta);
    const CVec diff = out.estimate.reconstruction - f_reference;
    out.frobenius = hankel_from_vector(diff, spec).norm();
    out.l2 = diff.norm();
    return out;
}

} // namespace slra
