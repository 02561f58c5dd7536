#include "slra/envelope.hpp"

#include <algorithm>
#include <cmath>

namespace slra {

namespace {

double envelope_term(double s, double sigma0) {
    const double gap = std::max(sigma0 - s, 0.0);
    return sigma0 * sigma0 - gap * gap;
}

} // namespace

RankObjective::RankObjective(Mat data, double sigma0, SvdMethod method)
    : data_(std::move(data)), sigma0_(sigma0), method_(method) {
    if (!(sigma0_ > 0.0) || !std::isfinite(sigma0_)) throw DomainError("RankObjective: sigma0 must be positive");
    require_finite(data_, "RankObjective");
    if (data_.size() == 0) throw ShapeError("RankObjective: empty data matrix");
    data_norm2_ = data_.squaredNorm();
}

double RankObjective::primal_value(const Mat& x, double rel_tol) const {
    require_same_shape(x, data_, "primal_value");
    return sigma0_ * sigma0_ * numerical_rank(x, rel_tol) + (x - data_).squaredNorm();
}

double RankObjective::envelope_from_sigma(const RVec& sigma, const Mat& x) const {
    double total = 0.0;
    for (Index j = 0; j < sigma.size(); ++j) total += envelope_term(sigma[j], sigma0_);
    return total + (x - data_).squaredNorm();
}

double RankObjective::envelope_value(const Mat& x) const {
    require_same_shape(x, data_, "envelope_value");
    return envelope_from_sigma(singular_values(x), x);
}

double RankObjective::conjugate_value(const Mat& lambda) const {
    require_same_shape(lambda, data_, "conjugate_value");
    const RVec s = singular_values(0.5 * lambda + data_);
    const double s02 = sigma0_ * sigma0_;
    double total = 0.0;
    for (Index j = 0; j < s.size(); ++j) total += std::max(s[j] * s[j] - s02, 0.0);
    return total - data_norm2_;
}

TiltedMinimizer RankObjective::tilted_minimizer(const Mat& lambda, double alpha) const {
    require_same_shape(lambda, data_, "tilted_minimizer");
    if (!(alpha >= 0.0)) throw DomainError("tilted_minimizer: alpha must be >= 0");
    const Mat shifted = data_ - 0.5 * lambda;
    // f_alpha vanishes below sigma0, so the thresholded factorization only
    // needs the triplets from just under sigma0 (for the degeneracy check).
    const SvdFactors f = method_ == SvdMethod::full ? svd(shifted)
                                                    : svd_above(shifted, sigma0_ * (1.0 - 2.0 * kDegenerateTol));
    TiltedMinimizer out;
    out.sigma = RVec::Zero(std::min(data_.rows(), data_.cols()));
    RVec mapped(f.sigma.size());
    for (Index j = 0; j < f.sigma.size(); ++j) {
        mapped[j] = f_alpha(f.sigma[j], sigma0_, alpha);
        out.sigma[j] = mapped[j];
        if (alpha == 0.0 && std::abs(f.sigma[j] - sigma0_) <= kDegenerateTol * sigma0_) out.degenerate = true;
    }
    out.x = compose(f, mapped);
    out.envelope = envelope_from_sigma(out.sigma, out.x);
    return out;
}

double RankObjective::dual_value(const Mat& lambda) const { return -conjugate_value(-lambda); }

double primal_value(const RankObjective& obj, const Mat& x, double rel_tol) { return obj.primal_value(x, rel_tol); }
double envelope_value(const RankObjective& obj, const Mat& x) { return obj.envelope_value(x); }
double conjugate_value(const RankObjective& obj, const Mat& lambda) { return obj.conjugate_value(lambda); }
TiltedMinimizer tilted_minimizer(const RankObjective& obj, const Mat& lambda, double alpha) {
    return obj.tilted_minimizer(lambda, alpha);
}
double dual_value_da(const RankObjective& obj, const Mat& lambda) { return obj.dual_value(lambda); }

double dual_value_ada(const Objective& obj, const Mat& lambda, double alpha) {
    if (!(alpha > 0.0)) throw DomainError("dual_value_ada: alpha must be positive");
    const TiltedMinimizer m = obj.tilted_minimizer(lambda, alpha);
    return m.envelope + frobenius_inner(m.x, lambda) + 0.5 * alpha * m.x.squaredNorm();
}

double dual_value_ada_restricted(const Objective& obj, const SubspaceOp& sub,
                                 const TiltedMinimizer& x_next, const Mat& lambda_next,
                                 double alpha) {
    (void)obj;
    if (!(alpha > 0.0)) throw DomainError("dual_value_ada_restricted: alpha must be positive");
    const Mat px = sub.project(x_next.x);
    return x_next.envelope + 0.5 * alpha * px.squaredNorm() + frobenius_inner(x_next.x, lambda_next);
}

double toy_objective(double x) { return std::abs(x * x - 1.0); }

double toy_envelope(double x) { return std::max(0.0, x * x - 1.0); }

double toy_conjugate(double lambda) {
    const double a = std::abs(lambda);
    return a <= 2.0 ? a : 1.0 + lambda * lambda / 4.0;
}

std::vector<double> toy_tilted_minimizers(double lambda) {
    // |x| > 1 is the convex branch x^2 - 1 + lambda x with stationary point
    // -lambda/2; |x| < 1 is concave, so the kinks +-1 are the other candidates.
    if (lambda == 0.0) return {1.0, -1.0};
    if (std::abs(lambda) <= 2.0) return {lambda > 0.0 ? -1.0 : 1.0};
    return {-lambda / 2.0};
}

TiltedMinimizer ToyObjective::tilted_minimizer(const Mat& lambda, double alpha) const {
    if (lambda.rows() != 1 || lambda.cols() != 1) throw ShapeError("ToyObjective: expects 1x1 input");
    if (!(alpha >= 0.0)) throw DomainError("ToyObjective: alpha must be >= 0");
    const double l = lambda(0, 0).real();
    TiltedMinimizer out;
    double x;
    if (alpha == 0.0) {
        x = toy_tilted_minimizers(l).front();
        out.degenerate = (l == 0.0);
    } else {
        // max(0, x^2 - 1) + l x + (alpha/2) x^2 is strictly convex
        const double inner = std::clamp(-l / alpha, -1.0, 1.0);
        const double outer = -l / (2.0 + alpha);
        auto value = [&](double t) { return toy_envelope(t) + l * t + 0.5 * alpha * t * t; };
        x = inner;
        if (std::abs(outer) > 1.0 && value(outer) < value(inner)) x = outer;
    }
    out.x = Mat::Constant(1, 1, cplx(x, 0.0));
    out.sigma = RVec::Constant(1, std::abs(x));
    out.envelope = toy_envelope(x);
    return out;
}

double ToyObjective::envelope_value(const Mat& x) const { return toy_envelope(x(0, 0).real()); }

double ToyObjective::dual_value(const Mat& lambda) const { return -toy_conjugate(-lambda(0, 0).real()); }

} // namespace slra
