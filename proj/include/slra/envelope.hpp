#pragma once

#include "slra/matops.hpp"
#include "slra/subspace.hpp"

#include <vector>

namespace slra {

/// Result of argmin_X K(X) + <X, Lambda> + (alpha/2)|X|^2.
struct TiltedMinimizer {
    Mat x;
    RVec sigma;             ///< singular values of x (zeros included)
    double envelope = 0.0;  ///< N**(x)
    bool degenerate = false;
};

/// What the dual ascent schemes need from an objective N: the tilted primal
/// minimizer (of N for alpha == 0, of N** for alpha > 0) and the envelope.
class Objective {
public:
    virtual ~Objective() = default;

    virtual Index rows() const = 0;
    virtual Index cols() const = 0;

    virtual TiltedMinimizer tilted_minimizer(const Mat& lambda, double alpha) const = 0;
    virtual double envelope_value(const Mat& x) const = 0;

    /// g(Lambda) = -N*(-Lambda), the unaugmented dual function.
    virtual double dual_value(const Mat& lambda) const = 0;
};

enum class SvdMethod {
    full,         ///< complete thin SVD of F - Lambda/2
    thresholded,  ///< only the triplets above sigma0 (svd_above); faster when few survive
};

/// N_F(X) = sigma0^2 rank(X) + |X - F|^2.
class RankObjective final : public Objective {
public:
    RankObjective(Mat data, double sigma0, SvdMethod method = SvdMethod::full);

    Index rows() const override { return data_.rows(); }
    Index cols() const override { return data_.cols(); }

    const Mat& data() const { return data_; }
    double sigma0() const { return sigma0_; }
    double data_norm2() const { return data_norm2_; }
    SvdMethod svd_method() const { return method_; }

    double primal_value(const Mat& x, double rel_tol = kDefaultRankTol) const;
    double envelope_value(const Mat& x) const override;
    double conjugate_value(const Mat& lambda) const;
    TiltedMinimizer tilted_minimizer(const Mat& lambda, double alpha) const override;
    double dual_value(const Mat& lambda) const override;

    /// N** evaluated from the singular values of x plus |x - F|^2.
    double envelope_from_sigma(const RVec& sigma, const Mat& x) const;

private:
    Mat data_;
    double sigma0_;
    double data_norm2_;
    SvdMethod method_;
};

inline constexpr double kDegenerateTol = 1e-8;

double primal_value(const RankObjective& obj, const Mat& x, double rel_tol = kDefaultRankTol);
double envelope_value(const RankObjective& obj, const Mat& x);
double conjugate_value(const RankObjective& obj, const Mat& lambda);
TiltedMinimizer tilted_minimizer(const RankObjective& obj, const Mat& lambda, double alpha);
double dual_value_da(const RankObjective& obj, const Mat& lambda);

/// min_X N**(X) + <X, Lambda> + (alpha/2)|X|^2, evaluated at the closed-form minimizer.
double dual_value_ada(const Objective& obj, const Mat& lambda, double alpha);

/// h(Lambda) = min_X N**(X) + (alpha/2)|P_M X|^2 + <X, Lambda> for Lambda in M^perp.
/// When Lambda = Lambda_prev + alpha P_{M^perp}(x) with x the ADA minimizer at
/// Lambda_prev, x also minimizes this problem, so h is available in closed form.
double dual_value_ada_restricted(const Objective& obj, const SubspaceOp& sub,
                                 const TiltedMinimizer& x_next, const Mat& lambda_next,
                                 double alpha);

// Scalar toy problem N(x) = |x^2 - 1| on the real line.

double toy_objective(double x);
double toy_envelope(double x);
double toy_conjugate(double lambda);

/// argmin_x |x^2 - 1| + lambda x, ordered so the first entry is the
/// deterministic pick (+1 on the tie at lambda = 0).
std::vector<double> toy_tilted_minimizers(double lambda);

/// The toy objective as a 1x1 matrix objective; pair with ZeroSubspace(1, 1).
class ToyObjective final : public Objective {
public:
    Index rows() const override { return 1; }
    Index cols() const override { return 1; }
    TiltedMinimizer tilted_minimizer(const Mat& lambda, double alpha) const override;
    double envelope_value(const Mat& x) const override;
    double dual_value(const Mat& lambda) const override;
};

} // namespace slra
