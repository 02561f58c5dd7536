#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <stdexcept>

namespace slra {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using Index = Eigen::Index;

/// Operands of incompatible shape.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain of an operation (negative singular value,
/// non-finite entry, out-of-range parameter).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed input file or document.
class FormatError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Failure inside a numerical kernel (non-convergent SVD, broken invariant).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultRankTol = 1e-9;

/// Thin SVD, A = U diag(sigma) V^*, k = min(rows, cols), sigma non-increasing.
struct SvdFactors {
    Mat U;
    RVec sigma;
    Mat V;

    Mat reconstruct() const;
};

void require_same_shape(const Mat& a, const Mat& b, const char* what);
void require_finite(const Mat& a, const char* what);

/// Re tr(A^* B), the real inner product used in every Lagrangian pairing.
double frobenius_inner(const Mat& a, const Mat& b);

SvdFactors svd(const Mat& a);

/// Singular values only (cheaper than the full factorization).
RVec singular_values(const Mat& a);

/// Singular triplets with sigma > threshold only, from the Gram matrix of
/// the smaller side (a Hermitian eigenproblem restricted to [threshold^2, inf)).
/// Sorted non-increasing; V (or U) is recovered as A^* U / sigma. Falls back
/// to the full SVD when threshold^2 is too close to rounding level of |A|^2.
SvdFactors svd_above(const Mat& a, double threshold);

/// Soft-ramp threshold map, the closed-form singular value minimizer of
///   s -> s0^2 - max(s0 - s, 0)^2 + (s - x)^2 + (alpha/2) s^2.
/// alpha == 0 is the hard threshold with f(s0) = s0.
double f_alpha(double x, double sigma0, double alpha);

inline double f_zero(double x, double sigma0) { return f_alpha(x, sigma0, 0.0); }

using ScalarMap = std::function<double(double)>;

/// Singular value functional calculus: U diag(f(sigma)) V^*.
Mat apply_svfc(const Mat& a, const ScalarMap& f);
Mat apply_svfc(const SvdFactors& factors, const ScalarMap& f);

/// U diag(values) V^* using only the columns with a nonzero value.
Mat compose(const SvdFactors& factors, const RVec& values);

/// Number of singular values strictly above rel_tol * sigma_1.
int numerical_rank(const Mat& a, double rel_tol = kDefaultRankTol);
int numerical_rank(const RVec& sigma, double rel_tol = kDefaultRankTol);

/// Caps the BLAS thread count when the backend exposes a setter (OpenBLAS).
void set_blas_threads(int n);

} // namespace slra
