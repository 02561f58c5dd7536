#include "slra/matops.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

extern "C" {
void openblas_set_num_threads(int) __attribute__((weak));
void zherk_(const char* uplo, const char* trans, const int* n, const int* k, const double* alpha,
            const std::complex<double>* a, const int* lda, const double* beta, std::complex<double>* c,
            const int* ldc);
}

namespace slra {

Mat SvdFactors::reconstruct() const { return U * sigma.asDiagonal() * V.adjoint(); }

void require_same_shape(const Mat& a, const Mat& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ShapeError(std::string(what) + ": shape mismatch (" + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()) + ")");
    }
}

void require_finite(const Mat& a, const char* what) {
    if (!a.allFinite()) throw DomainError(std::string(what) + ": non-finite entry");
}

double frobenius_inner(const Mat& a, const Mat& b) {
    require_same_shape(a, b, "frobenius_inner");
    // Re(conj(a) b) = Re a Re b + Im a Im b
    return a.real().cwiseProduct(b.real()).sum() + a.imag().cwiseProduct(b.imag()).sum();
}

namespace {

// gesdd overwrites its input, so take a copy.
lapack_int run_gesdd(char job, Mat work, RVec& s, Mat* u, Mat* vt) {
    const lapack_int m = static_cast<lapack_int>(work.rows());
    const lapack_int n = static_cast<lapack_int>(work.cols());
    const lapack_int k = std::min(m, n);
    s.resize(k);
    if (job == 'N') {
        cplx dummy{};
        return LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, work.data(), m, s.data(), &dummy, 1,
                              &dummy, 1);
    }
    u->resize(m, k);
    vt->resize(k, n);
    return LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'S', m, n, work.data(), m, s.data(), u->data(), m,
                          vt->data(), k);
}

void check_info(lapack_int info) {
    if (info > 0) throw NumericalError("svd: singular value decomposition did not converge");
    if (info < 0) throw std::logic_error("svd: invalid argument " + std::to_string(-info));
}

} // namespace

SvdFactors svd(const Mat& a) {
    require_finite(a, "svd");
    if (a.size() == 0) throw ShapeError("svd: empty matrix");
    SvdFactors out;
    Mat vt;
    check_info(run_gesdd('S', a, out.sigma, &out.U, &vt));
    out.V = vt.adjoint();
    return out;
}

RVec singular_values(const Mat& a) {
    require_finite(a, "singular_values");
    if (a.size() == 0) throw ShapeError("singular_values: empty matrix");
    RVec s;
    check_info(run_gesdd('N', a, s, nullptr, nullptr));
    return s;
}

SvdFactors svd_above(const Mat& a, double threshold) {
    require_finite(a, "svd_above");
    if (a.size() == 0) throw ShapeError("svd_above: empty matrix");
    if (!(threshold > 0.0)) throw DomainError("svd_above: threshold must be positive");
    const double total = a.squaredNorm();
    if (threshold * threshold <= 1e-10 * total) return svd(a);

    const bool tall = a.rows() > a.cols();
    const Index n = tall ? a.cols() : a.rows();
    // upper triangle of A A^* (wide) or A^* A (tall)
    Mat gram(n, n);
    {
        const int ni = static_cast<int>(n);
        const int ki = static_cast<int>(tall ? a.rows() : a.cols());
        const int lda = static_cast<int>(a.rows());
        const double one = 1.0;
        const double zero = 0.0;
        const char uplo = 'U';
        const char trans = tall ? 'C' : 'N';
        zherk_(&uplo, &trans, &ni, &ki, &one, a.data(), &lda, &zero, gram.data(), &ni);
    }
    RVec w(n);
    Mat z(n, n);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
    lapack_int found = 0;
    const lapack_int ni = static_cast<lapack_int>(n);
    const lapack_int info =
        LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'V', 'U', ni, gram.data(), ni, threshold * threshold,
                       2.0 * total + 1.0, 0, 0, 0.0, &found, w.data(), z.data(), ni, support.data());
    check_info(info);

    SvdFactors out;
    out.sigma.resize(found);
    Mat vecs(n, found);
    // zheevr returns ascending eigenvalues
    for (lapack_int j = 0; j < found; ++j) {
        out.sigma[j] = std::sqrt(std::max(w[found - 1 - j], 0.0));
        vecs.col(j) = z.col(found - 1 - j);
    }
    Mat other = tall ? Mat(a * vecs) : Mat(a.adjoint() * vecs);
    for (lapack_int j = 0; j < found; ++j) other.col(j) /= out.sigma[j];
    if (tall) {
        out.V = std::move(vecs);
        out.U = std::move(other);
    } else {
        out.U = std::move(vecs);
        out.V = std::move(other);
    }
    return out;
}

double f_alpha(double x, double sigma0, double alpha) {
    if (!(x >= 0.0) || !(sigma0 > 0.0) || !(alpha >= 0.0) || !std::isfinite(x) ||
        !std::isfinite(sigma0) || !std::isfinite(alpha)) {
        throw DomainError("f_alpha: requires x >= 0, sigma0 > 0, alpha >= 0");
    }
    if (x < sigma0) return 0.0;
    if (alpha == 0.0) return x;
    const double knee = (1.0 + alpha / 2.0) * sigma0;
    if (x < knee) return (2.0 / alpha) * (x - sigma0);
    return x / (1.0 + alpha / 2.0);
}

Mat compose(const SvdFactors& factors, const RVec& values) {
    const Index rows = factors.U.rows();
    const Index cols = factors.V.rows();
    std::vector<Index> keep;
    for (Index j = 0; j < values.size(); ++j)
        if (values[j] != 0.0) keep.push_back(j);
    if (keep.empty()) return Mat::Zero(rows, cols);
    const Index r = static_cast<Index>(keep.size());
    Mat us(rows, r);
    Mat v(cols, r);
    for (Index c = 0; c < r; ++c) {
        us.col(c) = factors.U.col(keep[c]) * values[keep[c]];
        v.col(c) = factors.V.col(keep[c]);
    }
    return us * v.adjoint();
}

Mat apply_svfc(const SvdFactors& factors, const ScalarMap& f) {
    RVec mapped(factors.sigma.size());
    for (Index j = 0; j < mapped.size(); ++j) mapped[j] = f(factors.sigma[j]);
    return compose(factors, mapped);
}

Mat apply_svfc(const Mat& a, const ScalarMap& f) { return apply_svfc(svd(a), f); }

int numerical_rank(const RVec& sigma, double rel_tol) {
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw DomainError("numerical_rank: rel_tol must lie in (0, 1)");
    if (sigma.size() == 0 || sigma[0] == 0.0) return 0;
    const double cut = rel_tol * sigma[0];
    return static_cast<int>((sigma.array() > cut).count());
}

int numerical_rank(const Mat& a, double rel_tol) { return numerical_rank(singular_values(a), rel_tol); }

void set_blas_threads(int n) {
    if (openblas_set_num_threads != nullptr) openblas_set_num_threads(std::max(1, n));
}

} // namespace slra
