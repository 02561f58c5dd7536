#include "slra/subspace.hpp"

#include <algorithm>

namespace slra {

namespace {

RVec antidiagonal_counts(const HankelSpec& spec) {
    RVec len(spec.length());
    for (Index s = 0; s < len.size(); ++s) {
        len[s] = static_cast<double>(std::min({s + 1, spec.rows, spec.cols, spec.length() - s}));
    }
    return len;
}

CVec antidiagonal_means(const Mat& x, const HankelSpec& spec, const RVec& lengths) {
    CVec sums = CVec::Zero(spec.length());
    for (Index k = 0; k < spec.cols; ++k)
        for (Index j = 0; j < spec.rows; ++j) sums[j + k] += x(j, k);
    return sums.cwiseQuotient(lengths.cast<cplx>());
}

Mat expand(const CVec& v, const HankelSpec& spec) {
    Mat h(spec.rows, spec.cols);
    for (Index k = 0; k < spec.cols; ++k)
        for (Index j = 0; j < spec.rows; ++j) h(j, k) = v[j + k];
    return h;
}

void check_spec_shape(const Mat& x, const HankelSpec& spec, const char* what) {
    if (x.rows() != spec.rows || x.cols() != spec.cols) {
        throw ShapeError(std::string(what) + ": matrix is " + std::to_string(x.rows()) + "x" +
                         std::to_string(x.cols()) + ", Hankel spec is " + std::to_string(spec.rows) +
                         "x" + std::to_string(spec.cols));
    }
}

} // namespace

Mat SubspaceOp::project_complement(const Mat& x) const { return x - project(x); }

void SubspaceOp::check_shape(const Mat& x, const char* what) const {
    if (x.rows() != rows() || x.cols() != cols()) {
        throw ShapeError(std::string(what) + ": expected " + std::to_string(rows()) + "x" +
                         std::to_string(cols()) + ", got " + std::to_string(x.rows()) + "x" +
                         std::to_string(x.cols()));
    }
}

void HankelSpec::validate() const {
    if (rows < 1 || cols < 1) throw DomainError("HankelSpec: rows and cols must be >= 1");
}

HankelSpec HankelSpec::for_length(Index length) {
    if (length < 1) throw DomainError("HankelSpec::for_length: length must be >= 1");
    const Index rows = length / 2 + 1;
    return HankelSpec{rows, length - rows + 1};
}

HankelSubspace::HankelSubspace(HankelSpec spec) : spec_(spec) {
    spec_.validate();
    lengths_ = antidiagonal_counts(spec_);
}

std::string HankelSubspace::label() const {
    return "hankel " + std::to_string(spec_.rows) + "x" + std::to_string(spec_.cols);
}

Mat HankelSubspace::project(const Mat& x) const {
    check_shape(x, "HankelSubspace::project");
    return expand(antidiagonal_means(x, spec_, lengths_), spec_);
}

CVec HankelSubspace::to_vector(const Mat& x) const {
    check_shape(x, "HankelSubspace::to_vector");
    return antidiagonal_means(x, spec_, lengths_);
}

Mat HankelSubspace::from_vector(const CVec& v) const { return hankel_from_vector(v, spec_); }

Mat ZeroSubspace::project(const Mat& x) const {
    check_shape(x, "ZeroSubspace::project");
    return Mat::Zero(rows_, cols_);
}

Mat hankel_project(const Mat& x, const HankelSpec& spec) {
    return hankel_from_vector(vector_from_hankel(x, spec), spec);
}

Mat complement_project(const Mat& x, const SubspaceOp& sub) { return sub.project_complement(x); }

Mat hankel_from_vector(const CVec& v, const HankelSpec& spec) {
    spec.validate();
    if (v.size() != spec.length()) {
        throw ShapeError("hankel_from_vector: vector length " + std::to_string(v.size()) +
                         " does not match rows + cols - 1 = " + std::to_string(spec.length()));
    }
    return expand(v, spec);
}

CVec vector_from_hankel(const Mat& x, const HankelSpec& spec) {
    spec.validate();
    check_spec_shape(x, spec, "vector_from_hankel");
    return antidiagonal_means(x, spec, antidiagonal_counts(spec));
}

} // namespace slra
