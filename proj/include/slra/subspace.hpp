#pragma once

#include "slra/matops.hpp"

#include <string>

namespace slra {

/// A linear subspace M of (rows x cols) matrices, exposed through its
/// orthogonal projector. Solvers consume only project / project_complement.
class SubspaceOp {
public:
    virtual ~SubspaceOp() = default;

    virtual Index rows() const = 0;
    virtual Index cols() const = 0;
    virtual std::string label() const = 0;

    /// Orthogonal projection onto M. Linear, idempotent, self-adjoint.
    virtual Mat project(const Mat& x) const = 0;

    /// x - project(x), the projection onto the orthogonal complement.
    Mat project_complement(const Mat& x) const;

protected:
    void check_shape(const Mat& x, const char* what) const;
};

struct HankelSpec {
    Index rows = 1;
    Index cols = 1;

    Index length() const { return rows + cols - 1; }
    void validate() const;

    /// Square-ish shape for a generating vector of the given length.
    static HankelSpec for_length(Index length);
};

/// Hankel matrices H(j,k) = v(j+k). Projection averages each antidiagonal.
class HankelSubspace final : public SubspaceOp {
public:
    explicit HankelSubspace(HankelSpec spec);

    Index rows() const override { return spec_.rows; }
    Index cols() const override { return spec_.cols; }
    std::string label() const override;
    Mat project(const Mat& x) const override;

    const HankelSpec& spec() const { return spec_; }
    const RVec& antidiagonal_lengths() const { return lengths_; }

    CVec to_vector(const Mat& x) const;
    Mat from_vector(const CVec& v) const;

private:
    HankelSpec spec_;
    RVec lengths_;
};

/// M = {0}; every matrix lies in the complement.
class ZeroSubspace final : public SubspaceOp {
public:
    ZeroSubspace(Index rows, Index cols) : rows_(rows), cols_(cols) {}

    Index rows() const override { return rows_; }
    Index cols() const override { return cols_; }
    std::string label() const override { return "zero"; }
    Mat project(const Mat& x) const override;

private:
    Index rows_;
    Index cols_;
};

Mat hankel_project(const Mat& x, const HankelSpec& spec);
Mat complement_project(const Mat& x, const SubspaceOp& sub);
Mat hankel_from_vector(const CVec& v, const HankelSpec& spec);

/// Antidiagonal means; the exact inverse of hankel_from_vector on Hankel input.
CVec vector_from_hankel(const Mat& x, const HankelSpec& spec);

} // namespace slra
