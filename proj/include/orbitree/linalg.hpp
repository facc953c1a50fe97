#ifndef ORBITREE_LINALG_HPP
#define ORBITREE_LINALG_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "orbitree/scalar.hpp"

namespace orbitree {

/* Dense matrix over Q or Q(t). Row-major. */
class Mat {
public:
    Mat() : rows_(0), cols_(0) {}
    Mat(size_t rows, size_t cols) : rows_(rows), cols_(cols), e_(rows * cols) {}

    static Mat identity(size_t n);
    static Mat zero(size_t rows, size_t cols) { return Mat(rows, cols); }
    // elementary matrix unit e_{ij} (1-based indices throughout the project)
    static Mat unit(size_t n, size_t i, size_t j);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    Scalar& operator()(size_t i, size_t j) { return e_[(i - 1) * cols_ + (j - 1)]; }
    const Scalar& operator()(size_t i, size_t j) const { return e_[(i - 1) * cols_ + (j - 1)]; }

    Mat operator+(const Mat& o) const;
    Mat operator-(const Mat& o) const;
    Mat operator*(const Mat& o) const;
    Mat operator*(const Scalar& s) const;
    bool operator==(const Mat& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_; }

    Mat transpose() const;
    Scalar trace() const;
    bool is_zero() const;
    Mat substitute(const Rat& t) const;
    bool depends_on_t() const;

private:
    size_t rows_, cols_;
    std::vector<Scalar> e_;
};

// exact rank over the fraction field; for Q(t) entries this is the generic rank
size_t matrix_rank(Mat m);

// [rank(m^1), ..., rank(m^kmax)]; m must be square
std::vector<size_t> power_rank_sequence(const Mat& m, size_t kmax);

// inverse of a square invertible matrix; throws if singular
Mat inverse(const Mat& m);

/* Solution set of a linear system A x = b described as one particular point
 * plus a basis of the kernel of A. */
struct AffineSubspace {
    size_t ambient = 0;
    std::vector<Scalar> point;                // length = ambient
    std::vector<std::vector<Scalar>> kernel;  // each length = ambient
    size_t dim() const { return kernel.size(); }
};

/* Exact parametrization of { x : <form_i, x> = rhs_i }; nullopt if the
 * constraints are inconsistent. Forms are dense coordinate rows over the
 * ambient space. */
std::optional<AffineSubspace> affine_solve(
    const std::vector<std::pair<std::vector<Scalar>, Scalar>>& constraints, size_t ambient);

// one solution of A x = b with A given by rows; nullopt if inconsistent
std::optional<std::vector<Scalar>> solve_linear(
    const std::vector<std::vector<Scalar>>& rows, const std::vector<Scalar>& rhs);

}  // namespace orbitree

#endif
