#include "orbitree/linalg.hpp"

#include <stdexcept>

namespace orbitree {

Mat Mat::identity(size_t n) {
    Mat m(n, n);
    for (size_t i = 1; i <= n; ++i) m(i, i) = Scalar(1);
    return m;
}

Mat Mat::unit(size_t n, size_t i, size_t j) {
    Mat m(n, n);
    m(i, j) = Scalar(1);
    return m;
}

Mat Mat::operator+(const Mat& o) const {
    Mat r(rows_, cols_);
    for (size_t k = 0; k < e_.size(); ++k) r.e_[k] = e_[k] + o.e_[k];
    return r;
}

Mat Mat::operator-(const Mat& o) const {
    Mat r(rows_, cols_);
    for (size_t k = 0; k < e_.size(); ++k) r.e_[k] = e_[k] - o.e_[k];
    return r;
}

Mat Mat::operator*(const Mat& o) const {
    if (cols_ != o.rows_) throw std::logic_error("matrix dimension mismatch");
    Mat r(rows_, o.cols_);
    for (size_t i = 1; i <= rows_; ++i)
        for (size_t k = 1; k <= cols_; ++k) {
            const Scalar& a = (*this)(i, k);
            if (a.is_zero()) continue;
            for (size_t j = 1; j <= o.cols_; ++j) {
                const Scalar& b = o(k, j);
                if (!b.is_zero()) r(i, j) += a * b;
            }
        }
    return r;
}

Mat Mat::operator*(const Scalar& s) const {
    Mat r(rows_, cols_);
    for (size_t k = 0; k < e_.size(); ++k) r.e_[k] = e_[k] * s;
    return r;
}

Mat Mat::transpose() const {
    Mat r(cols_, rows_);
    for (size_t i = 1; i <= rows_; ++i)
        for (size_t j = 1; j <= cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

Scalar Mat::trace() const {
    Scalar s(0);
    for (size_t i = 1; i <= std::min(rows_, cols_); ++i) s += (*this)(i, i);
    return s;
}

bool Mat::is_zero() const {
    for (auto& x : e_)
        if (!x.is_zero()) return false;
    return true;
}

Mat Mat::substitute(const Rat& t) const {
    Mat r(rows_, cols_);
    for (size_t k = 0; k < e_.size(); ++k) r.e_[k] = e_[k].substitute(t);
    return r;
}

bool Mat::depends_on_t() const {
    for (auto& x : e_)
        if (x.depends_on_t()) return true;
    return false;
}

namespace {

/* In-place elimination to row echelon form over the fraction field.
 * Pivot choice prefers the structurally simplest nonzero entry, which keeps
 * rational-function intermediates small. Returns the rank. */
size_t echelonize(std::vector<std::vector<Scalar>>& a, std::vector<Scalar>* rhs) {
    size_t rows = a.size();
    size_t cols = rows ? a[0].size() : 0;
    size_t rank = 0;
    for (size_t col = 0; col < cols && rank < rows; ++col) {
        size_t best = rows;
        size_t best_cx = 0;
        for (size_t r = rank; r < rows; ++r) {
            if (a[r][col].is_zero()) continue;
            size_t cx = a[r][col].complexity();
            if (best == rows || cx < best_cx) {
                best = r;
                best_cx = cx;
            }
        }
        if (best == rows) continue;
        std::swap(a[rank], a[best]);
        if (rhs) std::swap((*rhs)[rank], (*rhs)[best]);
        const Scalar pivot = a[rank][col];
        for (size_t r = 0; r < rows; ++r) {
            if (r == rank || a[r][col].is_zero()) continue;
            Scalar f = a[r][col] / pivot;
            for (size_t c = col; c < cols; ++c)
                if (!a[rank][c].is_zero()) a[r][c] -= f * a[rank][c];
            if (rhs) (*rhs)[r] -= f * (*rhs)[rank];
        }
        ++rank;
    }
    return rank;
}

}  // namespace

size_t matrix_rank(Mat m) {
    std::vector<std::vector<Scalar>> a(m.rows(), std::vector<Scalar>(m.cols()));
    for (size_t i = 1; i <= m.rows(); ++i)
        for (size_t j = 1; j <= m.cols(); ++j) a[i - 1][j - 1] = m(i, j);
    return echelonize(a, nullptr);
}

std::vector<size_t> power_rank_sequence(const Mat& m, size_t kmax) {
    if (m.rows() != m.cols()) throw std::invalid_argument("power_rank_sequence: non-square matrix");
    std::vector<size_t> out;
    Mat p = m;
    for (size_t k = 1; k <= kmax; ++k) {
        out.push_back(matrix_rank(p));
        if (k < kmax) p = p * m;
    }
    return out;
}

Mat inverse(const Mat& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse: non-square matrix");
    size_t n = m.rows();
    std::vector<std::vector<Scalar>> a(n, std::vector<Scalar>(2 * n));
    for (size_t i = 1; i <= n; ++i) {
        for (size_t j = 1; j <= n; ++j) a[i - 1][j - 1] = m(i, j);
        a[i - 1][n + i - 1] = Scalar(1);
    }
    if (echelonize(a, nullptr) != n) throw std::domain_error("inverse: singular matrix");
    Mat r(n, n);
    // echelon with full elimination: each row has a single pivot; normalize
    for (size_t i = 0; i < n; ++i) {
        size_t lead = 0;
        while (lead < n && a[i][lead].is_zero()) ++lead;
        for (size_t j = 0; j < n; ++j) r(lead + 1, j + 1) = a[i][n + j] / a[i][lead];
    }
    return r;
}

std::optional<std::vector<Scalar>> solve_linear(const std::vector<std::vector<Scalar>>& rows,
                                                const std::vector<Scalar>& rhs) {
    if (rows.empty()) return std::vector<Scalar>();
    size_t cols = rows[0].size();
    std::vector<std::pair<std::vector<Scalar>, Scalar>> cons;
    for (size_t i = 0; i < rows.size(); ++i) cons.push_back({rows[i], rhs[i]});
    auto s = affine_solve(cons, cols);
    if (!s) return std::nullopt;
    return s->point;
}

std::optional<AffineSubspace> affine_solve(
    const std::vector<std::pair<std::vector<Scalar>, Scalar>>& constraints, size_t ambient) {
    std::vector<std::vector<Scalar>> a;
    std::vector<Scalar> b;
    for (auto& [form, rhs] : constraints) {
        if (form.size() != ambient) throw std::invalid_argument("affine_solve: form dimension mismatch");
        a.push_back(form);
        b.push_back(rhs);
    }
    size_t rank = echelonize(a, &b);
    // inconsistency: a zero row with nonzero rhs
    for (size_t r = rank; r < a.size(); ++r)
        if (!b[r].is_zero()) return std::nullopt;

    AffineSubspace s;
    s.ambient = ambient;
    s.point.assign(ambient, Scalar(0));
    std::vector<size_t> lead(rank);
    std::vector<bool> is_lead(ambient, false);
    for (size_t r = 0; r < rank; ++r) {
        size_t c = 0;
        while (c < ambient && a[r][c].is_zero()) ++c;
        lead[r] = c;
        is_lead[c] = true;
    }
    for (size_t r = 0; r < rank; ++r) s.point[lead[r]] = b[r] / a[r][lead[r]];
    for (size_t c = 0; c < ambient; ++c) {
        if (is_lead[c]) continue;
        std::vector<Scalar> v(ambient, Scalar(0));
        v[c] = Scalar(1);
        for (size_t r = 0; r < rank; ++r)
            if (!a[r][c].is_zero()) v[lead[r]] = -(a[r][c] / a[r][lead[r]]);
        s.kernel.push_back(std::move(v));
    }
    return s;
}

}  // namespace orbitree
