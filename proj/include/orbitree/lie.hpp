#ifndef ORBITREE_LIE_HPP
#define ORBITREE_LIE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "orbitree/linalg.hpp"

namespace orbitree {

/* Sparse n x n matrix as sorted (flat position, value) pairs. Positions are
 * row-major, 1-based (i,j) -> (i-1)*n + (j-1). Zero values are never stored. */
class SparseMat {
public:
    SparseMat() : n_(0) {}
    explicit SparseMat(size_t n) : n_(n) {}
    static SparseMat unit(size_t n, size_t i, size_t j);

    size_t n() const { return n_; }
    bool is_zero() const { return ent_.empty(); }
    const std::vector<std::pair<uint32_t, Scalar>>& entries() const { return ent_; }

    void set(size_t i, size_t j, const Scalar& v);
    Scalar get(size_t i, size_t j) const;
    Scalar get_flat(uint32_t pos) const;
    uint32_t leading() const;  // smallest stored position; entries must be nonempty

    SparseMat operator+(const SparseMat& o) const;
    SparseMat operator-(const SparseMat& o) const;
    SparseMat scaled(const Scalar& s) const;
    bool operator==(const SparseMat& o) const { return n_ == o.n_ && ent_ == o.ent_; }

    static SparseMat bracket(const SparseMat& a, const SparseMat& b);  // ab - ba
    static SparseMat mul(const SparseMat& a, const SparseMat& b);

    Mat dense() const;
    static SparseMat from_dense(const Mat& m);
    SparseMat substitute(const Rat& t) const;
    bool depends_on_t() const;

    static std::pair<size_t, size_t> pos_of(uint32_t flat, size_t n) {
        return {flat / n + 1, flat % n + 1};
    }

private:
    size_t n_;
    std::vector<std::pair<uint32_t, Scalar>> ent_;
    void prune();
    friend class SpanBasis;
};

/* A linear span of sparse matrices kept in reduced echelon form with respect
 * to the flat position order: each basis vector has a leading position with
 * coefficient 1, and that position is zero in every other basis vector.
 * This makes membership, reduction and coordinates canonical. */
class SpanBasis {
public:
    SpanBasis() : n_(0) {}
    explicit SpanBasis(size_t n) : n_(n) {}

    size_t n() const { return n_; }
    size_t dim() const { return basis_.size(); }
    const std::vector<SparseMat>& basis() const { return basis_; }

    // returns true if v enlarged the span
    bool insert(const SparseMat& v);
    // residue of v modulo the span (zero iff v is in the span)
    SparseMat reduce(const SparseMat& v) const;
    bool contains(const SparseMat& v) const { return reduce(v).is_zero(); }
    // coordinates of v in this basis; nullopt if v is outside the span
    std::optional<std::vector<Scalar>> coordinates(const SparseMat& v) const;

    static SpanBasis intersect(const SpanBasis& a, const SpanBasis& b);
    bool contains_span(const SpanBasis& other) const;
    bool operator==(const SpanBasis& o) const;

private:
    size_t n_;
    std::vector<SparseMat> basis_;  // sorted by leading position
};

/* A unipotent algebraic subgroup of GL_n represented by its Lie algebra:
 * a bracket-closed span of nilpotent matrices admitting a common Engel flag.
 * The group is recovered as exp of the span and never materialized. */
class UnipotentGroup {
public:
    UnipotentGroup() = default;
    // validates bracket closure and the Engel flag; basis may be any spanning set
    UnipotentGroup(size_t ambient, const std::vector<SparseMat>& basis);

    static UnipotentGroup trivial(size_t ambient);
    static UnipotentGroup root_group(size_t ambient, size_t i, size_t j);
    // full upper triangular unipotent radical of the Borel
    static UnipotentGroup upper(size_t ambient);
    // unipotent radical of the standard parabolic with the given Levi block sizes
    static UnipotentGroup parabolic_radical(size_t ambient, const std::vector<long>& blocks);

    size_t ambient() const { return n_; }
    size_t dim() const { return lie_.dim(); }
    const SpanBasis& lie() const { return lie_; }

    bool contains(const UnipotentGroup& h) const { return lie_.contains_span(h.lie_); }
    bool contains(const SparseMat& v) const { return lie_.contains(v); }
    bool operator==(const UnipotentGroup& o) const { return n_ == o.n_ && lie_ == o.lie_; }

    // minimal bracket-closed span containing gens; throws when the closure
    // admits no Engel flag (an invalid generating set)
    static UnipotentGroup from_generators(size_t ambient, const std::vector<SparseMat>& gens);

    // trusted constructor for spans derived from already-validated groups
    // (conjugates, expansion extensions, restrictions along group maps)
    static UnipotentGroup unchecked(size_t ambient, SpanBasis lie);

    UnipotentGroup intersect(const UnipotentGroup& o) const;
    // product group VW (requires the result to be a group; checked)
    static UnipotentGroup product(const UnipotentGroup& a, const UnipotentGroup& b);

    // true iff dim <= 1 and the single generator's support consists of pairwise
    // non-interacting root positions (no alpha+beta or alpha-beta a root)
    bool is_a2_1d() const;

private:
    size_t n_ = 0;
    SpanBasis lie_;
    void validate() const;
};

// pairwise non-interacting root positions test used by a2-1d groups
bool roots_non_interacting(size_t n, const std::vector<std::pair<size_t, size_t>>& pos);

}  // namespace orbitree

#endif
