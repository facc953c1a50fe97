#ifndef ORBITREE_AF_HPP
#define ORBITREE_AF_HPP

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "orbitree/lie.hpp"
#include "orbitree/partition.hpp"

namespace orbitree {

/* An additive functional: a linear functional on the Lie algebra of a
 * unipotent subgroup of GL_n vanishing on brackets, identified with the
 * algebraic homomorphism D_F -> K via exp. Values are stored against the
 * canonical echelon basis of the domain span. */
class AF {
public:
    AF() = default;
    // pairs of (lie element, value); the span is canonicalized and the
    // functional checked for linear consistency and bracket vanishing
    AF(size_t ambient, const std::vector<std::pair<SparseMat, Scalar>>& gens);

    static AF trivial(const UnipotentGroup& domain);             // F_emptyset on given domain
    static AF empty(size_t ambient);                             // F_{emptyset,n}
    static AF whittaker(size_t ambient);                         // W_n, coefficients 1
    // J_r^n: rows 1..r-1 full; value 1 on the simple roots it contains
    static AF j_r(size_t ambient, size_t r);

    size_t ambient() const { return n_; }
    const UnipotentGroup& domain() const { return dom_; }
    size_t dim() const { return dom_.dim(); }
    const std::vector<Scalar>& values() const { return vals_; }

    // value on an element of Lie(D_F); throws if outside the span
    Scalar value(const SparseMat& x) const;
    // value on the root direction e_{ij}; zero when e_{ij} is not in the span
    Scalar root_value(size_t i, size_t j) const;
    bool has_root(size_t i, size_t j) const;  // e_{ij} lies in Lie(D_F)

    bool operator==(const AF& o) const;

    // true when every basis vector is a single root position
    bool is_root_generated() const;
    // positions (i,j) on which D_F is nontrivial
    std::vector<std::pair<size_t, size_t>> support() const;

    AF substitute(const Rat& t) const;
    bool depends_on_t() const;
    // t-values at which some canonical basis value vanishes non-identically
    std::vector<Rat> special_t_values() const;

    std::string str() const;

private:
    size_t n_ = 0;
    UnipotentGroup dom_;
    std::vector<Scalar> vals_;  // per canonical basis vector
    friend AF af_from_canonical(size_t, UnipotentGroup, std::vector<Scalar>);
};

// internal fast path: basis already canonical, values aligned; still validated
AF af_from_canonical(size_t ambient, UnipotentGroup dom, std::vector<Scalar> vals);

/* Assemble an AF from spanning pairs without re-validating the domain group;
 * linear consistency of the values is still enforced. For spans derived from
 * already-validated groups (conjugates, restrictions, extensions). */
AF af_assemble_unchecked(size_t ambient, const std::vector<std::pair<SparseMat, Scalar>>& gens);

// gamma F: domain conjugated, values transported (x -> F(g^{-1} x g))
AF conjugate_af(const Mat& g, const AF& f);
// conjugation by the permutation w given as images w[i] = w(i), 1-based
AF conjugate_af_perm(const std::vector<size_t>& w, const AF& f);

// restriction F|_H on D_F intersect H
AF restrict(const AF& f, const UnipotentGroup& h);

/* f2 o f1: the unique common extension to N2 N1. Checks: N1 normal in the
 * product, values agree on the intersection, and every element of N2 fixes
 * f1 (ad-invariance through all orders). Throws on violation. */
AF compose(const AF& f2, const AF& f1);

// standard embedding along the injective index map (1-based, size m)
AF standard_embed(const std::vector<size_t>& index_map, size_t ambient_target, const AF& f);

// restriction of f to the largest root-generated subgroup of D_F
AF rg(const AF& f);

// the unique element of D_F^t cap X_F for torus-stable root-generated domains
Mat j_matrix(const AF& f);

// X_F = { J : tr(J u) = F(exp u) for u in Lie D_F }
AffineSubspace x_variety(const AF& f);

// deterministic rational sample points of an affine subspace
std::vector<Mat> sample_points(const AffineSubspace& xs, size_t ambient, size_t count,
                               uint64_t seed);

// J -> (u -> tr(J u)) as an AF on n; throws if some J yields no AF
AF itr_point(const Mat& j, const UnipotentGroup& n);

/* Membership predicate "exp(line) lies in the stabilizer of f", optionally
 * also requiring the line to sit inside a given group. */
struct StabCondition {
    AF target;
    std::optional<UnipotentGroup> inside;
    bool contains_line(const SparseMat& v) const;
};

// group-level check that exp(s x) fixes f for all s (all ad-orders)
bool fixes_af(const SparseMat& x, const AF& f);
// first-order stabilizer cut: { w in W : ad(w) Lie D in Lie D, f(ad(w) y) = 0 }
std::vector<SparseMat> stabilizer_lie_cut(const AF& f, const std::vector<SparseMat>& ambient_basis);

/* H-minimality of an a2-1d group (Definition of picture minimality): no
 * proper nonempty root projection of v stays inside H. */
bool h_minimal(const UnipotentGroup& v, const StabCondition& h);

/* D_n-components of the connected diagonal-torus stabilizer of f, for
 * root-generated torus-stable domains: connected components of the graph on
 * {1..n} whose edges are the positions carrying nonzero values. */
std::vector<std::set<size_t>> stab_torus_components(const AF& f);

// is_a2_1d on groups lives in lie.hpp; this checks the span of one element
bool is_a2_1d_element(size_t ambient, const SparseMat& v);

}  // namespace orbitree

#endif
