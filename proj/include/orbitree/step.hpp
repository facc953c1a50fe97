#ifndef ORBITREE_STEP_HPP
#define ORBITREE_STEP_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "orbitree/af.hpp"

namespace orbitree {

enum class StepKind { e, eu, co };
enum class Marker { single, orbit, parametric };

std::string marker_name(Marker m);

/* One representative of an e-step output class. A `single` carries no t;
 * an `orbit` family stands for one infinite conjugation orbit with a
 * verified acting witness; `parametric` is an unverified one-parameter
 * family whose representative carries the formal value t. */
struct TermFamily {
    AF rep;
    Marker marker = Marker::single;
    std::string witness;  // human-readable witness description, empty for single

    TermFamily() = default;
    TermFamily(AF r, Marker m, std::string w = "") : rep(std::move(r)), marker(m), witness(std::move(w)) {}
};

/* A one-parameter diagonal torus witness: exponents d_i; conjugation by
 * diag(u^{d_1},...,u^{d_n}) scales the expanding coordinate by u^chi. */
struct TorusWitness {
    std::vector<long> exponents;
    long chi = 0;
    std::string str() const;
};

/* Result of expanding an AF over a one-dimensional group V. The terms of the
 * step are the AFs extending the input to V D_F; they form an affine line in
 * the value on the new direction. The line is reported as: the constant term
 * (value 0), finitely many split-off special values where the canonical value
 * pattern degenerates, and one family covering the generic values. When a
 * translation witness moves the whole line transitively, everything collapses
 * to a single orbit family. */
struct EStepTerms {
    AF input;
    UnipotentGroup direction_group;
    SparseMat direction;  // new Lie direction, leading coefficient 1

    bool whole_line_orbit = false;  // translation witness: one orbit, no constant
    TermFamily constant;            // engaged unless whole_line_orbit
    std::vector<TermFamily> specials;
    std::vector<Rat> special_values;  // the split-off parameter values, aligned
    std::optional<TermFamily> family;  // generic nonzero values; orbit or parametric
    // a parametric family was opened while the input already carried t; its
    // representative uses a concrete stand-in value and the run is flagged
    bool nested_parametric = false;
    std::string desc;

    std::vector<TermFamily> all_terms() const;
};

/* A depth-one subtree: the executable form of one A-operation. */
struct Step {
    StepKind kind;
    AF input;
    // e-step payload
    std::optional<EStepTerms> e;
    // eu-step payload
    std::optional<AF> eu_output;
    UnipotentGroup eu_x, eu_y;
    // co-step payload
    std::optional<AF> co_output;
    Mat conjugator;
    std::string desc;

    std::vector<TermFamily> outputs() const;
};

/* Finite directed out-tree; vertices carry term families, each depth-one
 * subtree is a step. Families provide the finite encoding of infinite
 * e-step branching. */
struct Tree {
    struct Node {
        TermFamily term;
        StepKind from_kind = StepKind::co;  // kind of the step that produced this node
        std::string step_desc;              // description of that step
        std::vector<size_t> children;
        bool is_family_member = false;  // below an orbit/parametric vertex
    };
    std::vector<Node> nodes;
    size_t root = 0;

    static Tree trivial(const AF& f);
    const AF& input_af() const { return nodes[root].term.rep; }
    std::vector<size_t> output_vertices() const;
    size_t depth() const;
    // break_family detaches the child from an enclosing family: it represents
    // one extracted member, not the generic line
    size_t add_child(size_t parent, TermFamily term, StepKind kind, std::string desc,
                     bool break_family = false);
    bool is_eu_co_path() const;
    uint64_t digest() const;
};

/* e-step over a one-dimensional V. Preconditions of the expansion operation
 * are checked exactly: D_F contains [V,V], V fixes F, F(V cap D_F) = 0.
 * When the input is the restriction of a composed AF (peeled first rows),
 * peel_values carries the row characters outward-in; witnesses are then
 * required to fix the composed functional, not merely the restriction. */
EStepTerms e_step(const AF& f, const UnipotentGroup& v, bool search_witness = true,
                  const std::vector<Scalar>& peel_values = {});

// chain of one-dimensional e-steps along the complement basis of V modulo D_F,
// ordered by (row, column); returns the steps in application order
std::vector<UnipotentGroup> e_chain_directions(const AF& f, const UnipotentGroup& v);

/* Exchange step. Computes C = D_F with the Lie(Y)-complement removed, checks
 * conditions 1-4 of the exchange operation and the nondegeneracy of the
 * commutator pairing, and returns the output AF on X C. Throws with a
 * distinct message per failed condition. */
AF eu_step(const AF& f, const UnipotentGroup& x, const UnipotentGroup& y);

// conjugation step
AF co_step(const AF& f, const Mat& g);

/* Grafting: attach child trees at the output vertices whose labels equal the
 * child's input AF. Children are matched by exact AF equality. */
Tree graft(const std::vector<Tree>& children, const Tree& parent);

// reverse an (eu,co)-path; composing the two paths is the identity on AFs
Tree invert_path(const Tree& path);

// vertexwise composition with f (checked) and vertexwise standard embedding
Tree tree_compose(const Tree& tr, const AF& f);
Tree tree_embed(const std::vector<size_t>& index_map, size_t ambient_target, const Tree& tr);

// multi-dimensional e-step as a single tree layer with a declared chosen term,
// used by row-expansion (B-type) paths
struct BigEStep {
    AF input;
    UnipotentGroup v;
    AF chosen;                         // the designated nonconstant output
    std::vector<SparseMat> witness;    // Lie generators of the declared acting group
    std::string desc;
};

}  // namespace orbitree

#endif
