#ifndef ORBITREE_CANONICAL_HPP
#define ORBITREE_CANONICAL_HPP

#include <functional>
#include <map>
#include <set>

#include "orbitree/step.hpp"

namespace orbitree {

/* One eu- or co-step inside the canonical expansion path. */
struct PathStep {
    StepKind kind;  // eu or co
    AF output;
    std::string desc;
    bool final_weyl = false;  // the case-ending minimal-length Weyl conjugation
    // payloads for validation / replay
    UnipotentGroup eu_x, eu_y;
    Mat conjugator;
};

/* One level of the canonical tree construction: an initial (eu,co)-segment
 * followed by a terminal action. */
struct XiLevel {
    enum class Terminal { done, peel, expand } terminal;
    std::vector<PathStep> pre_steps;
    // peel: the first row splits off; y_value is the value on the (1,2) root,
    // inner is the restriction to the lower right corner, one size down
    Scalar y_value;
    AF inner;
    // expand: the next expansion direction
    UnipotentGroup e_dir;
    // t-values at which some decision in this level flips
    std::vector<Rat> splits;
};

/* Computes one level of the canonical construction for an AF with domain
 * inside the upper triangular group. Decisions over Q(t) are taken
 * generically, recording the rational t-values where they flip. */
XiLevel xi_level(const AF& f);

// full canonical tree (materialized; families encode infinite branching)
Tree xi_st(const AF& f, size_t node_budget = 100000);

// largest initial (eu,co)-subpath of the canonical tree, and its output
Tree i_st(const AF& f);
AF iota_st(const AF& f);
// initial subpath up to the (k-1)-th case-ending Weyl conjugation; k=1 trivial
Tree i_st_k(const AF& f, size_t k);
AF iota_st_k(const AF& f, size_t k);

struct MultCount {
    bool infinite = false;
    uint64_t count = 0;
    // an unverified parametric family contributed to this class
    bool from_parametric = false;
};

struct OrbitReport {
    std::set<Partition> omega;
    std::map<Partition, MultCount> mult;      // defined exactly on omega
    std::set<Partition> omega_fin;
    std::map<Partition, MultCount> all_classes;  // every class reached
    bool witness_complete = true;
    bool nested_parametric = false;
    bool irrational_specials = false;
    uint64_t digest = 0;
    uint64_t leaves = 0;
    uint64_t nodes = 0;
    Tree witness_tree;
    bool tree_truncated = false;
    std::string str() const;
};

struct ExpandLimits {
    uint64_t max_nodes = 200000000;
    double timeout_s = 0;       // 0 = unlimited
    size_t tree_budget = 4000;  // materialized tree nodes
};

// canonical strategy: recursive expansion of the canonical tree
OrbitReport omega_report(const AF& f, const ExpandLimits& limits = {});

/* Guided strategy: a caller-supplied tree is validated, then every output is
 * classified (outputs must be on parabolic radicals); outputs reached under a
 * family vertex count as infinite. */
OrbitReport omega_report_guided(const Tree& guided, const ExpandLimits& limits = {});

// orbit class of an AF on a parabolic radical (in particular on U_n)
Partition orbit_class(const AF& f);

// true when D_F is the unipotent radical of a standard parabolic; fills blocks
bool is_parabolic_radical(const AF& f, std::vector<long>* blocks = nullptr);

/* Conjugation into no-two-comparable-roots form for AFs on parabolic
 * radicals; returns the conjugator and the conjugated AF. */
std::pair<Mat, AF> to_nless(const AF& f);

// the paper's reduction tree for radical AFs: one output in the class of J_F,
// all others in strictly bigger classes (post-conditions asserted)
Tree radexpress(const AF& f, size_t node_budget = 100000);

enum class MaincorVerdict { below, critical, above };
MaincorVerdict main_corollary_check(const AF& f, const Partition& a);

// validity of a claimed generic path: every e-step carries a free transitive
// witness on an open set containing the chosen child
bool b_path_validate(const std::vector<BigEStep>& path, std::string* why = nullptr);

// J_F lies in the Richardson orbit openly intersecting Lie(D_F)
bool prime_b_membership(const AF& f);

struct ExchangeInstance {
    AF f, f1, f2, f1p, f2p;
};
// checks the certificate preconditions and the set identity on Omega_fin
bool exchange_corollary(const ExchangeInstance& inst, const ExpandLimits& limits = {},
                        std::string* log = nullptr);

// row-expansion path of a hat AF (each nontrivial row carries one nonzero
// value); returns the validated path
std::vector<BigEStep> brow_path(const AF& k);

}  // namespace orbitree

#endif
