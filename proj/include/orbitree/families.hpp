#ifndef ORBITREE_FAMILIES_HPP
#define ORBITREE_FAMILIES_HPP

#include "orbitree/canonical.hpp"

namespace orbitree {

/* A built family instance: the realized AF plus enough metadata to certify
 * and verify it. */
struct FamilySpec {
    std::string variant;
    AF realized;
    AF base;         // the radical part (FF or J_k composition base), when meaningful
    AF head;         // the composed head (K or W_n image), when meaningful
    size_t n = 0, k = 0, l = 0;
    Partition a;
    std::vector<long> ff_blocks;
};

/* Staircase AF on the radical with the given Levi blocks: consecutive blocks
 * are linked at matching depths with coefficient 1; the block at position
 * `skip_block` (1-based, 0 = none) omits the link out of its first row.
 * The result is hat and incomparable-rooted, and its transposed-support
 * matrix lies in the Richardson orbit of the radical. */
AF staircase(size_t ambient, const std::vector<long>& blocks, size_t skip_block = 0);

/* The section of the first-block projection on the Levi stabilizer of a
 * staircase-type AF ff: maps x in gl(block 1) to the unique block-diagonal
 * Lie element with first component x fixing ff. */
SparseMat levi_section(const AF& ff, const SparseMat& x_block1);
// the section applied to a whole AF living inside the first block
AF levi_section_af(const AF& ff, const AF& head);

// FF_{n,k,l}: staircase on blocks transpose([k^{n-1}, l]), trivial on the
// first row of the l-th block
AF build_ff_nkl(size_t n, size_t k, size_t l);
// F_{n,k,l} = j_FF(W_n) o FF_{n,k,l}
FamilySpec build_fnkl(size_t n, size_t k, size_t l);

// K_a: staircase on increasing blocks transpose(a)
AF build_k_a(const Partition& a);
// F_{a,k} = j_FF(K_a) o FF_{n,k,k}
FamilySpec build_fak(const Partition& a, size_t k);

// lower-right copy of a radical AF of class a composed with J_k
FamilySpec build_embedJ(const Partition& a, size_t k);

// the orbit set A_{a,k} and its dominance-minimal element (uniqueness asserted)
std::set<Partition> a_set(const Partition& a, size_t k);
Partition a_set_min(const Partition& a, size_t k);

// closed forms of the three main theorems
std::set<Partition> thD1_closed(long n, long k, long l);
std::set<Partition> thD2_closed(long n, long k);
std::set<Partition> thD3_closed(const Partition& a, long k);
std::optional<Partition> thD3_beta_closed(long k, const std::vector<std::pair<long, long>>& pairs);

// pair-compatibility checks for composed families
bool s_nN_check(const AF& k_head, const AF& ff, std::string* why = nullptr);
bool skal_check(size_t k, const std::vector<std::pair<long, long>>& pairs, const AF& k_head,
                const AF& ff, std::string* why = nullptr);

// concatenated generic path certifying j_FF(K) o FF; validated before return
std::vector<BigEStep> sgen_bpath(const AF& k_head, const AF& ff);

struct VerifyReport {
    std::string which;
    std::string params;
    std::set<Partition> expected;
    std::set<Partition> computed;
    bool pass = false;
    bool witness_complete = false;
    bool maincor_ok = false;  // every computed orbit sits at the critical dimension
    double runtime_ms = 0;
    uint64_t tree_digest = 0;
    std::string note;
    std::string str() const;
};

VerifyReport verify_thD1(size_t n, size_t k, size_t l, const ExpandLimits& lim = {});
VerifyReport verify_thD2(size_t n, size_t k, const ExpandLimits& lim = {});
VerifyReport verify_thD3(const Partition& a, size_t k, const ExpandLimits& lim = {});
// also checks the truncated beta set on the same instance
VerifyReport verify_thD3_beta(const Partition& a, size_t k, const ExpandLimits& lim = {});
VerifyReport verify_embedding(const Partition& a, size_t k, const ExpandLimits& lim = {});

/* First exchange of the initial path on a domain generated by a2-1d groups:
 * checks hypotheses (i)-(iv) on S, performs the exchange, and verifies the
 * conclusions: entry coverage, the prescribed regenerated S', invariance of
 * the hypotheses. */
struct EuChainReport {
    bool hypotheses_ok = false;
    bool coverage_ok = false;
    bool regen_ok = false;
    bool preserved_ok = false;
    std::string note;
    bool pass() const { return hypotheses_ok && coverage_ok && regen_ok && preserved_ok; }
};
EuChainReport eu_chain_lemma_check(const std::vector<SparseMat>& s_gens, const AF& f);

}  // namespace orbitree

#endif
