#ifndef ORBITREE_PARTITION_HPP
#define ORBITREE_PARTITION_HPP

#include <set>
#include <string>
#include <vector>

#include "orbitree/linalg.hpp"

namespace orbitree {

/* A nilpotent orbit of gl_n as a weakly decreasing list of positive parts.
 * Always canonical: sorted descending, no zeros. */
class Partition {
public:
    Partition() = default;
    // canonicalizes: drops zeros, sorts descending; throws on negative parts
    static Partition normalize(std::vector<long> raw);

    size_t n() const { return n_; }
    const std::vector<long>& parts() const { return parts_; }
    size_t size() const { return parts_.size(); }
    long part(size_t i) const { return i < parts_.size() ? parts_[i] : 0; }
    long max_part() const { return parts_.empty() ? 0 : parts_[0]; }

    bool operator==(const Partition& o) const { return parts_ == o.parts_; }
    bool operator!=(const Partition& o) const { return !(*this == o); }
    bool operator<(const Partition& o) const;  // lexicographic, for containers

    std::string str() const;

private:
    size_t n_ = 0;
    std::vector<long> parts_;
};

enum class DomCmp { greater, less, equal, incomparable };

// dominance-order comparison via partial sums; requires a.n == b.n
DomCmp compare(const Partition& a, const Partition& b);
bool dominates_strictly(const Partition& a, const Partition& b);  // a > b
bool dominates(const Partition& a, const Partition& b);           // a >= b

Partition transpose(const Partition& a);

// n^2 - sum of squared transpose parts = 2 dim U_P for Levi blocks transpose(a)
size_t orbit_dim(const Partition& a);

// Jordan type of a nilpotent matrix via its rank sequence; throws if not nilpotent
Partition jordan_type(const Mat& m);

// Richardson orbit of the parabolic with the given Levi block sizes
Partition richardson(const std::vector<long>& levi_blocks);

// dominance-minimal members of a set of partitions of the same n
std::set<Partition> minimal_elements(const std::set<Partition>& s);

// members whose largest part is <= k       (the paper's Omega_k)
std::set<Partition> truncate(const std::set<Partition>& s, long k);

// Richardson orbit of the blocks {b_i with multiplicity a_i}
Partition omega_prime(const std::vector<std::pair<long, long>>& inducing);

/* orbit_dim([r] ++ a)/2 computed through the block-extension identity
 * dim/2 = orbit_dim(a)/2 + dim D_{J_r} + sum max(a_i - r, 0);
 * asserts agreement with orbit_dim of the concatenated partition. */
size_t dim_r_extension(const Partition& a, long r);

// all partitions of n (used by tests and the verifier grids)
std::vector<Partition> all_partitions(long n);

// nilpotent block-diagonal matrix with Jordan blocks sized by a (lower form e_{i+1,i})
Mat nilpotent_of_type(const Partition& a);

}  // namespace orbitree

#endif
