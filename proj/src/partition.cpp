#include "orbitree/partition.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace orbitree {

Partition Partition::normalize(std::vector<long> raw) {
    Partition p;
    for (long v : raw) {
        if (v < 0) throw std::invalid_argument("negative part in partition");
        if (v > 0) p.parts_.push_back(v);
    }
    std::sort(p.parts_.begin(), p.parts_.end(), std::greater<long>());
    for (long v : p.parts_) p.n_ += (size_t)v;
    return p;
}

bool Partition::operator<(const Partition& o) const { return parts_ < o.parts_; }

std::string Partition::str() const {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < parts_.size(); ++i) os << (i ? "," : "") << parts_[i];
    os << "]";
    return os.str();
}

DomCmp compare(const Partition& a, const Partition& b) {
    if (a.n() != b.n()) throw std::invalid_argument("dominance compare: different n");
    if (a == b) return DomCmp::equal;
    bool ge = true, le = true;
    long sa = 0, sb = 0;
    size_t m = std::max(a.size(), b.size());
    for (size_t i = 0; i < m; ++i) {
        sa += a.part(i);
        sb += b.part(i);
        if (sa < sb) ge = false;
        if (sb < sa) le = false;
    }
    if (ge) return DomCmp::greater;
    if (le) return DomCmp::less;
    return DomCmp::incomparable;
}

bool dominates_strictly(const Partition& a, const Partition& b) {
    return compare(a, b) == DomCmp::greater;
}

bool dominates(const Partition& a, const Partition& b) {
    auto c = compare(a, b);
    return c == DomCmp::greater || c == DomCmp::equal;
}

Partition transpose(const Partition& a) {
    std::vector<long> t;
    for (long j = 1; j <= a.max_part(); ++j) {
        long c = 0;
        for (long p : a.parts())
            if (p >= j) ++c;
        t.push_back(c);
    }
    return Partition::normalize(t);
}

size_t orbit_dim(const Partition& a) {
    size_t n = a.n();
    size_t s = 0;
    Partition tr = transpose(a);
    for (long p : tr.parts()) s += (size_t)(p * p);
    return n * n - s;
}

Partition jordan_type(const Mat& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("jordan_type: non-square matrix");
    size_t n = m.rows();
    std::vector<size_t> ranks{n};  // rank(m^0)
    Mat p = Mat::identity(n);
    for (size_t k = 1; k <= n; ++k) {
        p = p * m;
        ranks.push_back(matrix_rank(p));
        if (ranks.back() == 0) break;
    }
    if (ranks.back() != 0) throw std::invalid_argument("jordan_type: matrix is not nilpotent");
    // number of parts >= k equals rank(m^{k-1}) - rank(m^k)
    std::vector<long> parts;
    std::vector<long> ge;
    for (size_t k = 1; k < ranks.size(); ++k) ge.push_back((long)ranks[k - 1] - (long)ranks[k]);
    for (size_t k = 0; k < ge.size(); ++k) {
        long next = (k + 1 < ge.size()) ? ge[k + 1] : 0;
        for (long i = 0; i < ge[k] - next; ++i) parts.push_back((long)k + 1);
    }
    return Partition::normalize(parts);
}

Partition richardson(const std::vector<long>& levi_blocks) {
    return transpose(Partition::normalize(levi_blocks));
}

std::set<Partition> minimal_elements(const std::set<Partition>& s) {
    std::set<Partition> out;
    for (auto& a : s) {
        bool minimal = true;
        for (auto& b : s)
            if (!(a == b) && dominates_strictly(a, b)) {
                minimal = false;
                break;
            }
        if (minimal) out.insert(a);
    }
    return out;
}

std::set<Partition> truncate(const std::set<Partition>& s, long k) {
    std::set<Partition> out;
    for (auto& a : s)
        if (a.max_part() <= k) out.insert(a);
    return out;
}

Partition omega_prime(const std::vector<std::pair<long, long>>& inducing) {
    std::vector<long> blocks;
    for (auto& [a, b] : inducing)
        for (long i = 0; i < a; ++i) blocks.push_back(b);
    return richardson(blocks);
}

size_t dim_r_extension(const Partition& a, long r) {
    size_t n = a.n() + (size_t)r;
    if (r <= 0 || (size_t)r >= n) throw std::invalid_argument("dim_r_extension: need 0 < r < n");
    size_t half = orbit_dim(a) / 2;
    size_t dim_jr = 0;
    for (long i = 1; i <= r - 1; ++i) dim_jr += n - (size_t)i;
    size_t extra = 0;
    for (long p : a.parts()) extra += (size_t)std::max(p - r, 0L);
    size_t lhs = half + dim_jr + extra;
    std::vector<long> cat = a.parts();
    cat.push_back(r);
    size_t rhs = orbit_dim(Partition::normalize(cat)) / 2;
    if (lhs != rhs) throw std::logic_error("dim_r_extension: identity check failed");
    return lhs;
}

std::vector<Partition> all_partitions(long n) {
    std::vector<Partition> out;
    std::vector<long> cur;
    auto rec = [&](auto&& self, long rem, long maxp) -> void {
        if (rem == 0) {
            out.push_back(Partition::normalize(cur));
            return;
        }
        for (long p = std::min(rem, maxp); p >= 1; --p) {
            cur.push_back(p);
            self(self, rem - p, p);
            cur.pop_back();
        }
    };
    rec(rec, n, n);
    return out;
}

Mat nilpotent_of_type(const Partition& a) {
    size_t n = a.n();
    Mat m(n, n);
    size_t off = 0;
    for (long p : a.parts()) {
        for (long i = 1; i < p; ++i) m(off + i + 1, off + i) = Scalar(1);
        off += (size_t)p;
    }
    return m;
}

}  // namespace orbitree
