#include "orbitree/lie.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace orbitree {

SparseMat SparseMat::unit(size_t n, size_t i, size_t j) {
    SparseMat m(n);
    m.set(i, j, Scalar(1));
    return m;
}

void SparseMat::prune() {
    ent_.erase(std::remove_if(ent_.begin(), ent_.end(),
                              [](auto& e) { return e.second.is_zero(); }),
               ent_.end());
}

void SparseMat::set(size_t i, size_t j, const Scalar& v) {
    uint32_t p = (uint32_t)((i - 1) * n_ + (j - 1));
    auto it = std::lower_bound(ent_.begin(), ent_.end(), p,
                               [](auto& e, uint32_t q) { return e.first < q; });
    if (it != ent_.end() && it->first == p) {
        if (v.is_zero()) ent_.erase(it);
        else it->second = v;
    } else if (!v.is_zero()) {
        ent_.insert(it, {p, v});
    }
}

Scalar SparseMat::get(size_t i, size_t j) const {
    return get_flat((uint32_t)((i - 1) * n_ + (j - 1)));
}

Scalar SparseMat::get_flat(uint32_t pos) const {
    auto it = std::lower_bound(ent_.begin(), ent_.end(), pos,
                               [](auto& e, uint32_t q) { return e.first < q; });
    if (it != ent_.end() && it->first == pos) return it->second;
    return Scalar(0);
}

uint32_t SparseMat::leading() const {
    if (ent_.empty()) throw std::logic_error("leading of zero sparse matrix");
    return ent_.front().first;
}

SparseMat SparseMat::operator+(const SparseMat& o) const {
    SparseMat r(n_);
    r.ent_.reserve(ent_.size() + o.ent_.size());
    size_t a = 0, b = 0;
    while (a < ent_.size() || b < o.ent_.size()) {
        if (b >= o.ent_.size() || (a < ent_.size() && ent_[a].first < o.ent_[b].first)) {
            r.ent_.push_back(ent_[a++]);
        } else if (a >= ent_.size() || o.ent_[b].first < ent_[a].first) {
            r.ent_.push_back(o.ent_[b++]);
        } else {
            Scalar s = ent_[a].second + o.ent_[b].second;
            if (!s.is_zero()) r.ent_.push_back({ent_[a].first, s});
            ++a;
            ++b;
        }
    }
    return r;
}

SparseMat SparseMat::operator-(const SparseMat& o) const { return *this + o.scaled(Scalar(-1)); }

SparseMat SparseMat::scaled(const Scalar& s) const {
    SparseMat r(n_);
    if (s.is_zero()) return r;
    r.ent_.reserve(ent_.size());
    for (auto& [p, v] : ent_) r.ent_.push_back({p, v * s});
    return r;
}

SparseMat SparseMat::mul(const SparseMat& a, const SparseMat& b) {
    SparseMat r(a.n_);
    std::map<uint32_t, Scalar> acc;
    size_t n = a.n_;
    for (auto& [pa, va] : a.ent_) {
        size_t i = pa / n, k = pa % n;  // 0-based
        // entries of b in row k
        uint32_t lo = (uint32_t)(k * n);
        auto it = std::lower_bound(b.ent_.begin(), b.ent_.end(), lo,
                                   [](auto& e, uint32_t q) { return e.first < q; });
        for (; it != b.ent_.end() && it->first < lo + n; ++it) {
            size_t j = it->first % n;
            Scalar prod = va * it->second;
            if (prod.is_zero()) continue;
            auto& slot = acc[(uint32_t)(i * n + j)];
            slot += prod;
        }
    }
    for (auto& [p, v] : acc)
        if (!v.is_zero()) r.ent_.push_back({p, v});
    return r;
}

SparseMat SparseMat::bracket(const SparseMat& a, const SparseMat& b) {
    return mul(a, b) - mul(b, a);
}

Mat SparseMat::dense() const {
    Mat m(n_, n_);
    for (auto& [p, v] : ent_) m(p / n_ + 1, p % n_ + 1) = v;
    return m;
}

SparseMat SparseMat::from_dense(const Mat& m) {
    SparseMat r(m.rows());
    for (size_t i = 1; i <= m.rows(); ++i)
        for (size_t j = 1; j <= m.cols(); ++j)
            if (!m(i, j).is_zero()) r.set(i, j, m(i, j));
    return r;
}

SparseMat SparseMat::substitute(const Rat& t) const {
    SparseMat r(n_);
    for (auto& [p, v] : ent_) {
        Scalar s = v.substitute(t);
        if (!s.is_zero()) r.ent_.push_back({p, s});
    }
    return r;
}

bool SparseMat::depends_on_t() const {
    for (auto& [p, v] : ent_)
        if (v.depends_on_t()) return true;
    return false;
}

bool SpanBasis::insert(const SparseMat& v) {
    SparseMat r = reduce(v);
    if (r.is_zero()) return false;
    r = r.scaled(Scalar(1) / r.entries().front().second);
    // eliminate the new leading position from existing vectors
    for (auto& b : basis_) {
        Scalar c = b.get_flat(r.leading());
        if (!c.is_zero()) b = b - r.scaled(c);
    }
    auto it = std::lower_bound(basis_.begin(), basis_.end(), r.leading(),
                               [](const SparseMat& m, uint32_t q) { return m.leading() < q; });
    basis_.insert(it, r);
    return true;
}

SparseMat SpanBasis::reduce(const SparseMat& v) const {
    SparseMat r = v;
    for (auto& b : basis_) {
        if (r.is_zero()) break;
        Scalar c = r.get_flat(b.leading());
        if (!c.is_zero()) r = r - b.scaled(c);
    }
    return r;
}

std::optional<std::vector<Scalar>> SpanBasis::coordinates(const SparseMat& v) const {
    std::vector<Scalar> coords(basis_.size(), Scalar(0));
    SparseMat r = v;
    for (size_t i = 0; i < basis_.size(); ++i) {
        if (r.is_zero()) break;
        Scalar c = r.get_flat(basis_[i].leading());
        if (!c.is_zero()) {
            coords[i] = c;
            r = r - basis_[i].scaled(c);
        }
    }
    if (!r.is_zero()) return std::nullopt;
    return coords;
}

SpanBasis SpanBasis::intersect(const SpanBasis& a, const SpanBasis& b) {
    // Zassenhaus-style: solve for combinations of a's basis lying in b
    SpanBasis out(a.n_);
    if (a.dim() == 0 || b.dim() == 0) return out;
    // coordinates of the residues of a's basis modulo b: kernel of that map
    // build matrix of residues in terms of all positions
    std::vector<std::vector<Scalar>> rows;  // one column per a-basis vector
    std::vector<uint32_t> positions;
    std::vector<SparseMat> residues;
    for (auto& v : a.basis_) residues.push_back(b.reduce(v));
    std::map<uint32_t, size_t> posidx;
    for (auto& r : residues)
        for (auto& [p, s] : r.entries())
            if (!posidx.count(p)) {
                posidx[p] = positions.size();
                positions.push_back(p);
            }
    std::vector<std::pair<std::vector<Scalar>, Scalar>> cons;
    for (auto& [p, idx] : posidx) {
        std::vector<Scalar> row(a.dim(), Scalar(0));
        for (size_t k = 0; k < residues.size(); ++k) row[k] = residues[k].get_flat(p);
        cons.push_back({row, Scalar(0)});
    }
    auto sol = affine_solve(cons, a.dim());
    for (auto& kvec : sol->kernel) {
        SparseMat comb(a.n_);
        for (size_t k = 0; k < a.basis_.size(); ++k)
            if (!kvec[k].is_zero()) comb = comb + a.basis_[k].scaled(kvec[k]);
        out.insert(comb);
    }
    return out;
}

bool SpanBasis::contains_span(const SpanBasis& other) const {
    for (auto& v : other.basis_)
        if (!contains(v)) return false;
    return true;
}

bool SpanBasis::operator==(const SpanBasis& o) const {
    // reduced echelon form is canonical
    if (n_ != o.n_ || basis_.size() != o.basis_.size()) return false;
    for (size_t i = 0; i < basis_.size(); ++i)
        if (!(basis_[i] == o.basis_[i])) return false;
    return true;
}

UnipotentGroup::UnipotentGroup(size_t ambient, const std::vector<SparseMat>& basis) : n_(ambient) {
    lie_ = SpanBasis(ambient);
    for (auto& v : basis) lie_.insert(v);
    validate();
}

void UnipotentGroup::validate() const {
    // bracket closure
    for (size_t i = 0; i < lie_.dim(); ++i)
        for (size_t j = i + 1; j < lie_.dim(); ++j) {
            SparseMat br = SparseMat::bracket(lie_.basis()[i], lie_.basis()[j]);
            if (!lie_.contains(br))
                throw std::invalid_argument("unipotent group: span is not bracket-closed");
        }
    // Engel flag: iterated image of the whole space must vanish
    // W_{k+1} = sum_b b(W_k); start from all coordinate vectors
    std::vector<std::vector<Scalar>> w;  // vectors in K^n
    for (size_t i = 0; i < n_; ++i) {
        std::vector<Scalar> e(n_, Scalar(0));
        e[i] = Scalar(1);
        w.push_back(e);
    }
    for (size_t iter = 0; iter <= n_ && !w.empty(); ++iter) {
        std::vector<std::vector<Scalar>> img;
        for (auto& b : lie_.basis())
            for (auto& v : w) {
                std::vector<Scalar> bv(n_, Scalar(0));
                for (auto& [p, s] : b.entries()) {
                    size_t i = p / n_, j = p % n_;
                    if (!v[j].is_zero()) bv[i] += s * v[j];
                }
                bool nz = false;
                for (auto& x : bv) nz |= !x.is_zero();
                if (nz) img.push_back(bv);
            }
        // reduce img to an independent set
        std::vector<std::vector<Scalar>> red;
        for (auto& v : img) {
            std::vector<Scalar> r = v;
            for (auto& b : red) {
                size_t lead = 0;
                while (lead < n_ && b[lead].is_zero()) ++lead;
                if (lead < n_ && !r[lead].is_zero()) {
                    Scalar f = r[lead] / b[lead];
                    for (size_t k = 0; k < n_; ++k) r[k] -= f * b[k];
                }
            }
            bool nz = false;
            for (auto& x : r) nz |= !x.is_zero();
            if (nz) red.push_back(r);
        }
        w = red;
        if (w.empty()) return;
    }
    if (!w.empty()) throw std::invalid_argument("unipotent group: no Engel flag (non-nilpotent span)");
}

UnipotentGroup UnipotentGroup::trivial(size_t ambient) {
    return UnipotentGroup(ambient, {});
}

UnipotentGroup UnipotentGroup::unchecked(size_t ambient, SpanBasis lie) {
    UnipotentGroup g;
    g.n_ = ambient;
    g.lie_ = std::move(lie);
    return g;
}

UnipotentGroup UnipotentGroup::root_group(size_t ambient, size_t i, size_t j) {
    return UnipotentGroup(ambient, {SparseMat::unit(ambient, i, j)});
}

UnipotentGroup UnipotentGroup::upper(size_t ambient) {
    std::vector<SparseMat> b;
    for (size_t i = 1; i <= ambient; ++i)
        for (size_t j = i + 1; j <= ambient; ++j) b.push_back(SparseMat::unit(ambient, i, j));
    return UnipotentGroup(ambient, b);
}

UnipotentGroup UnipotentGroup::parabolic_radical(size_t ambient, const std::vector<long>& blocks) {
    long total = 0;
    for (long b : blocks) total += b;
    if ((size_t)total != ambient) throw std::invalid_argument("parabolic_radical: blocks must sum to n");
    std::vector<size_t> block_of(ambient + 1);
    size_t idx = 1;
    for (size_t b = 0; b < blocks.size(); ++b)
        for (long k = 0; k < blocks[b]; ++k) block_of[idx++] = b;
    std::vector<SparseMat> basis;
    for (size_t i = 1; i <= ambient; ++i)
        for (size_t j = i + 1; j <= ambient; ++j)
            if (block_of[i] < block_of[j]) basis.push_back(SparseMat::unit(ambient, i, j));
    return UnipotentGroup(ambient, basis);
}

UnipotentGroup UnipotentGroup::from_generators(size_t ambient, const std::vector<SparseMat>& gens) {
    SpanBasis span(ambient);
    std::vector<SparseMat> queue = gens;
    for (auto& g : gens) span.insert(g);
    // close under brackets
    for (size_t i = 0; i < queue.size(); ++i) {
        for (size_t j = 0; j < i; ++j) {
            SparseMat br = SparseMat::bracket(queue[i], queue[j]);
            if (!br.is_zero() && span.insert(br)) queue.push_back(br);
        }
    }
    return UnipotentGroup(ambient, span.basis());
}

UnipotentGroup UnipotentGroup::intersect(const UnipotentGroup& o) const {
    SpanBasis s = SpanBasis::intersect(lie_, o.lie_);
    return UnipotentGroup(n_, s.basis());
}

UnipotentGroup UnipotentGroup::product(const UnipotentGroup& a, const UnipotentGroup& b) {
    std::vector<SparseMat> basis = a.lie_.basis();
    for (auto& v : b.lie_.basis()) basis.push_back(v);
    return UnipotentGroup(a.n_, basis);
}

bool roots_non_interacting(size_t n, const std::vector<std::pair<size_t, size_t>>& pos) {
    for (size_t a = 0; a < pos.size(); ++a)
        for (size_t b = 0; b < pos.size(); ++b) {
            if (a == b) continue;
            auto [i1, j1] = pos[a];
            auto [i2, j2] = pos[b];
            // alpha = -beta
            if (i1 == j2 && j1 == i2) return false;
            // alpha + beta a root: j1 == i2 (or j2 == i1, covered by symmetry)
            if (j1 == i2) return false;
            // alpha - beta a root: same row or same column
            if (i1 == i2 || j1 == j2) return false;
        }
    return true;
}

bool UnipotentGroup::is_a2_1d() const {
    if (dim() == 0) return true;
    if (dim() > 1) return false;
    const SparseMat& v = lie_.basis()[0];
    std::vector<std::pair<size_t, size_t>> pos;
    for (auto& [p, s] : v.entries()) pos.push_back(SparseMat::pos_of(p, n_));
    for (auto& [i, j] : pos)
        if (i == j) return false;
    return roots_non_interacting(n_, pos);
}

}  // namespace orbitree
