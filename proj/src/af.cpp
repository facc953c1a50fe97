#include "orbitree/af.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

namespace orbitree {

namespace {

/* Assembles a functional from spanning (vector, value) pairs: echelonizes the
 * vectors while carrying values along, rejecting linear inconsistencies. */
struct AFAssembler {
    size_t n;
    std::vector<SparseMat> basis;  // echelon, sorted by leading position
    std::vector<Scalar> vals;

    explicit AFAssembler(size_t ambient) : n(ambient) {}

    void add(SparseMat v, Scalar val) {
        for (size_t k = 0; k < basis.size() && !v.is_zero(); ++k) {
            Scalar c = v.get_flat(basis[k].leading());
            if (!c.is_zero()) {
                v = v - basis[k].scaled(c);
                val = val - c * vals[k];
            }
        }
        if (v.is_zero()) {
            if (!val.is_zero())
                throw std::invalid_argument("AF: inconsistent values on the same Lie element");
            return;
        }
        Scalar lead = v.entries().front().second;
        v = v.scaled(Scalar(1) / lead);
        val = val / lead;
        for (size_t k = 0; k < basis.size(); ++k) {
            Scalar c = basis[k].get_flat(v.leading());
            if (!c.is_zero()) {
                basis[k] = basis[k] - v.scaled(c);
                vals[k] = vals[k] - c * val;
            }
        }
        auto it = std::lower_bound(basis.begin(), basis.end(), v.leading(),
                                   [](const SparseMat& m, uint32_t q) { return m.leading() < q; });
        size_t idx = (size_t)(it - basis.begin());
        basis.insert(it, v);
        vals.insert(vals.begin() + (long)idx, val);
    }
};

size_t nilpotency_bound(size_t n) { return n; }

}  // namespace

AF af_assemble_unchecked(size_t ambient, const std::vector<std::pair<SparseMat, Scalar>>& gens) {
    AFAssembler as(ambient);
    for (auto& [v, val] : gens) as.add(v, val);
    SpanBasis span(ambient);
    for (auto& b : as.basis) span.insert(b);
    // SpanBasis::insert on an echelon set keeps the vectors unchanged, so the
    // assembler's value alignment carries over; realign defensively anyway
    std::vector<Scalar> vals(span.dim(), Scalar(0));
    for (size_t k = 0; k < span.dim(); ++k) {
        bool found = false;
        for (size_t j = 0; j < as.basis.size(); ++j)
            if (as.basis[j].leading() == span.basis()[k].leading()) {
                vals[k] = as.vals[j];
                found = true;
                break;
            }
        if (!found) throw std::logic_error("af_assemble_unchecked: basis misalignment");
    }
    return af_from_canonical(ambient, UnipotentGroup::unchecked(ambient, std::move(span)), std::move(vals));
}

AF af_from_canonical(size_t ambient, UnipotentGroup dom, std::vector<Scalar> vals) {
    AF f;
    f.n_ = ambient;
    f.dom_ = std::move(dom);
    f.vals_ = std::move(vals);
    if (f.vals_.size() != f.dom_.dim()) throw std::logic_error("AF: value count mismatch");
    return f;
}

AF::AF(size_t ambient, const std::vector<std::pair<SparseMat, Scalar>>& gens) : n_(ambient) {
    AFAssembler as(ambient);
    for (auto& [v, val] : gens) as.add(v, val);
    dom_ = UnipotentGroup(ambient, as.basis);  // validates closure + Engel
    // align values with the canonical basis of dom_ (same echelon ordering)
    vals_.assign(dom_.dim(), Scalar(0));
    for (size_t k = 0; k < dom_.dim(); ++k) {
        // canonical basis vectors coincide with assembler's up to ordering
        const SparseMat& b = dom_.lie().basis()[k];
        bool found = false;
        for (size_t j = 0; j < as.basis.size(); ++j)
            if (as.basis[j] == b) {
                vals_[k] = as.vals[j];
                found = true;
                break;
            }
        if (!found) {
            // recompute: value is linear, expand b in assembler basis
            Scalar val(0);
            SparseMat r = b;
            for (size_t j = 0; j < as.basis.size() && !r.is_zero(); ++j) {
                Scalar c = r.get_flat(as.basis[j].leading());
                if (!c.is_zero()) {
                    r = r - as.basis[j].scaled(c);
                    val += c * as.vals[j];
                }
            }
            if (!r.is_zero()) throw std::logic_error("AF: canonical basis escaped the span");
            vals_[k] = val;
        }
    }
    // functional must vanish on brackets of the domain
    for (size_t i = 0; i < dom_.dim(); ++i)
        for (size_t j = i + 1; j < dom_.dim(); ++j) {
            SparseMat br = SparseMat::bracket(dom_.lie().basis()[i], dom_.lie().basis()[j]);
            if (!br.is_zero() && !value(br).is_zero())
                throw std::invalid_argument("AF: functional does not vanish on brackets");
        }
}

AF AF::trivial(const UnipotentGroup& domain) {
    return af_from_canonical(domain.ambient(), domain,
                             std::vector<Scalar>(domain.dim(), Scalar(0)));
}

AF AF::empty(size_t ambient) { return trivial(UnipotentGroup::trivial(ambient)); }

AF AF::whittaker(size_t ambient) {
    std::vector<std::pair<SparseMat, Scalar>> gens;
    for (size_t i = 1; i <= ambient; ++i)
        for (size_t j = i + 1; j <= ambient; ++j)
            gens.push_back({SparseMat::unit(ambient, i, j), Scalar(j == i + 1 ? 1 : 0)});
    return AF(ambient, gens);
}

AF AF::j_r(size_t ambient, size_t r) {
    std::vector<std::pair<SparseMat, Scalar>> gens;
    for (size_t i = 1; i + 1 <= r; ++i)
        for (size_t j = i + 1; j <= ambient; ++j)
            gens.push_back({SparseMat::unit(ambient, i, j), Scalar(j == i + 1 ? 1 : 0)});
    return AF(ambient, gens);
}

Scalar AF::value(const SparseMat& x) const {
    auto coords = dom_.lie().coordinates(x);
    if (!coords) throw std::invalid_argument("AF::value: element outside the domain");
    Scalar s(0);
    for (size_t k = 0; k < coords->size(); ++k)
        if (!(*coords)[k].is_zero()) s += (*coords)[k] * vals_[k];
    return s;
}

Scalar AF::root_value(size_t i, size_t j) const {
    SparseMat e = SparseMat::unit(n_, i, j);
    if (!dom_.contains(e)) return Scalar(0);
    return value(e);
}

bool AF::has_root(size_t i, size_t j) const { return dom_.contains(SparseMat::unit(n_, i, j)); }

bool AF::operator==(const AF& o) const {
    return n_ == o.n_ && dom_ == o.dom_ && vals_ == o.vals_;
}

bool AF::is_root_generated() const {
    for (auto& b : dom_.lie().basis())
        if (b.entries().size() != 1) return false;
    return true;
}

std::vector<std::pair<size_t, size_t>> AF::support() const {
    std::set<uint32_t> pos;
    for (auto& b : dom_.lie().basis())
        for (auto& [p, v] : b.entries()) pos.insert(p);
    std::vector<std::pair<size_t, size_t>> out;
    for (auto p : pos) out.push_back(SparseMat::pos_of(p, n_));
    return out;
}

AF AF::substitute(const Rat& t) const {
    std::vector<std::pair<SparseMat, Scalar>> gens;
    for (size_t k = 0; k < dom_.dim(); ++k)
        gens.push_back({dom_.lie().basis()[k].substitute(t), vals_[k].substitute(t)});
    return af_assemble_unchecked(n_, gens);
}

bool AF::depends_on_t() const {
    for (auto& v : vals_)
        if (v.depends_on_t()) return true;
    for (auto& b : dom_.lie().basis())
        if (b.depends_on_t()) return true;
    return false;
}

std::vector<Rat> AF::special_t_values() const {
    std::set<Rat> vals;
    for (auto& v : vals_)
        for (auto& r : v.vanishing_t_values()) vals.insert(r);
    return std::vector<Rat>(vals.begin(), vals.end());
}

std::string AF::str() const {
    std::ostringstream os;
    os << "AF(n=" << n_ << ", dim=" << dim() << "; ";
    for (size_t k = 0; k < dom_.dim(); ++k) {
        if (k) os << ", ";
        const auto& b = dom_.lie().basis()[k];
        os << "[";
        for (size_t e = 0; e < b.entries().size(); ++e) {
            auto [i, j] = SparseMat::pos_of(b.entries()[e].first, n_);
            if (e) os << "+";
            std::string c = b.entries()[e].second.str();
            if (c != "1") os << c << "*";
            os << "e" << i << "," << j;
        }
        os << "]=" << vals_[k].str();
    }
    os << ")";
    return os.str();
}

AF conjugate_af(const Mat& g, const AF& f) {
    Mat gi = inverse(g);
    std::vector<std::pair<SparseMat, Scalar>> gens;
    for (size_t k = 0; k < f.dim(); ++k) {
        Mat b = f.domain().lie().basis()[k].dense();
        gens.push_back({SparseMat::from_dense(g * b * gi), f.values()[k]});
    }
    return af_assemble_unchecked(f.ambient(), gens);
}

AF conjugate_af_perm(const std::vector<size_t>& w, const AF& f) {
    size_t n = f.ambient();
    std::vector<std::pair<SparseMat, Scalar>> gens;
    for (size_t k = 0; k < f.dim(); ++k) {
        const SparseMat& b = f.domain().lie().basis()[k];
        SparseMat nb(n);
        for (auto& [p, v] : b.entries()) {
            auto [i, j] = SparseMat::pos_of(p, n);
            nb.set(w[i - 1], w[j - 1], v);
        }
        gens.push_back({nb, f.values()[k]});
    }
    return af_assemble_unchecked(n, gens);
}

AF restrict(const AF& f, const UnipotentGroup& h) {
    SpanBasis inter = SpanBasis::intersect(f.domain().lie(), h.lie());
    std::vector<std::pair<SparseMat, Scalar>> gens;
    for (auto& v : inter.basis()) gens.push_back({v, f.value(v)});
    return AF(f.ambient(), gens);
}

bool fixes_af(const SparseMat& x, const AF& f) {
    // exp(sx) must normalize D_F and fix the functional, for every s
    size_t bound = f.ambient() + 1;
    for (auto& y : f.domain().lie().basis()) {
        SparseMat cur = y;
        for (size_t k = 1; k <= bound; ++k) {
            cur = SparseMat::bracket(x, cur);
            if (cur.is_zero()) break;
            if (!f.domain().contains(cur)) return false;
            if (!f.value(cur).is_zero()) return false;
        }
    }
    return true;
}

AF compose(const AF& f2, const AF& f1) {
    if (f1.ambient() != f2.ambient()) throw std::invalid_argument("compose: ambient mismatch");
    size_t n = f1.ambient();
    // N1 must be normal in N = N2 N1
    for (auto& x : f2.domain().lie().basis())
        for (auto& y : f1.domain().lie().basis()) {
            SparseMat br = SparseMat::bracket(x, y);
            if (!br.is_zero() && !f1.domain().contains(br))
                throw std::invalid_argument("compose: N1 is not normal in N2 N1");
        }
    // every element of N2 must fix f1
    for (auto& x : f2.domain().lie().basis())
        if (!fixes_af(x, f1)) throw std::invalid_argument("compose: N2 does not fix f1");
    std::vector<std::pair<SparseMat, Scalar>> gens;
    for (size_t k = 0; k < f1.dim(); ++k)
        gens.push_back({f1.domain().lie().basis()[k], f1.values()[k]});
    for (size_t k = 0; k < f2.dim(); ++k)
        gens.push_back({f2.domain().lie().basis()[k], f2.values()[k]});
    return AF(n, gens);  // assembler rejects disagreement on the intersection
}

AF standard_embed(const std::vector<size_t>& index_map, size_t ambient_target, const AF& f) {
    std::vector<bool> seen(ambient_target + 1, false);
    for (size_t v : index_map) {
        if (v < 1 || v > ambient_target || seen[v])
            throw std::invalid_argument("standard_embed: index map not injective into range");
        seen[v] = true;
    }
    std::vector<std::pair<SparseMat, Scalar>> gens;
    for (size_t k = 0; k < f.dim(); ++k) {
        const SparseMat& b = f.domain().lie().basis()[k];
        SparseMat nb(ambient_target);
        for (auto& [p, v] : b.entries()) {
            auto [i, j] = SparseMat::pos_of(p, f.ambient());
            nb.set(index_map[i - 1], index_map[j - 1], v);
        }
        gens.push_back({nb, f.values()[k]});
    }
    return AF(ambient_target, gens);
}

AF rg(const AF& f) {
    size_t n = f.ambient();
    std::vector<std::pair<SparseMat, Scalar>> gens;
    for (auto [i, j] : f.support()) {
        SparseMat e = SparseMat::unit(n, i, j);
        if (f.domain().contains(e)) gens.push_back({e, f.value(e)});
    }
    return AF(n, gens);
}

Mat j_matrix(const AF& f) {
    if (!f.is_root_generated())
        throw std::invalid_argument("j_matrix: domain is not root-generated");
    size_t n = f.ambient();
    Mat j(n, n);
    for (auto& b : f.domain().lie().basis()) {
        auto [r, c] = SparseMat::pos_of(b.entries()[0].first, n);
        j(c, r) = f.value(b);
    }
    // sanity: J lies in X_F
    for (size_t k = 0; k < f.dim(); ++k) {
        Mat u = f.domain().lie().basis()[k].dense();
        if (!((j * u).trace() == f.values()[k]))
            throw std::logic_error("j_matrix: candidate escaped X_F");
    }
    return j;
}

AffineSubspace x_variety(const AF& f) {
    size_t n = f.ambient();
    size_t amb = n * n;
    std::vector<std::pair<std::vector<Scalar>, Scalar>> cons;
    for (size_t k = 0; k < f.dim(); ++k) {
        const SparseMat& b = f.domain().lie().basis()[k];
        std::vector<Scalar> form(amb, Scalar(0));
        // tr(J b) = sum_{i,j} J_{ji} b_{ij}
        for (auto& [p, v] : b.entries()) {
            auto [i, j] = SparseMat::pos_of(p, n);
            form[(j - 1) * n + (i - 1)] += v;
        }
        cons.push_back({form, f.values()[k]});
    }
    auto s = affine_solve(cons, amb);
    if (!s) throw std::logic_error("x_variety: inconsistent constraints");
    return *s;
}

std::vector<Mat> sample_points(const AffineSubspace& xs, size_t ambient, size_t count,
                               uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> num(-6, 6);
    std::vector<Mat> out;
    for (size_t s = 0; s < count; ++s) {
        std::vector<Scalar> x = xs.point;
        for (auto& k : xs.kernel) {
            Rat c(num(rng), 1 + (long)(rng() % 3));
            c.canonicalize();
            for (size_t i = 0; i < x.size(); ++i)
                if (!k[i].is_zero()) x[i] += Scalar(c) * k[i];
        }
        Mat m(ambient, ambient);
        for (size_t i = 1; i <= ambient; ++i)
            for (size_t j = 1; j <= ambient; ++j) m(i, j) = x[(i - 1) * ambient + (j - 1)];
        out.push_back(m);
    }
    return out;
}

AF itr_point(const Mat& j, const UnipotentGroup& n) {
    std::vector<std::pair<SparseMat, Scalar>> gens;
    for (auto& b : n.lie().basis()) gens.push_back({b, (j * b.dense()).trace()});
    return AF(n.ambient(), gens);  // AF validation enforces bracket vanishing
}

bool StabCondition::contains_line(const SparseMat& v) const {
    if (inside && !inside->contains(v)) return false;
    return fixes_af(v, target);
}

std::vector<SparseMat> stabilizer_lie_cut(const AF& f, const std::vector<SparseMat>& ambient_basis) {
    // first-order conditions: ad(w) preserves Lie D and f(ad(w) y) = 0
    size_t m = ambient_basis.size();
    std::vector<std::pair<std::vector<Scalar>, Scalar>> cons;
    for (auto& y : f.domain().lie().basis()) {
        // residue of [w, y] mod Lie D must vanish, and f([w,y]) must vanish.
        // [w,y] = sum_k w_k [b_k, y]
        std::vector<SparseMat> br;
        for (auto& b : ambient_basis) br.push_back(SparseMat::bracket(b, y));
        // collect residue positions
        std::vector<SparseMat> residues;
        for (auto& x : br) residues.push_back(f.domain().lie().reduce(x));
        std::set<uint32_t> pos;
        for (auto& r : residues)
            for (auto& [p, s] : r.entries()) pos.insert(p);
        for (auto p : pos) {
            std::vector<Scalar> row(m, Scalar(0));
            for (size_t k = 0; k < m; ++k) row[k] = residues[k].get_flat(p);
            cons.push_back({row, Scalar(0)});
        }
        std::vector<Scalar> frow(m, Scalar(0));
        for (size_t k = 0; k < m; ++k) {
            SparseMat inpart = br[k] - residues[k];
            if (!inpart.is_zero()) frow[k] = f.value(inpart);
        }
        cons.push_back({frow, Scalar(0)});
    }
    auto s = affine_solve(cons, m);
    std::vector<SparseMat> out;
    for (auto& kvec : s->kernel) {
        SparseMat w(f.ambient());
        for (size_t k = 0; k < m; ++k)
            if (!kvec[k].is_zero()) w = w + ambient_basis[k].scaled(kvec[k]);
        out.push_back(w);
    }
    return out;
}

bool is_a2_1d_element(size_t ambient, const SparseMat& v) {
    if (v.is_zero()) return true;
    std::vector<std::pair<size_t, size_t>> pos;
    for (auto& [p, s] : v.entries()) {
        auto pr = SparseMat::pos_of(p, ambient);
        if (pr.first == pr.second) return false;
        pos.push_back(pr);
    }
    return roots_non_interacting(ambient, pos);
}

bool h_minimal(const UnipotentGroup& v, const StabCondition& h) {
    if (!v.is_a2_1d()) throw std::invalid_argument("h_minimal: input is not a2-1d");
    if (v.dim() == 0) return true;
    const SparseMat& gen = v.lie().basis()[0];
    size_t m = gen.entries().size();
    if (m <= 1) return true;  // no proper nonempty projection exists
    // iterate over proper nonempty subsets of the support
    for (uint32_t mask = 1; mask + 1 < (1u << m); ++mask) {
        SparseMat p(gen.n());
        for (size_t e = 0; e < m; ++e)
            if (mask & (1u << e)) {
                auto [i, j] = SparseMat::pos_of(gen.entries()[e].first, gen.n());
                p.set(i, j, gen.entries()[e].second);
            }
        if (h.contains_line(p)) return false;
    }
    return true;
}

std::vector<std::set<size_t>> stab_torus_components(const AF& f) {
    if (!f.is_root_generated())
        throw std::invalid_argument("stab_torus_components: domain must be root-generated");
    size_t n = f.ambient();
    std::vector<size_t> parent(n + 1);
    for (size_t i = 0; i <= n; ++i) parent[i] = i;
    std::function<size_t(size_t)> find = [&](size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (auto& b : f.domain().lie().basis()) {
        if (f.value(b).is_zero()) continue;
        auto [i, j] = SparseMat::pos_of(b.entries()[0].first, n);
        parent[find(i)] = find(j);
    }
    std::map<size_t, std::set<size_t>> comps;
    for (size_t i = 1; i <= n; ++i) comps[find(i)].insert(i);
    std::vector<std::set<size_t>> out;
    for (auto& [r, s] : comps) out.push_back(s);
    return out;
}

}  // namespace orbitree
