#include "orbitree/step.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace orbitree {

std::string marker_name(Marker m) {
    switch (m) {
        case Marker::single: return "single";
        case Marker::orbit: return "orbit";
        case Marker::parametric: return "parametric";
    }
    return "?";
}

std::string TorusWitness::str() const {
    std::ostringstream os;
    os << "torus diag(u^[";
    for (size_t i = 0; i < exponents.size(); ++i) os << (i ? "," : "") << exponents[i];
    os << "]) scaling by u^" << chi;
    return os.str();
}

std::vector<TermFamily> EStepTerms::all_terms() const {
    std::vector<TermFamily> out;
    if (!whole_line_orbit) out.push_back(constant);
    for (auto& s : specials) out.push_back(s);
    if (family) out.push_back(*family);
    if (whole_line_orbit && out.empty()) out.push_back(constant);
    return out;
}

std::vector<TermFamily> Step::outputs() const {
    if (kind == StepKind::e) return e->all_terms();
    if (kind == StepKind::eu) return {TermFamily(*eu_output, Marker::single)};
    return {TermFamily(*co_output, Marker::single)};
}

Tree Tree::trivial(const AF& f) {
    Tree t;
    t.nodes.push_back(Node{TermFamily(f, Marker::single), StepKind::co, "", {}, false});
    t.root = 0;
    return t;
}

std::vector<size_t> Tree::output_vertices() const {
    std::vector<size_t> out;
    for (size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].children.empty()) out.push_back(i);
    return out;
}

size_t Tree::depth() const {
    std::vector<size_t> d(nodes.size(), 0);
    size_t best = 0;
    // nodes are stored in creation order: parents precede children
    for (size_t i = 0; i < nodes.size(); ++i)
        for (size_t c : nodes[i].children) {
            d[c] = d[i] + 1;
            best = std::max(best, d[c]);
        }
    return best;
}

size_t Tree::add_child(size_t parent, TermFamily term, StepKind kind, std::string desc,
                       bool break_family) {
    bool fam = break_family ? false
                            : (nodes[parent].is_family_member || term.marker != Marker::single);
    nodes.push_back(Node{std::move(term), kind, std::move(desc), {}, fam});
    nodes[parent].children.push_back(nodes.size() - 1);
    return nodes.size() - 1;
}

bool Tree::is_eu_co_path() const {
    for (size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].children.size() > 1) return false;
        if (i != root && nodes[i].from_kind == StepKind::e) return false;
    }
    return true;
}

uint64_t Tree::digest() const {
    uint64_t h = 1469598103934665603ull;
    auto mix = [&](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
    };
    for (auto& n : nodes) {
        mix(n.step_desc);
        mix(marker_name(n.term.marker));
        mix(std::to_string(n.children.size()));
    }
    return h;
}

namespace {

// complement direction of Lie(D_f) inside Lie(V D_f); requires dim V D = dim D + 1
SparseMat expansion_direction(const AF& f, const UnipotentGroup& v) {
    SparseMat dir(f.ambient());
    bool found = false;
    for (auto& g : v.lie().basis()) {
        SparseMat r = f.domain().lie().reduce(g);
        if (!r.is_zero()) {
            if (found) throw std::invalid_argument("e_step: V adds more than one dimension");
            dir = r.scaled(Scalar(1) / r.entries().front().second);
            found = true;
        }
    }
    if (!found) throw std::invalid_argument("e_step: V lies inside the domain");
    return dir;
}

// the term with the given value on the expanding direction
AF term_at(const AF& f, const SparseMat& dir, const Scalar& z) {
    std::vector<std::pair<SparseMat, Scalar>> gens;
    for (size_t k = 0; k < f.dim(); ++k)
        gens.push_back({f.domain().lie().basis()[k], f.values()[k]});
    gens.push_back({dir, z});
    return AF(f.ambient(), gens);
}

/* Search for a one-parameter diagonal subtorus fixing f, normalizing the
 * extended domain, and scaling the expanding coordinate by a nonconstant
 * character. Constraints on exponents d: equal characters across each basis
 * vector of the extended domain, zero character on nonzero-valued vectors of
 * f, nonzero character on the direction. */
std::optional<TorusWitness> torus_witness(const AF& f, const SparseMat& dir,
                                          const std::vector<Scalar>& peel_values) {
    size_t o = peel_values.size();
    size_t nl = f.ambient();
    size_t nv = o + nl;  // ambient variables: peeled rows then the local frame
    std::vector<std::pair<std::vector<Scalar>, Scalar>> cons;
    auto chi_row = [&](size_t i, size_t j) {
        // local indices shifted past the peeled rows
        std::vector<Scalar> row(nv, Scalar(0));
        row[o + j - 1] += Scalar(1);
        row[o + i - 1] -= Scalar(1);
        return row;
    };
    // the composed functional is nonzero on each peeled row character with a
    // nonzero value: the torus must fix those directions
    for (size_t l = 1; l <= o; ++l) {
        if (peel_values[l - 1].is_zero()) continue;
        std::vector<Scalar> row(nv, Scalar(0));
        row[l] += Scalar(1);      // ambient index l+1
        row[l - 1] -= Scalar(1);  // ambient index l
        cons.push_back({row, Scalar(0)});
    }
    auto sub_rows = [&](std::vector<Scalar> a, const std::vector<Scalar>& b) {
        for (size_t k = 0; k < a.size(); ++k) a[k] -= b[k];
        return a;
    };
    auto add_equal_chi = [&](const SparseMat& b) {
        auto [i0, j0] = SparseMat::pos_of(b.entries()[0].first, nl);
        for (size_t e = 1; e < b.entries().size(); ++e) {
            auto [i, j] = SparseMat::pos_of(b.entries()[e].first, nl);
            cons.push_back({sub_rows(chi_row(i, j), chi_row(i0, j0)), Scalar(0)});
        }
        return chi_row(i0, j0);
    };
    for (size_t k = 0; k < f.dim(); ++k) {
        auto row = add_equal_chi(f.domain().lie().basis()[k]);
        if (!f.values()[k].is_zero()) cons.push_back({row, Scalar(0)});
    }
    std::vector<Scalar> dir_row = add_equal_chi(dir);
    auto sol = affine_solve(cons, nv);
    if (!sol) return std::nullopt;
    for (auto& kv : sol->kernel) {
        Scalar chi(0);
        for (size_t i = 0; i < nv; ++i)
            if (!dir_row[i].is_zero()) chi += dir_row[i] * kv[i];
        if (chi.is_zero()) continue;
        // scale to integer exponents; report the local part only
        mpz_class lcm(1);
        for (auto& x : kv) {
            if (!x.is_rational()) return std::nullopt;
            const Rat& r = x.rational();
            lcm = lcm * r.get_den() / ::gcd(lcm, mpz_class(r.get_den()));
        }
        TorusWitness w;
        for (size_t i = o; i < nv; ++i) {
            const Rat& r = kv[i].rational();
            w.exponents.push_back(mpz_class(r.get_num() * (lcm / r.get_den())).get_si());
        }
        w.chi = mpz_class(chi.rational().get_num() * lcm / chi.rational().get_den()).get_si();
        return w;
    }
    return std::nullopt;
}

// verify the torus witness on sampled parameter values: conjugation carries
// the value-1 term to the value-u^chi term exactly
bool verify_torus_witness(const AF& f, const SparseMat& dir, const TorusWitness& w) {
    size_t n = f.ambient();
    for (long u : {2L, 3L, 5L}) {
        Mat g(n, n);
        for (size_t i = 1; i <= n; ++i) {
            Rat p(1);
            long e = w.exponents[i - 1];
            for (long k = 0; k < std::abs(e); ++k) p *= u;
            g(i, i) = (e >= 0) ? Scalar(p) : Scalar(Rat(1) / p);
        }
        Rat scale(1);
        for (long k = 0; k < std::abs(w.chi); ++k) scale *= u;
        Scalar target = (w.chi >= 0) ? Scalar(scale) : Scalar(Rat(1) / scale);
        AF lhs = conjugate_af(g, term_at(f, dir, Scalar(1)));
        AF rhs = term_at(f, dir, target);
        if (!(lhs == rhs)) return false;
    }
    return true;
}

/* Translation witness: a root element of the stabilizer of f that normalizes
 * the extended domain and translates the expanding coordinate. Makes every
 * term of the step conjugate to every other. */
std::optional<SparseMat> translation_witness(const AF& f, const SparseMat& dir,
                                             const UnipotentGroup& big, bool protect_col1) {
    size_t n = f.ambient();
    for (size_t i = 1; i <= n; ++i)
        for (size_t j = 1; j <= n; ++j) {
            if (i == j) continue;
            // entries in the first local column would move peeled-row values
            if (protect_col1 && j == 1) continue;
            SparseMat u = SparseMat::unit(n, i, j);
            if (!fixes_af(u, f)) continue;
            // must normalize the extended domain at group level
            bool norm = true;
            for (auto& b : big.lie().basis()) {
                SparseMat cur = b;
                for (size_t k = 1; k <= n && norm; ++k) {
                    cur = SparseMat::bracket(u, cur);
                    if (cur.is_zero()) break;
                    if (!big.contains(cur)) norm = false;
                }
                if (!norm) break;
            }
            if (!norm) continue;
            // Ad(exp(-u)) dir - dir must fall into Lie D with nonzero f-value
            SparseMat shift(n);
            SparseMat cur = dir;
            Rat fact(1);
            for (size_t k = 1; k <= n; ++k) {
                cur = SparseMat::bracket(u, cur).scaled(Scalar(-1));
                if (cur.is_zero()) break;
                fact /= (long)k;
                shift = shift + cur.scaled(Scalar(fact));
            }
            if (shift.is_zero()) continue;
            if (!f.domain().contains(shift)) continue;
            if (f.value(shift).is_zero()) continue;
            // verify: conjugating the 0-term gives the lambda-term exactly
            Mat g = Mat::identity(n);
            g(i, j) = Scalar(1);
            AF lhs = conjugate_af(g, term_at(f, dir, Scalar(0)));
            AF rhs = term_at(f, dir, f.value(shift));
            if (lhs == rhs) return u;
        }
    return std::nullopt;
}

}  // namespace

std::vector<UnipotentGroup> e_chain_directions(const AF& f, const UnipotentGroup& v) {
    // complement basis of Lie D_f in Lie(V D_f), ordered by (row, column)
    SpanBasis acc = f.domain().lie();
    std::vector<SparseMat> dirs;
    for (auto& g : v.lie().basis()) {
        SparseMat r = acc.reduce(g);
        if (!r.is_zero()) {
            acc.insert(r);
            dirs.push_back(r);
        }
    }
    std::sort(dirs.begin(), dirs.end(),
              [](const SparseMat& a, const SparseMat& b) { return a.leading() < b.leading(); });
    std::vector<UnipotentGroup> out;
    for (auto& d : dirs) out.push_back(UnipotentGroup(f.ambient(), {d}));
    return out;
}

EStepTerms e_step(const AF& f, const UnipotentGroup& v, bool search_witness,
                  const std::vector<Scalar>& peel_values) {
    bool protect_col1 = !peel_values.empty() && !peel_values.back().is_zero();
    size_t n = f.ambient();
    EStepTerms r;
    r.input = f;
    r.direction_group = v;
    // preconditions of the expansion operation
    for (size_t a = 0; a < v.dim(); ++a)
        for (size_t b = a + 1; b < v.dim(); ++b) {
            SparseMat br = SparseMat::bracket(v.lie().basis()[a], v.lie().basis()[b]);
            if (!br.is_zero() && !f.domain().contains(br))
                throw std::invalid_argument("e_step: [V,V] not inside D_F");
        }
    for (auto& g : v.lie().basis())
        if (!fixes_af(g, f)) throw std::invalid_argument("e_step: V does not fix F");
    {
        AF cut = restrict(f, v);
        for (auto& val : cut.values())
            if (!val.is_zero()) throw std::invalid_argument("e_step: F nonzero on V cap D_F");
    }
    r.direction = expansion_direction(f, v);
    UnipotentGroup big = UnipotentGroup::product(f.domain(), UnipotentGroup(n, {r.direction}));
    {
        std::ostringstream os;
        auto [i, j] = SparseMat::pos_of(r.direction.leading(), n);
        os << "e over dir(" << i << "," << j << ")";
        r.desc = os.str();
    }

    if (search_witness) {
        if (auto tw = translation_witness(f, r.direction, big, protect_col1)) {
            auto [i, j] = SparseMat::pos_of(tw->leading(), n);
            std::ostringstream os;
            os << "translation by exp(e" << i << "," << j << ")";
            r.whole_line_orbit = true;
            r.constant = TermFamily(term_at(f, r.direction, Scalar(0)), Marker::orbit, os.str());
            return r;
        }
    }

    r.constant = TermFamily(term_at(f, r.direction, Scalar(0)), Marker::single);

    // symbolic generic term: special values are where its canonical value
    // pattern degenerates (only meaningful when the input is t-free)
    bool input_symbolic = f.depends_on_t() || r.direction.depends_on_t();
    std::vector<Rat> specials;
    if (!input_symbolic) {
        AF generic = term_at(f, r.direction, Scalar::t());
        for (auto& z : generic.special_t_values())
            if (z != 0) specials.push_back(z);
        std::sort(specials.begin(), specials.end());
        for (auto& z : specials) {
            r.specials.push_back(TermFamily(term_at(f, r.direction, Scalar(z)), Marker::single));
            r.special_values.push_back(z);
        }
    }

    if (search_witness && specials.empty()) {
        if (auto tw = torus_witness(f, r.direction, peel_values)) {
            if (verify_torus_witness(f, r.direction, *tw)) {
                r.family = TermFamily(term_at(f, r.direction, Scalar(1)), Marker::orbit, tw->str());
                return r;
            }
        }
    }
    if (input_symbolic) {
        // cannot open a second formal parameter; stand in with a concrete value
        r.nested_parametric = true;
        r.family = TermFamily(term_at(f, r.direction, Scalar(1)), Marker::parametric);
    } else {
        r.family = TermFamily(term_at(f, r.direction, Scalar::t()), Marker::parametric);
    }
    return r;
}

AF eu_step(const AF& f, const UnipotentGroup& x, const UnipotentGroup& y) {
    size_t n = f.ambient();
    if (!f.domain().lie().contains_span(y.lie()))
        throw std::invalid_argument("eu_step: Y is not inside D_F");
    // C: the Lie(Y)-complement inside D_F
    std::vector<SparseMat> cbasis;
    SpanBasis yspan = y.lie();
    for (auto& b : f.domain().lie().basis()) {
        SparseMat red = yspan.reduce(b);
        if (!red.is_zero()) cbasis.push_back(red);
    }
    UnipotentGroup c(n, cbasis);
    if (c.dim() + y.dim() != f.dim())
        throw std::invalid_argument("eu_step: D_F is not Y C");
    // condition 1: C contains [X,X], [Y,Y], [X,Y]
    auto check_brackets = [&](const UnipotentGroup& a, const UnipotentGroup& b, const char* what) {
        for (auto& p : a.lie().basis())
            for (auto& q : b.lie().basis()) {
                SparseMat br = SparseMat::bracket(p, q);
                if (!br.is_zero() && !c.contains(br))
                    throw std::invalid_argument(std::string("eu_step: C does not contain ") + what);
            }
    };
    check_brackets(x, x, "[X,X]");
    check_brackets(y, y, "[Y,Y]");
    check_brackets(x, y, "[X,Y]");
    // condition 3: X and Y fix F|_C
    AF fc = restrict(f, c);
    for (auto& g : x.lie().basis())
        if (!fixes_af(g, fc)) throw std::invalid_argument("eu_step: X does not fix F|_C");
    for (auto& g : y.lie().basis())
        if (!fixes_af(g, fc)) throw std::invalid_argument("eu_step: Y does not fix F|_C");
    // condition 4: F(X cap C) = F(Y cap C) = 0
    for (auto& val : restrict(f, x.intersect(c)).values())
        if (!val.is_zero()) throw std::invalid_argument("eu_step: F nonzero on X cap C");
    for (auto& val : restrict(f, y.intersect(c)).values())
        if (!val.is_zero()) throw std::invalid_argument("eu_step: F nonzero on Y cap C");
    // nondegeneracy of the commutator pairing on (X/XcapC) x (Y/YcapC)
    SpanBasis xc = x.intersect(c).lie();
    SpanBasis yc = y.intersect(c).lie();
    std::vector<SparseMat> xq, yq;
    {
        SpanBasis accx = xc;
        for (auto& g : x.lie().basis()) {
            SparseMat rr = accx.reduce(g);
            if (!rr.is_zero()) {
                accx.insert(rr);
                xq.push_back(rr);
            }
        }
        SpanBasis accy = yc;
        for (auto& g : y.lie().basis()) {
            SparseMat rr = accy.reduce(g);
            if (!rr.is_zero()) {
                accy.insert(rr);
                yq.push_back(rr);
            }
        }
    }
    if (xq.size() != yq.size())
        throw std::invalid_argument("eu_step: pairing is not square (dimension mismatch)");
    if (!xq.empty()) {
        Mat pairing(xq.size(), yq.size());
        for (size_t a = 0; a < xq.size(); ++a)
            for (size_t b = 0; b < yq.size(); ++b) {
                SparseMat br = SparseMat::bracket(xq[a], yq[b]);
                if (!br.is_zero()) {
                    if (!c.contains(br))
                        throw std::invalid_argument("eu_step: [X,Y] escapes C");
                    pairing(a + 1, b + 1) = f.value(br);
                }
            }
        if (matrix_rank(pairing) != xq.size())
            throw std::invalid_argument("eu_step: degenerate commutator pairing");
    }
    // output: domain X C, vanishing on X, agreeing with F on C
    std::vector<std::pair<SparseMat, Scalar>> gens;
    for (auto& b : c.lie().basis()) gens.push_back({b, f.value(b)});
    for (auto& b : x.lie().basis()) gens.push_back({b, Scalar(0)});
    AF out(n, gens);
    if (out.dim() != f.dim()) throw std::logic_error("eu_step: dimension not preserved");
    return out;
}

AF co_step(const AF& f, const Mat& g) { return conjugate_af(g, f); }

Tree graft(const std::vector<Tree>& children, const Tree& parent) {
    Tree out = parent;
    for (auto& ch : children) {
        bool attached = false;
        for (size_t v : out.output_vertices()) {
            if (out.nodes[v].term.rep == ch.input_af()) {
                // splice child nodes, re-indexing
                size_t base = out.nodes.size();
                for (size_t i = 0; i < ch.nodes.size(); ++i) {
                    if (i == ch.root) continue;
                    Tree::Node n = ch.nodes[i];
                    for (auto& c : n.children) c = base + c - (c > ch.root ? 1 : 0);
                    n.is_family_member = n.is_family_member || out.nodes[v].is_family_member;
                    out.nodes.push_back(n);
                }
                // root's children attach to v
                for (size_t c : ch.nodes[ch.root].children)
                    out.nodes[v].children.push_back(base + c - (c > ch.root ? 1 : 0));
                attached = true;
                break;
            }
        }
        if (!attached) throw std::invalid_argument("graft: child input matches no parent output");
    }
    return out;
}

Tree invert_path(const Tree& path) {
    if (!path.is_eu_co_path()) throw std::invalid_argument("invert_path: e-step present");
    // collect the chain from root to the unique output
    std::vector<size_t> chain{path.root};
    while (!path.nodes[chain.back()].children.empty())
        chain.push_back(path.nodes[chain.back()].children[0]);
    Tree out = Tree::trivial(path.nodes[chain.back()].term.rep);
    size_t cur = out.root;
    for (size_t i = chain.size(); i-- > 1;) {
        const auto& node = path.nodes[chain[i]];
        const AF& target = path.nodes[chain[i - 1]].term.rep;
        cur = out.add_child(cur, TermFamily(target, Marker::single), node.from_kind,
                            "inverse of " + node.step_desc);
    }
    return out;
}

Tree tree_compose(const Tree& tr, const AF& f) {
    Tree out = tr;
    for (auto& n : out.nodes) n.term.rep = compose(n.term.rep, f);
    return out;
}

Tree tree_embed(const std::vector<size_t>& index_map, size_t ambient_target, const Tree& tr) {
    Tree out = tr;
    for (auto& n : out.nodes) n.term.rep = standard_embed(index_map, ambient_target, n.term.rep);
    return out;
}

}  // namespace orbitree
