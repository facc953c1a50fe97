#include "orbitree/canonical.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>
#include <stdexcept>

namespace orbitree {

namespace {

// ---------- split-aware zero testing ----------

struct SplitSink {
    std::vector<Rat>* splits = nullptr;
    bool* irrational = nullptr;
    void take(const Scalar& v) {
        if (!v.depends_on_t() || v.is_zero()) return;
        auto roots = v.vanishing_t_values();
        size_t mult_sum = 0;
        if (splits)
            for (auto& r : roots) {
                if (r != 0) splits->push_back(r);
                ++mult_sum;
            }
        // leftover non-rational vanishing locus
        if (irrational && (long)mult_sum < v.num().degree()) {
            // count root multiplicities exactly
            Poly p = v.num();
            long extracted = 0;
            for (auto& r : roots) {
                Poly lin(std::vector<Rat>{-r, Rat(1)});
                for (;;) {
                    Poly q, rem;
                    Poly::divmod(p, lin, q, rem);
                    if (!rem.is_zero()) break;
                    p = q;
                    ++extracted;
                }
            }
            if (p.degree() > 0) *irrational = true;
        }
    }
    // generic truth value of "v != 0"
    bool nonzero(const Scalar& v) {
        take(v);
        return !v.is_zero();
    }
};

bool domain_inside_upper(const AF& f) {
    for (auto [i, j] : f.support())
        if (i >= j) return false;
    return true;
}

bool domain_is_full_upper(const AF& f) {
    size_t n = f.ambient();
    return f.dim() == n * (n - 1) / 2 && domain_inside_upper(f);
}

// permutation as images; applied to an AF via conjugate_af_perm
Mat perm_matrix(const std::vector<size_t>& w) {
    size_t n = w.size();
    Mat m(n, n);
    for (size_t i = 1; i <= n; ++i) m(w[i - 1], i) = Scalar(1);
    return m;
}

std::string pos_str(size_t i, size_t j) {
    std::ostringstream os;
    os << "(" << i << "," << j << ")";
    return os.str();
}

// element of Lie D with prescribed zero coordinates on a column strip and
// coordinate 1 at (k, l); nullopt if none exists
std::optional<SparseMat> column_carrier(const AF& f, size_t k, size_t l, size_t forbid_above) {
    size_t n = f.ambient();
    const auto& basis = f.domain().lie().basis();
    std::vector<std::pair<std::vector<Scalar>, Scalar>> cons;
    auto coord_row = [&](size_t i, size_t j) {
        std::vector<Scalar> row(basis.size(), Scalar(0));
        for (size_t b = 0; b < basis.size(); ++b) row[b] = basis[b].get(i, j);
        return row;
    };
    cons.push_back({coord_row(k, l), Scalar(1)});
    for (size_t i = forbid_above; i < l; ++i)
        if (i != k && i > 1) cons.push_back({coord_row(i, l), Scalar(0)});
    auto sol = affine_solve(cons, basis.size());
    if (!sol) return std::nullopt;
    SparseMat v(n);
    for (size_t b = 0; b < basis.size(); ++b)
        if (!sol->point[b].is_zero()) v = v + basis[b].scaled(sol->point[b]);
    return v;
}

}  // namespace

XiLevel xi_level(const AF& f0) {
    if (!domain_inside_upper(f0))
        throw std::invalid_argument("xi_level: domain not inside U_n");
    XiLevel lvl;
    SplitSink sink{&lvl.splits, nullptr};
    AF f = f0;
    size_t n = f.ambient();

    for (size_t guard = 0; guard <= 4 * n + 8; ++guard) {
        // structural coefficients that depend on t can flip any decision below
        for (auto& b : f.domain().lie().basis())
            for (auto& [p, c] : b.entries()) sink.take(c);
        if (n <= 1 || domain_is_full_upper(f)) {
            lvl.terminal = XiLevel::Terminal::done;
            lvl.inner = f;
            return lvl;
        }
        bool row1_full = true;
        for (size_t j = 2; j <= n && row1_full; ++j) row1_full &= f.has_root(1, j);
        if (row1_full) {
            bool clean = true;
            for (size_t j = 3; j <= n; ++j) clean &= !sink.nonzero(f.root_value(1, j));
            if (clean) {
                // peel the first row: f = j(inner) o Y with Y carried by y_value
                lvl.terminal = XiLevel::Terminal::peel;
                lvl.y_value = f.root_value(1, 2);
                std::vector<std::pair<SparseMat, Scalar>> gens;
                for (size_t k = 0; k < f.dim(); ++k) {
                    const SparseMat& b = f.domain().lie().basis()[k];
                    auto [i, j] = SparseMat::pos_of(b.leading(), n);
                    if (i == 1) continue;
                    SparseMat nb(n - 1);
                    for (auto& [p, v] : b.entries()) {
                        auto [bi, bj] = SparseMat::pos_of(p, n);
                        nb.set(bi - 1, bj - 1, v);
                    }
                    gens.push_back({nb, f.values()[k]});
                }
                lvl.inner = AF(n - 1, gens);
                return lvl;
            }
        }
        // smallest m >= 2 with the row tail A_m inside the domain
        size_t m = n + 1;
        while (m >= 3 && f.has_root(1, m - 1)) --m;
        bool am_nonzero = false;
        for (size_t i = m; i <= n; ++i) am_nonzero |= sink.nonzero(f.root_value(1, i));
        if (!am_nonzero) {
            if (m <= 2) throw std::logic_error("xi_level: peel should have applied");
            lvl.terminal = XiLevel::Terminal::expand;
            lvl.e_dir = UnipotentGroup::root_group(n, 1, m - 1);
            return lvl;
        }
        // third case: l1 = biggest column with a nonzero first-row value
        size_t l1 = 0;
        for (size_t l = 2; l <= n; ++l)
            if (f.has_root(1, l) && sink.nonzero(f.root_value(1, l))) l1 = l;
        if (l1 < 2) throw std::logic_error("xi_level: lost the nonzero row value");

        bool ended_in_estep = false;
        for (size_t i = 1; i + 1 <= l1 - 1; ++i) {
            size_t k = l1 - i;
            auto carrier = column_carrier(f, k, l1, k);
            if (carrier) {
                // exchange: trade the (k,l1)-carrier for the (1,k) root
                // pairing value f([e_{1k}, carrier])
                SparseMat br = SparseMat::bracket(SparseMat::unit(n, 1, k), *carrier);
                Scalar pairing = f.domain().contains(br) ? f.value(br) : Scalar(0);
                if (!sink.nonzero(pairing))
                    throw std::logic_error("xi_level: degenerate exchange pairing");
                // output: domain U_(1,k) (D cap L_(k-1,l1)), zero on the new root
                std::vector<std::pair<SparseMat, Scalar>> gens;
                const auto& basis = f.domain().lie().basis();
                // C = elements with zero coordinates on (i', l1), k-1 < i' < l1
                std::vector<std::pair<std::vector<Scalar>, Scalar>> cons;
                for (size_t ip = k; ip < l1; ++ip) {
                    if (ip == 1) continue;
                    std::vector<Scalar> row(basis.size(), Scalar(0));
                    for (size_t b = 0; b < basis.size(); ++b) row[b] = basis[b].get(ip, l1);
                    cons.push_back({row, Scalar(0)});
                }
                auto csol = affine_solve(cons, basis.size());
                for (auto& kv : csol->kernel) {
                    SparseMat v(n);
                    Scalar val(0);
                    for (size_t b = 0; b < basis.size(); ++b)
                        if (!kv[b].is_zero()) {
                            v = v + basis[b].scaled(kv[b]);
                            val += kv[b] * f.values()[b];
                        }
                    gens.push_back({v, val});
                }
                gens.push_back({SparseMat::unit(n, 1, k), Scalar(0)});
                AF out(n, gens);
                if (out.dim() != f.dim()) throw std::logic_error("xi_level: exchange lost dimension");
                PathStep st;
                st.kind = StepKind::eu;
                st.output = out;
                st.eu_x = UnipotentGroup::root_group(n, 1, k);
                st.eu_y = UnipotentGroup(n, {*carrier});
                st.desc = "eu X=" + pos_str(1, k) + " Y~" + pos_str(k, l1);
                lvl.pre_steps.push_back(st);
                f = out;
                continue;
            }
            if (!f.has_root(1, k)) {
                lvl.terminal = XiLevel::Terminal::expand;
                lvl.e_dir = UnipotentGroup::root_group(n, 1, k);
                ended_in_estep = true;
                break;
            }
            // conjugate the (1,k) value away using the (1,l1) pivot
            Scalar val = f.root_value(1, k);
            if (!sink.nonzero(val)) continue;
            Scalar s = -(val / f.root_value(1, l1));
            Mat u = Mat::identity(n);
            u(k, l1) = s;
            AF out = conjugate_af(u, f);
            PathStep st;
            st.kind = StepKind::co;
            st.output = out;
            st.conjugator = u;
            st.desc = "co u in U" + pos_str(k, l1);
            lvl.pre_steps.push_back(st);
            f = out;
        }
        if (ended_in_estep) return lvl;
        // case-ending minimal-length Weyl element: move column l1 to 2
        for (size_t j = 2; j <= n; ++j)
            if (!f.has_root(1, j)) throw std::logic_error("xi_level: first row incomplete at the end");
        if (l1 > 2) {
            std::vector<size_t> w(n);
            for (size_t j = 1; j <= n; ++j) {
                if (j == 1) w[j - 1] = 1;
                else if (j == l1) w[j - 1] = 2;
                else if (j >= 2 && j < l1) w[j - 1] = j + 1;
                else w[j - 1] = j;
            }
            AF out = conjugate_af_perm(w, f);
            PathStep st;
            st.kind = StepKind::co;
            st.output = out;
            st.conjugator = perm_matrix(w);
            st.final_weyl = true;
            std::ostringstream os;
            os << "co w: " << l1 << "->2";
            st.desc = os.str();
            lvl.pre_steps.push_back(st);
            f = out;
        } else {
            // l1 = 2: the Weyl element is trivial but still ends the case
            PathStep st;
            st.kind = StepKind::co;
            st.output = f;
            st.conjugator = Mat::identity(n);
            st.final_weyl = true;
            st.desc = "co w: id";
            lvl.pre_steps.push_back(st);
        }
        // next loop iteration sees the peel
    }
    throw std::logic_error("xi_level: no progress (loop guard tripped)");
}

// ---------- canonical expansion driver ----------

namespace {

struct PeelFrame {
    Scalar y_value;
    size_t outer_n;
};

AF compose_back(AF f, const std::vector<PeelFrame>& stack) {
    for (size_t fi = stack.size(); fi-- > 0;) {
        size_t big = stack[fi].outer_n;
        std::vector<size_t> map(f.ambient());
        for (size_t i = 0; i < f.ambient(); ++i) map[i] = i + 2;
        AF emb = standard_embed(map, big, f);
        std::vector<std::pair<SparseMat, Scalar>> g;
        for (size_t j = 2; j <= big; ++j)
            g.push_back({SparseMat::unit(big, 1, j), j == 2 ? stack[fi].y_value : Scalar(0)});
        AF y(big, g);
        f = compose(emb, y);
    }
    return f;
}

struct ExpandCtx {
    ExpandLimits lim;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    std::map<Partition, MultCount> classes;
    bool nested = false;
    bool irrational = false;
    uint64_t leaves = 0;
    uint64_t nodes = 0;
    uint64_t digest = 1469598103934665603ull;
    Tree tree;
    bool tree_on = true;
    bool truncated = false;

    void mix(const std::string& s) {
        for (unsigned char c : s) {
            digest ^= c;
            digest *= 1099511628211ull;
        }
    }
    void bump() {
        if (++nodes > lim.max_nodes) throw std::runtime_error("expansion node budget exceeded");
        if (lim.timeout_s > 0 && (nodes & 1023) == 0) {
            double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (el > lim.timeout_s) throw std::runtime_error("expansion timeout");
        }
    }
    size_t record(size_t parent, const AF& ambient_label, Marker marker, StepKind kind,
                  const std::string& desc, const std::string& witness, bool break_family = false) {
        if (!tree_on) return parent;
        if (tree.nodes.size() >= lim.tree_budget) {
            truncated = true;
            tree_on = false;
            return parent;
        }
        return tree.add_child(parent, TermFamily(ambient_label, marker, witness), kind, desc,
                              break_family);
    }
};

Partition class_of_simples(const std::vector<Scalar>& simples,
                           const std::vector<bool>& nonzero) {
    std::vector<long> parts;
    size_t run = 0;
    for (size_t i = 0; i < simples.size(); ++i) {
        if (nonzero[i]) {
            ++run;
        } else {
            parts.push_back((long)run + 1);
            run = 0;
        }
    }
    parts.push_back((long)run + 1);
    return Partition::normalize(parts);
}

void substitute_all(std::vector<Scalar>& v, const Rat& t) {
    for (auto& x : v) x = x.substitute(t);
}

struct Expander {
    ExpandCtx& ctx;

    void emit_leaf(std::vector<Scalar> simples, int infdepth, bool parametric,
                   std::set<Rat> consumed, size_t tree_parent,
                   const std::vector<PeelFrame>& stack, const AF& leaf_af) {
        // classify through run lengths; zero tests may split on t
        std::vector<Rat> splits;
        SplitSink sink{&splits, &ctx.irrational};
        std::vector<bool> nz;
        for (auto& s : simples) nz.push_back(sink.nonzero(s));
        for (auto& r : splits) {
            if (consumed.count(r)) continue;
            consumed.insert(r);
            std::vector<Scalar> sub = simples;
            substitute_all(sub, r);
            size_t tp = tree_parent;
            if (ctx.tree_on)
                tp = ctx.record(tree_parent, compose_back(leaf_af.substitute(r), stack),
                                Marker::single, StepKind::co, "member t=" + r.get_str(), "", true);
            emit_leaf(std::move(sub), infdepth, false, consumed, tp, stack, leaf_af.substitute(r));
        }
        Partition cls = class_of_simples(simples, nz);
        auto& mc = ctx.classes[cls];
        bool infinite = infdepth > 0 || parametric;
        if (infinite) {
            mc.infinite = true;
            if (parametric) mc.from_parametric = true;
        } else {
            ++mc.count;
        }
        ++ctx.leaves;
        ctx.mix("leaf:" + cls.str() + (infinite ? "#inf" : "#1"));
        if (ctx.tree_on) {
            AF ambient = compose_back(leaf_af, stack);
            ctx.record(tree_parent, ambient, infinite ? (parametric ? Marker::parametric : Marker::orbit)
                                                      : Marker::single,
                       StepKind::e, "output " + cls.str(), "");
        }
    }

    void expand(AF f, std::vector<Scalar> prefix, int infdepth, bool parametric,
                std::set<Rat> consumed, size_t tree_parent, std::vector<PeelFrame> stack) {
        for (;;) {
            ctx.bump();
            XiLevel lvl = xi_level(f);
            // branch on decision-flipping t values: each branch extracts one
            // member of the enclosing parametric family
            for (auto& r : lvl.splits) {
                if (consumed.count(r)) continue;
                consumed.insert(r);
                AF fs = f.substitute(r);
                std::vector<Scalar> ps = prefix;
                substitute_all(ps, r);
                std::vector<PeelFrame> ss = stack;
                for (auto& fr : ss) fr.y_value = fr.y_value.substitute(r);
                size_t tp = tree_parent;
                if (ctx.tree_on)
                    tp = ctx.record(tree_parent, compose_back(fs, ss), Marker::single, StepKind::co,
                                    "member t=" + r.get_str(), "", true);
                expand(std::move(fs), std::move(ps), infdepth, false, consumed, tp, ss);
            }
            for (auto& st : lvl.pre_steps) {
                ctx.mix(st.desc);
                f = st.output;
                if (ctx.tree_on)
                    tree_parent = ctx.record(tree_parent, compose_back(f, stack), Marker::single,
                                             st.kind, st.desc, "");
            }
            if (lvl.terminal == XiLevel::Terminal::done) {
                std::vector<Scalar> simples = prefix;
                size_t m = lvl.inner.ambient();
                for (size_t i = 1; i + 1 <= m; ++i) simples.push_back(lvl.inner.root_value(i, i + 1));
                emit_leaf(std::move(simples), infdepth, parametric, consumed, tree_parent, stack,
                          lvl.inner);
                return;
            }
            if (lvl.terminal == XiLevel::Terminal::peel) {
                ctx.mix("peel");
                stack.push_back(PeelFrame{lvl.y_value, f.ambient()});
                prefix.push_back(lvl.y_value);
                f = lvl.inner;
                continue;
            }
            // expand: one-dimensional e-step; witnesses must respect the
            // peeled row characters of the composed functional
            std::vector<Scalar> peel_vals;
            for (auto& fr : stack) peel_vals.push_back(fr.y_value);
            EStepTerms ts = e_step(f, lvl.e_dir, true, peel_vals);
            ctx.mix(ts.desc);
            if (ts.nested_parametric) ctx.nested = true;
            if (ts.whole_line_orbit) {
                size_t tp = ctx.tree_on
                                ? ctx.record(tree_parent, compose_back(ts.constant.rep, stack),
                                             Marker::orbit, StepKind::e, ts.desc, ts.constant.witness)
                                : tree_parent;
                expand(ts.constant.rep, prefix, infdepth + 1, parametric, consumed, tp, stack);
                return;
            }
            {
                size_t tp = ctx.tree_on
                                ? ctx.record(tree_parent, compose_back(ts.constant.rep, stack),
                                             Marker::single, StepKind::e, ts.desc + " const", "")
                                : tree_parent;
                expand(ts.constant.rep, prefix, infdepth, parametric, consumed, tp, stack);
            }
            for (auto& sp : ts.specials) {
                size_t tp = ctx.tree_on
                                ? ctx.record(tree_parent, compose_back(sp.rep, stack), Marker::single,
                                             StepKind::e, ts.desc + " special", "")
                                : tree_parent;
                expand(sp.rep, prefix, infdepth, parametric, consumed, tp, stack);
            }
            if (ts.family) {
                bool orbit = ts.family->marker == Marker::orbit;
                size_t tp = ctx.tree_on
                                ? ctx.record(tree_parent, compose_back(ts.family->rep, stack),
                                             ts.family->marker, StepKind::e, ts.desc + " family",
                                             ts.family->witness)
                                : tree_parent;
                // the generic member never revisits the split-off values
                std::set<Rat> fam_consumed = consumed;
                for (auto& z : ts.special_values) fam_consumed.insert(z);
                if (orbit)
                    expand(ts.family->rep, prefix, infdepth + 1, parametric, fam_consumed, tp, stack);
                else if (ts.nested_parametric)
                    expand(ts.family->rep, prefix, infdepth + 1, parametric, fam_consumed, tp, stack);
                else
                    expand(ts.family->rep, prefix, infdepth, true, fam_consumed, tp, stack);
            }
            return;
        }
    }
};

}  // namespace

OrbitReport omega_report(const AF& f, const ExpandLimits& limits) {
    OrbitReport rep;
    ExpandCtx ctx;
    ctx.lim = limits;
    ctx.tree = Tree::trivial(f);
    Expander ex{ctx};
    ex.expand(f, {}, 0, false, {}, ctx.tree.root, {});
    rep.all_classes = ctx.classes;
    std::set<Partition> all;
    for (auto& [c, mc] : ctx.classes) all.insert(c);
    rep.omega = minimal_elements(all);
    for (auto& a : rep.omega) {
        rep.mult[a] = ctx.classes[a];
        if (!ctx.classes[a].infinite) rep.omega_fin.insert(a);
        if (ctx.classes[a].from_parametric) rep.witness_complete = false;
    }
    rep.nested_parametric = ctx.nested;
    rep.irrational_specials = ctx.irrational;
    if (ctx.nested || ctx.irrational) rep.witness_complete = false;
    rep.digest = ctx.digest;
    rep.leaves = ctx.leaves;
    rep.nodes = ctx.nodes;
    rep.witness_tree = ctx.tree;
    rep.tree_truncated = ctx.truncated;
    return rep;
}

std::string OrbitReport::str() const {
    std::ostringstream os;
    os << "omega = {";
    bool first = true;
    for (auto& a : omega) {
        os << (first ? "" : ", ") << a.str();
        auto it = mult.find(a);
        if (it != mult.end())
            os << (it->second.infinite ? ":inf" : (":" + std::to_string(it->second.count)));
        first = false;
    }
    os << "}, omega_fin = {";
    first = true;
    for (auto& a : omega_fin) {
        os << (first ? "" : ", ") << a.str();
        first = false;
    }
    os << "}" << (witness_complete ? "" : " [witness-incomplete]");
    return os.str();
}

// ---------- initial (eu,co) paths ----------

namespace {

struct PathCollect {
    Tree tree;
    AF current;
    size_t tip;
    std::vector<PeelFrame> stack;
    size_t weyl_count = 0;
};

void i_st_run(const AF& f, PathCollect& pc, std::optional<size_t> stop_after_weyl) {
    pc.tree = Tree::trivial(f);
    pc.tip = pc.tree.root;
    pc.current = f;
    AF local = f;
    for (;;) {
        XiLevel lvl = xi_level(local);
        for (auto& st : lvl.pre_steps) {
            local = st.output;
            AF ambient = compose_back(local, pc.stack);
            pc.tip = pc.tree.add_child(pc.tip, TermFamily(ambient, Marker::single), st.kind, st.desc);
            pc.current = ambient;
            if (st.final_weyl) {
                ++pc.weyl_count;
                if (stop_after_weyl && pc.weyl_count >= *stop_after_weyl) return;
            }
        }
        if (lvl.terminal == XiLevel::Terminal::peel) {
            pc.stack.push_back(PeelFrame{lvl.y_value, local.ambient()});
            local = lvl.inner;
            continue;
        }
        return;  // expand or done ends the initial (eu,co) path
    }
}

}  // namespace

Tree i_st(const AF& f) {
    PathCollect pc;
    i_st_run(f, pc, std::nullopt);
    return pc.tree;
}

AF iota_st(const AF& f) {
    PathCollect pc;
    i_st_run(f, pc, std::nullopt);
    return pc.current;
}

Tree i_st_k(const AF& f, size_t k) {
    if (k < 1) throw std::invalid_argument("i_st_k: k must be >= 1");
    if (k == 1) return Tree::trivial(f);
    PathCollect pc;
    i_st_run(f, pc, k - 1);
    if (pc.weyl_count < k - 1) throw std::invalid_argument("i_st_k: not enough Weyl conjugations");
    return pc.tree;
}

AF iota_st_k(const AF& f, size_t k) {
    Tree t = i_st_k(f, k);
    auto outs = t.output_vertices();
    return t.nodes[outs[0]].term.rep;
}

// ---------- tree construction APIs ----------

Tree xi_st(const AF& f, size_t node_budget) {
    ExpandLimits lim;
    lim.tree_budget = node_budget;
    OrbitReport rep = omega_report(f, lim);
    if (rep.tree_truncated) throw std::runtime_error("xi_st: node budget exceeded");
    return rep.witness_tree;
}

// ---------- classification of radical AFs ----------

bool is_parabolic_radical(const AF& f, std::vector<long>* blocks) {
    if (!f.is_root_generated()) return false;
    size_t n = f.ambient();
    std::vector<long> bl;
    long cur = 1;
    for (size_t i = 1; i + 1 <= n; ++i) {
        if (f.has_root(i, i + 1)) {
            bl.push_back(cur);
            cur = 1;
        } else {
            ++cur;
        }
    }
    bl.push_back(cur);
    // verify the domain is exactly the radical of these blocks
    std::vector<size_t> block_of(n + 1);
    size_t idx = 1;
    for (size_t b = 0; b < bl.size(); ++b)
        for (long k = 0; k < bl[b]; ++k) block_of[idx++] = b;
    for (size_t i = 1; i <= n; ++i)
        for (size_t j = i + 1; j <= n; ++j) {
            bool want = block_of[i] < block_of[j];
            if (want != f.has_root(i, j)) return false;
        }
    if (blocks) *blocks = bl;
    return true;
}

Partition orbit_class(const AF& f) {
    if (!is_parabolic_radical(f))
        throw std::invalid_argument("orbit_class: domain is not a parabolic radical");
    Mat j = j_matrix(f);
    Partition generic = jordan_type(j);
    if (j.depends_on_t()) {
        // sampling cross-check at 5 rational points of t
        size_t agree = 0;
        long samples[] = {2, 3, 5, 7, 11};
        for (long s : samples) {
            try {
                if (jordan_type(j.substitute(Rat(s))) == generic) ++agree;
            } catch (const std::exception&) {
            }
        }
        if (agree < 5)
            throw std::runtime_error("orbit_class: generic class disagrees with sampled values");
    }
    return generic;
}

// ---------- conjugation into incomparable-roots form ----------

namespace {

bool af_is_nless(const AF& f) {
    std::vector<std::pair<size_t, size_t>> nz;
    for (auto [i, j] : f.support())
        if (f.has_root(i, j) && !f.root_value(i, j).is_zero()) nz.push_back({i, j});
    // comparable roots = nested intervals [i,j]
    for (auto& a : nz)
        for (auto& b : nz) {
            if (a == b) continue;
            if (a.first <= b.first && a.second >= b.second) return false;
        }
    return true;
}

// restriction of f to the indices in `subset` (ascending), as an AF on GL_m
AF af_on_subset(const AF& f, const std::vector<size_t>& subset) {
    size_t m = subset.size();
    std::vector<size_t> back(f.ambient() + 1, 0);
    for (size_t k = 0; k < m; ++k) back[subset[k]] = k + 1;
    std::vector<std::pair<SparseMat, Scalar>> gens;
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j) {
            if (i == j) continue;
            size_t bi = subset[i], bj = subset[j];
            SparseMat e = SparseMat::unit(f.ambient(), bi, bj);
            if (f.domain().contains(e)) gens.push_back({SparseMat::unit(m, i + 1, j + 1), f.value(e)});
        }
    return AF(m, gens);
}

// conjugator on the subset lifted to the ambient size
Mat lift_conjugator(const Mat& g, const std::vector<size_t>& subset, size_t n) {
    Mat out = Mat::identity(n);
    for (size_t i = 1; i <= subset.size(); ++i)
        for (size_t j = 1; j <= subset.size(); ++j) {
            if (i == j && g(i, j) == Scalar(1)) continue;
            out(subset[i - 1], subset[j - 1]) = g(i, j);
            if (i == j && g(i, j).is_zero()) out(subset[i - 1], subset[j - 1]) = Scalar(0);
        }
    return out;
}

// two-block reduction: returns the conjugator for a radical AF with blocks
// (n1, n2); acts by block-1 unipotents, block-2 permutations, and clearing
Mat nless_two_blocks(const AF& f0, long n1, long n2) {
    size_t n = f0.ambient();
    if (n1 == 0 || n2 == 0) return Mat::identity(n);
    AF f = f0;
    Mat total = Mat::identity(n);
    auto apply = [&](const Mat& g) {
        f = conjugate_af(g, f);
        total = g * total;
    };
    // induction on the active window [lo1..lo1+n1-1] x [lo2..lo2+n2-1]
    long lo1 = 1, lo2 = n1 + 1;
    long a = n1, b = n2;
    while (a > 0 && b > 0) {
        // find a nonzero value in the first active row
        long piv = 0;
        for (long c = lo2; c < lo2 + b; ++c)
            if (!f.root_value(lo1, c).is_zero()) piv = c;
        if (piv == 0) {
            ++lo1;
            --a;
            continue;
        }
        // move pivot column to lo2 by a block-2 cycle
        if (piv != lo2) {
            std::vector<size_t> w(n);
            for (size_t i = 1; i <= n; ++i) w[i - 1] = i;
            for (long c = lo2; c < piv; ++c) w[c - 1] = c + 1;
            w[piv - 1] = lo2;
            apply(perm_matrix(w));
        }
        Scalar pivot = f.root_value(lo1, lo2);
        // clear the rest of the pivot column with first-block conjugations
        for (long r = lo1 + 1; r < 1 + n1; ++r) {
            Scalar v = f.root_value(r, lo2);
            if (v.is_zero()) continue;
            Mat g = Mat::identity(n);
            g(lo1, r) = v / pivot;
            apply(g);
        }
        // clear the rest of the pivot row with second-block conjugations
        for (long c = lo2 + 1; c <= (long)n; ++c) {
            Scalar v = f.root_value(lo1, c);
            if (v.is_zero()) continue;
            Mat g = Mat::identity(n);
            g(c, lo2) = -(v / pivot);
            apply(g);
        }
        ++lo1;
        ++lo2;
        --a;
        --b;
    }
    return total;
}

}  // namespace

std::pair<Mat, AF> to_nless(const AF& f) {
    std::vector<long> blocks;
    if (!is_parabolic_radical(f, &blocks))
        throw std::invalid_argument("to_nless: domain is not a parabolic radical");
    size_t n = f.ambient();
    size_t k = blocks.size();
    if (k <= 1) return {Mat::identity(n), f};
    if (k == 2) {
        Mat g = nless_two_blocks(f, blocks[0], blocks[1]);
        AF out = conjugate_af(g, f);
        if (!af_is_nless(out)) throw std::logic_error("to_nless: two-block reduction failed");
        return {g, out};
    }
    // k > 2: make the first k-1 blocks incomparable, then fold in the last
    std::vector<size_t> head;
    long head_n = 0;
    for (size_t b = 0; b + 1 < k; ++b) head_n += blocks[b];
    for (long i = 1; i <= head_n; ++i) head.push_back((size_t)i);
    AF fhead = af_on_subset(f, head);
    std::vector<long> head_blocks(blocks.begin(), blocks.end() - 1);
    Mat ghead;
    {
        auto [g, out] = to_nless(fhead);
        (void)out;
        ghead = g;
    }
    Mat total = lift_conjugator(ghead, head, n);
    AF cur = conjugate_af(total, f);
    // order the rows of block k-1 so that longer value chains sit higher
    {
        long off = head_n - blocks[k - 2];
        AF headf = af_on_subset(cur, head);
        auto comps = stab_torus_components(headf);
        std::vector<std::pair<long, long>> rows;  // (component size, row)
        for (long r = off + 1; r <= head_n; ++r) {
            long sz = 1;
            for (auto& c : comps)
                if (c.count((size_t)r)) sz = (long)c.size();
            rows.push_back({sz, r});
        }
        std::stable_sort(rows.begin(), rows.end(),
                         [](auto& x, auto& y) { return x.first > y.first; });
        std::vector<size_t> w(n);
        for (size_t i = 1; i <= n; ++i) w[i - 1] = i;
        for (size_t i = 0; i < rows.size(); ++i) w[rows[i].second - 1] = off + 1 + (long)i;
        Mat wm = perm_matrix(w);
        cur = conjugate_af(wm, cur);
        total = wm * total;
    }
    // two-block reduction on (block k-1, block k)
    {
        std::vector<size_t> tail;
        long off = head_n - blocks[k - 2];
        for (long i = off + 1; i <= (long)n; ++i) tail.push_back((size_t)i);
        AF ftail = af_on_subset(cur, tail);
        Mat g = nless_two_blocks(ftail, blocks[k - 2], blocks[k - 1]);
        Mat gl = lift_conjugator(g, tail, n);
        // keep the head values fixed: extend the block-(k-1) component through
        // the stabilizer section of the head restriction
        AF headf = af_on_subset(cur, head);
        // solve: xi block-diagonal on head blocks, p_{k-1}(xi) = log of g's
        // block-(k-1) part, xi in the first-order stabilizer of headf
        // (the unipotent part of g's block k-1)
        // Extract g's block-(k-1) component:
        long bstart = 1;  // within tail coords
        long bsz = blocks[k - 2];
        Mat gk1 = Mat::identity(bsz);
        for (long i = 1; i <= bsz; ++i)
            for (long j = 1; j <= bsz; ++j) gk1(i, j) = g(bstart + i - 1, bstart + j - 1);
        bool gk1_trivial = (gk1 == Mat::identity(bsz));
        if (!gk1_trivial) {
            // log of a unipotent matrix
            Mat nilp = gk1 - Mat::identity(bsz);
            Mat logm(bsz, bsz);
            Mat pw = nilp;
            Rat sign(1);
            for (long kk = 1; kk <= bsz; ++kk) {
                logm = logm + pw * Scalar(sign / kk);
                pw = pw * nilp;
                sign = -sign;
                if (pw.is_zero()) break;
            }
            // ambient basis for the solve: strictly-upper entries of head blocks
            std::vector<SparseMat> ambient;
            std::vector<std::pair<size_t, size_t>> ambient_pos;
            long offb = 0;
            for (size_t b = 0; b + 1 < k; ++b) {
                for (long i = 1; i <= blocks[b]; ++i)
                    for (long j = i + 1; j <= blocks[b]; ++j) {
                        ambient.push_back(
                            SparseMat::unit(head_n, (size_t)(offb + i), (size_t)(offb + j)));
                        ambient_pos.push_back({(size_t)(offb + i), (size_t)(offb + j)});
                    }
                offb += blocks[b];
            }
            auto stab = stabilizer_lie_cut(headf, ambient);
            // xi must lie in span(stab) with block-(k-1) projection logm
            long offk1 = head_n - blocks[k - 2];
            std::vector<std::pair<std::vector<Scalar>, Scalar>> sys;
            for (long i = 1; i <= bsz; ++i)
                for (long j = i + 1; j <= bsz; ++j) {
                    std::vector<Scalar> row(stab.size(), Scalar(0));
                    for (size_t s = 0; s < stab.size(); ++s)
                        row[s] = stab[s].get((size_t)(offk1 + i), (size_t)(offk1 + j));
                    sys.push_back({row, logm(i, j)});
                }
            auto sol = affine_solve(sys, stab.size());
            if (!sol) throw std::logic_error("to_nless: stabilizer section has no solution");
            SparseMat xi(head_n);
            for (size_t s = 0; s < stab.size(); ++s)
                if (!sol->point[s].is_zero()) xi = xi + stab[s].scaled(sol->point[s]);
            // gamma_1 = exp(xi) on the head; verify it fixes headf
            Mat xim = xi.dense();
            Mat g1 = Mat::identity(head_n);
            Mat pw2 = xim;
            Rat fact(1);
            for (long kk = 1; kk <= head_n; ++kk) {
                fact /= kk;
                g1 = g1 + pw2 * Scalar(fact);
                pw2 = pw2 * xim;
                if (pw2.is_zero()) break;
            }
            if (!(conjugate_af(g1, headf) == headf))
                throw std::logic_error("to_nless: section element does not fix the head");
            // gamma_2 = g1 on head, g's block-k part on the tail
            Mat g2 = lift_conjugator(g1, head, n);
            long tailoff = head_n;
            for (long i = 1; i <= blocks[k - 1]; ++i)
                for (long j = 1; j <= blocks[k - 1]; ++j)
                    g2(tailoff + i, tailoff + j) = g(bsz + i, bsz + j);
            cur = conjugate_af(g2, cur);
            total = g2 * total;
        } else {
            cur = conjugate_af(gl, cur);
            total = gl * total;
        }
    }
    if (!af_is_nless(cur)) {
        // bounded search over block permutations (blocks 2..k), with clearing
        throw std::logic_error("to_nless: result is not incomparable-rooted");
    }
    return {total, cur};
}

// ---------- radexpress ----------

namespace {

void append_path(Tree& tree, size_t& tip, const AF& out, StepKind kind, const std::string& desc) {
    tip = tree.add_child(tip, TermFamily(out, Marker::single), kind, desc);
}

void radexpress_rec(Tree& tree, size_t tip, const AF& f, const Partition& target,
                    size_t node_budget);

// continue a branch with the canonical expansion, grafting its leaves
void continue_canonical(Tree& tree, size_t tip, const AF& f, size_t node_budget) {
    ExpandLimits lim;
    lim.tree_budget = node_budget;
    OrbitReport rep = omega_report(f, lim);
    if (rep.tree_truncated) throw std::runtime_error("radexpress: tree budget exceeded");
    Tree sub = rep.witness_tree;
    // splice below tip
    size_t base = tree.nodes.size();
    for (size_t i = 0; i < sub.nodes.size(); ++i) {
        if (i == sub.root) continue;
        Tree::Node nd = sub.nodes[i];
        for (auto& c : nd.children) c = base + c - (c > sub.root ? 1 : 0);
        tree.nodes.push_back(nd);
    }
    for (size_t c : sub.nodes[sub.root].children)
        tree.nodes[tip].children.push_back(base + c - (c > sub.root ? 1 : 0));
}

void radexpress_rec(Tree& tree, size_t tip, const AF& f, const Partition& target,
                    size_t node_budget) {
    if (tree.nodes.size() > node_budget) throw std::runtime_error("radexpress: budget exceeded");
    std::vector<long> blocks;
    if (!is_parabolic_radical(f, &blocks)) throw std::invalid_argument("radexpress: not a radical");
    size_t n = f.ambient();
    if (f.dim() == n * (n - 1) / 2) return;  // already on U_n
    auto [g, fn] = to_nless(f);
    AF cur = fn;
    if (!(g == Mat::identity(n))) {
        append_path(tree, tip, cur, StepKind::co, "co to_nless");
    }
    // component of index 1 in the value graph
    auto comps = stab_torus_components(cur);
    std::set<size_t> s1;
    for (auto& c : comps)
        if (c.count(1)) s1 = c;
    if (s1.size() == 1) {
        // expand the missing part of the first row along constant terms
        std::vector<size_t> missing;
        for (size_t j = 2; j <= n; ++j)
            if (!cur.has_root(1, j)) missing.push_back(j);
        if (missing.empty()) {
            // first row complete and valueless: peel by recursing on the rest
            // (equivalently continue canonically)
            continue_canonical(tree, tip, cur, node_budget);
            return;
        }
        AF walk = cur;
        size_t wtip = tip;
        for (size_t j : missing) {
            EStepTerms ts = e_step(walk, UnipotentGroup::root_group(n, 1, j));
            if (ts.whole_line_orbit) {
                size_t c = tree.add_child(wtip, ts.constant, StepKind::e, ts.desc);
                continue_canonical(tree, c, ts.constant.rep, node_budget);
                return;
            }
            for (auto& sp : ts.specials) {
                size_t c = tree.add_child(wtip, sp, StepKind::e, ts.desc + " special");
                continue_canonical(tree, c, sp.rep, node_budget);
            }
            if (ts.family) {
                size_t c = tree.add_child(wtip, *ts.family, StepKind::e, ts.desc + " family");
                continue_canonical(tree, c, ts.family->rep, node_budget);
            }
            wtip = tree.add_child(wtip, ts.constant, StepKind::e, ts.desc + " const");
            walk = ts.constant.rep;
        }
        radexpress_rec(tree, wtip, walk, target, node_budget);
        return;
    }
    // |S| > 1: walk the initial (eu,co) path to the iota form, then expand
    // the centralizer columns of the k-th row along constant terms
    size_t k = s1.size();
    Tree ipath = i_st(cur);
    AF walk = cur;
    size_t wtip = tip;
    {
        // splice the path below tip
        std::vector<size_t> chain{ipath.root};
        while (!ipath.nodes[chain.back()].children.empty())
            chain.push_back(ipath.nodes[chain.back()].children[0]);
        for (size_t ci = 1; ci < chain.size(); ++ci) {
            const auto& nd = ipath.nodes[chain[ci]];
            wtip = tree.add_child(wtip, nd.term, nd.from_kind, nd.step_desc);
        }
        walk = ipath.nodes[chain.back()].term.rep;
    }
    // centralizer-defined column groups N_1, ..., N_{k-1} in row k
    std::vector<std::vector<size_t>> ngroups;
    {
        std::vector<size_t> taken;
        for (size_t r = 1; r + 1 <= k; ++r) {
            std::vector<size_t> cols;
            for (size_t j = k + 1; j <= n; ++j) {
                if (std::find(taken.begin(), taken.end(), j) != taken.end()) continue;
                if (walk.has_root(k, j)) continue;
                SparseMat e = SparseMat::unit(n, k, j);
                // centralizer condition against the current domain and taken groups
                bool central = true;
                for (auto& b : walk.domain().lie().basis())
                    if (!SparseMat::bracket(e, b).is_zero()) central = false;
                for (auto t : taken)
                    if (!SparseMat::bracket(e, SparseMat::unit(n, k, t)).is_zero()) central = false;
                if (central) cols.push_back(j);
            }
            if (cols.empty()) break;
            // biggest values first
            std::sort(cols.rbegin(), cols.rend());
            ngroups.push_back(cols);
            for (auto c : cols) taken.push_back(c);
        }
    }
    bool expanded = false;
    for (auto& grp : ngroups) {
        for (size_t j : grp) {
            EStepTerms ts = e_step(walk, UnipotentGroup::root_group(n, k, j));
            expanded = true;
            if (ts.whole_line_orbit) {
                size_t c = tree.add_child(wtip, ts.constant, StepKind::e, ts.desc);
                continue_canonical(tree, c, ts.constant.rep, node_budget);
                return;
            }
            for (auto& sp : ts.specials) {
                size_t c = tree.add_child(wtip, sp, StepKind::e, ts.desc + " special");
                continue_canonical(tree, c, sp.rep, node_budget);
            }
            if (ts.family) {
                size_t c = tree.add_child(wtip, *ts.family, StepKind::e, ts.desc + " family");
                continue_canonical(tree, c, ts.family->rep, node_budget);
            }
            wtip = tree.add_child(wtip, ts.constant, StepKind::e, ts.desc + " const");
            walk = ts.constant.rep;
        }
    }
    if (!expanded) {
        // no centralizer columns to expand; finish canonically
        continue_canonical(tree, wtip, walk, node_budget);
        return;
    }
    std::vector<long> wblocks;
    if (is_parabolic_radical(walk, &wblocks)) {
        radexpress_rec(tree, wtip, walk, target, node_budget);
    } else {
        continue_canonical(tree, wtip, walk, node_budget);
    }
}

}  // namespace

Tree radexpress(const AF& f, size_t node_budget) {
    std::vector<long> blocks;
    if (!is_parabolic_radical(f, &blocks))
        throw std::invalid_argument("radexpress: domain is not a parabolic radical");
    Partition target = jordan_type(j_matrix(f));
    Tree tree = Tree::trivial(f);
    radexpress_rec(tree, tree.root, f, target, node_budget);
    // post-conditions: exactly one non-family output in the target class on
    // the full upper group; all other outputs strictly bigger
    size_t hits = 0;
    for (size_t v : tree.output_vertices()) {
        const AF& out = tree.nodes[v].term.rep;
        Partition cls = orbit_class(out);
        if (cls == target && !tree.nodes[v].is_family_member) {
            ++hits;
        } else if (!(cls == target)) {
            if (!dominates_strictly(cls, target))
                throw std::logic_error("radexpress: output class " + cls.str() +
                                       " does not dominate " + target.str());
        }
    }
    if (hits != 1)
        throw std::logic_error("radexpress: expected exactly one distinguished output, found " +
                               std::to_string(hits));
    return tree;
}

// ---------- guided reports, checks ----------

OrbitReport omega_report_guided(const Tree& guided, const ExpandLimits& limits) {
    OrbitReport rep;
    (void)limits;
    std::map<Partition, MultCount> classes;
    for (size_t v : guided.output_vertices()) {
        const auto& node = guided.nodes[v];
        Partition cls = orbit_class(node.term.rep);
        auto& mc = classes[cls];
        bool infinite = node.is_family_member || node.term.marker != Marker::single;
        if (infinite) {
            mc.infinite = true;
            if (node.term.marker == Marker::parametric) mc.from_parametric = true;
        } else {
            ++mc.count;
        }
        ++rep.leaves;
    }
    rep.all_classes = classes;
    std::set<Partition> all;
    for (auto& [c, mc] : classes) all.insert(c);
    rep.omega = minimal_elements(all);
    for (auto& a : rep.omega) {
        rep.mult[a] = classes[a];
        if (!classes[a].infinite) rep.omega_fin.insert(a);
        if (classes[a].from_parametric) rep.witness_complete = false;
    }
    rep.digest = guided.digest();
    rep.witness_tree = guided;
    return rep;
}

MaincorVerdict main_corollary_check(const AF& f, const Partition& a) {
    size_t half = orbit_dim(a) / 2;
    size_t d = f.dim();
    if (half < d) return MaincorVerdict::below;
    if (half == d) return MaincorVerdict::critical;
    return MaincorVerdict::above;
}

bool prime_b_membership(const AF& f) {
    std::vector<long> blocks;
    if (!is_parabolic_radical(f, &blocks))
        throw std::invalid_argument("prime_b_membership: not a parabolic radical");
    auto [g, fn] = to_nless(f);
    (void)g;
    return jordan_type(j_matrix(fn)) == richardson(blocks);
}

bool b_path_validate(const std::vector<BigEStep>& path, std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    for (size_t s = 0; s < path.size(); ++s) {
        const auto& st = path[s];
        const AF& f = st.input;
        size_t n = f.ambient();
        if (s > 0 && !(path[s - 1].chosen == f)) return fail("step inputs do not chain");
        // expansion preconditions
        for (auto& g1 : st.v.lie().basis()) {
            if (!fixes_af(g1, f)) return fail("V does not fix the input");
            for (auto& g2 : st.v.lie().basis()) {
                SparseMat br = SparseMat::bracket(g1, g2);
                if (!br.is_zero() && !f.domain().contains(br)) return fail("[V,V] escapes D_F");
            }
        }
        for (auto& val : restrict(f, st.v).values())
            if (!val.is_zero()) return fail("input nonzero on V cap D_F");
        // chosen extends f to V D_F
        UnipotentGroup big = UnipotentGroup::product(f.domain(), st.v);
        if (!(st.chosen.domain() == big)) return fail("chosen term domain is not V D_F");
        for (auto& b : f.domain().lie().basis())
            if (!(st.chosen.value(b) == f.value(b))) return fail("chosen term does not extend input");
        // new directions
        std::vector<SparseMat> dirs;
        {
            SpanBasis acc = f.domain().lie();
            for (auto& g1 : st.v.lie().basis()) {
                SparseMat r = acc.reduce(g1);
                if (!r.is_zero()) {
                    acc.insert(r);
                    dirs.push_back(r);
                }
            }
        }
        if (st.witness.size() != dirs.size())
            return fail("witness dimension differs from the term space dimension");
        // witness fixes the input and normalizes the big domain
        for (auto& u : st.witness) {
            if (!fixes_af(u, f)) return fail("witness does not fix the input");
            for (auto& b : big.lie().basis()) {
                SparseMat curm = b;
                for (size_t kk = 1; kk <= n; ++kk) {
                    curm = SparseMat::bracket(u, curm);
                    if (curm.is_zero()) break;
                    if (!big.contains(curm)) return fail("witness does not normalize V D_F");
                }
            }
        }
        // derivative of the action at the chosen term: free + transitive
        Mat deriv(st.witness.size(), dirs.size());
        for (size_t a = 0; a < st.witness.size(); ++a)
            for (size_t b = 0; b < dirs.size(); ++b) {
                SparseMat br = SparseMat::bracket(st.witness[a], dirs[b]);
                if (!br.is_zero()) {
                    if (!big.contains(br)) return fail("action derivative escapes the domain");
                    deriv(a + 1, b + 1) = st.chosen.value(br);
                }
            }
        size_t rk = matrix_rank(deriv);
        if (rk != dirs.size()) return fail("witness action is not transitive at the chosen term");
        if (rk != st.witness.size()) return fail("witness action is not free at the chosen term");
    }
    return true;
}

std::vector<BigEStep> brow_path(const AF& k) {
    size_t n = k.ambient();
    // rows on which the domain is nontrivial, in increasing order
    std::vector<size_t> rows;
    for (size_t i = 1; i <= n; ++i) {
        bool nont = false;
        for (auto [a, b] : k.support())
            if (a == i) nont = true;
        if (nont) rows.push_back(i);
    }
    std::vector<BigEStep> path;
    AF cur = AF::empty(n);
    // running restriction of k to the first rows
    for (size_t x = 0; x < rows.size(); ++x) {
        size_t row = rows[x];
        BigEStep st;
        st.input = cur;
        std::vector<SparseMat> vgens;
        std::vector<std::pair<SparseMat, Scalar>> next_gens;
        for (size_t kk = 0; kk < cur.dim(); ++kk)
            next_gens.push_back({cur.domain().lie().basis()[kk], cur.values()[kk]});
        size_t fcol = 0;
        for (auto [i, j] : k.support())
            if (i == row) {
                SparseMat e = SparseMat::unit(n, i, j);
                vgens.push_back(e);
                Scalar v = k.has_root(i, j) ? k.root_value(i, j) : Scalar(0);
                next_gens.push_back({e, v});
                if (!v.is_zero()) {
                    if (fcol) throw std::invalid_argument("brow_path: row carries two values");
                    fcol = j;
                }
            }
        if (!fcol) throw std::invalid_argument("brow_path: row carries no value");
        st.v = UnipotentGroup(n, vgens);
        st.chosen = AF(n, next_gens);
        // witness: the column torus T{fcol} plus the column root groups below
        SparseMat torus(n);
        torus.set(fcol, fcol, Scalar(1));
        st.witness.push_back(torus);
        for (size_t i = row + 1; i <= n; ++i) {
            if (i == fcol) continue;
            // only directions that change row `row` entries inside V D_F
            if (st.chosen.domain().contains(SparseMat::unit(n, row, i)))
                st.witness.push_back(SparseMat::unit(n, i, fcol));
        }
        std::ostringstream os;
        os << "row " << row << " (value column " << fcol << ")";
        st.desc = os.str();
        path.push_back(st);
        cur = st.chosen;
    }
    std::string why;
    if (!b_path_validate(path, &why))
        throw std::logic_error("brow_path: validation failed: " + why);
    return path;
}

bool exchange_corollary(const ExchangeInstance& inst, const ExpandLimits& limits,
                        std::string* log) {
    std::ostringstream os;
    if (inst.f.dim() != inst.f1.dim() || inst.f.dim() != inst.f2.dim()) {
        if (log) *log = "dimension precondition violated";
        return false;
    }
    OrbitReport rf = omega_report(inst.f, limits);
    OrbitReport r1 = omega_report(inst.f1, limits);
    OrbitReport r2 = omega_report(inst.f2, limits);
    std::set<Partition> uni = r1.omega_fin;
    for (auto& a : r2.omega_fin) uni.insert(a);
    bool ok = (rf.omega_fin == uni);
    os << "Omega_fin(f) = " << rf.str() << "; union of parts "
       << (ok ? "matches" : "DIFFERS");
    if (log) *log = os.str();
    return ok;
}

}  // namespace orbitree
