#include "orbitree/families.hpp"

#include <chrono>
#include <sstream>
#include <stdexcept>

namespace orbitree {

AF staircase(size_t ambient, const std::vector<long>& blocks, size_t skip_block) {
    long total = 0;
    for (long b : blocks) total += b;
    if ((size_t)total != ambient) throw std::invalid_argument("staircase: blocks must sum to n");
    std::vector<long> off(blocks.size() + 1, 0);
    for (size_t b = 0; b < blocks.size(); ++b) off[b + 1] = off[b] + blocks[b];
    // link positions between consecutive blocks at matching depths
    std::set<std::pair<size_t, size_t>> links;
    for (size_t b = 0; b + 1 < blocks.size(); ++b) {
        long s1 = blocks[b], s2 = blocks[b + 1];
        bool skip = (skip_block == b + 1);  // skip the first row of this block
        long cnt = std::min(s1 - (skip ? 1 : 0), s2);
        for (long i = 1; i <= cnt; ++i) {
            long src = off[b] + i + (skip ? 1 : 0);
            long dst = off[b + 1] + i;
            links.insert({(size_t)src, (size_t)dst});
        }
    }
    std::vector<size_t> block_of(ambient + 1);
    {
        size_t idx = 1;
        for (size_t b = 0; b < blocks.size(); ++b)
            for (long i = 0; i < blocks[b]; ++i) block_of[idx++] = b;
    }
    std::vector<std::pair<SparseMat, Scalar>> gens;
    for (size_t i = 1; i <= ambient; ++i)
        for (size_t j = i + 1; j <= ambient; ++j)
            if (block_of[i] < block_of[j])
                gens.push_back({SparseMat::unit(ambient, i, j),
                                Scalar(links.count({i, j}) ? 1 : 0)});
    return AF(ambient, gens);
}

SparseMat levi_section(const AF& ff, const SparseMat& x_block1) {
    std::vector<long> blocks;
    if (!is_parabolic_radical(ff, &blocks))
        throw std::invalid_argument("levi_section: base is not a parabolic radical");
    size_t n = ff.ambient();
    std::vector<long> off(blocks.size() + 1, 0);
    for (size_t b = 0; b < blocks.size(); ++b) off[b + 1] = off[b] + blocks[b];
    // unknowns: all entries of blocks 2..k
    std::vector<std::pair<size_t, size_t>> slots;
    for (size_t b = 1; b < blocks.size(); ++b)
        for (long i = 1; i <= blocks[b]; ++i)
            for (long j = 1; j <= blocks[b]; ++j)
                slots.push_back({(size_t)(off[b] + i), (size_t)(off[b] + j)});
    // the fixed part: x_block1 placed in block 1
    SparseMat fixed(n);
    for (auto& [p, v] : x_block1.entries()) {
        auto [i, j] = SparseMat::pos_of(p, x_block1.n());
        if (i > (size_t)blocks[0] || j > (size_t)blocks[0])
            throw std::invalid_argument("levi_section: head escapes the first block");
        fixed.set(i, j, v);
    }
    // conditions: ff([zeta, y]) = 0 for every radical basis element y
    std::vector<std::pair<std::vector<Scalar>, Scalar>> cons;
    for (auto& y : ff.domain().lie().basis()) {
        std::vector<Scalar> row(slots.size(), Scalar(0));
        for (size_t s = 0; s < slots.size(); ++s) {
            SparseMat e = SparseMat::unit(n, slots[s].first, slots[s].second);
            SparseMat br = SparseMat::bracket(e, y);
            if (!br.is_zero()) row[s] = ff.value(br);  // block-diagonal brackets stay in the radical
        }
        SparseMat brf = SparseMat::bracket(fixed, y);
        Scalar rhs = brf.is_zero() ? Scalar(0) : -ff.value(brf);
        cons.push_back({row, rhs});
    }
    auto sol = affine_solve(cons, slots.size());
    if (!sol) throw std::invalid_argument("levi_section: no stabilizer extension exists");
    if (!sol->kernel.empty())
        throw std::logic_error("levi_section: extension is not unique (projection not injective)");
    SparseMat zeta = fixed;
    for (size_t s = 0; s < slots.size(); ++s)
        if (!sol->point[s].is_zero()) {
            SparseMat e = SparseMat::unit(n, slots[s].first, slots[s].second);
            zeta = zeta + e.scaled(sol->point[s]);
        }
    if (!fixes_af(zeta, ff)) throw std::logic_error("levi_section: section does not fix the base");
    return zeta;
}

AF levi_section_af(const AF& ff, const AF& head) {
    std::vector<std::pair<SparseMat, Scalar>> gens;
    for (size_t k = 0; k < head.dim(); ++k)
        gens.push_back({levi_section(ff, head.domain().lie().basis()[k]), head.values()[k]});
    return AF(ff.ambient(), gens);
}

AF build_ff_nkl(size_t n, size_t k, size_t l) {
    if (n < 1 || k < 2 || l < 1 || l > k) throw std::invalid_argument("build_ff_nkl: parameters");
    std::vector<long> parts;
    for (size_t i = 0; i + 1 < n; ++i) parts.push_back((long)k);
    parts.push_back((long)l);
    Partition cls = Partition::normalize(parts);
    Partition tr = transpose(cls);
    std::vector<long> blocks(tr.parts().begin(), tr.parts().end());  // decreasing
    size_t ambient = (n - 1) * k + l;
    AF ff = staircase(ambient, blocks, l);
    // certify the class
    if (!(jordan_type(j_matrix(ff)) == cls))
        throw std::logic_error("build_ff_nkl: staircase class mismatch");
    return ff;
}

FamilySpec build_fnkl(size_t n, size_t k, size_t l) {
    FamilySpec spec;
    spec.variant = "fnkl";
    spec.n = n;
    spec.k = k;
    spec.l = l;
    spec.base = build_ff_nkl(n, k, l);
    is_parabolic_radical(spec.base, &spec.ff_blocks);
    spec.head = AF::whittaker(n);
    spec.realized = compose(levi_section_af(spec.base, spec.head), spec.base);
    return spec;
}

AF build_k_a(const Partition& a) {
    std::vector<long> blocks = transpose(a).parts();
    std::sort(blocks.begin(), blocks.end());  // increasing
    AF k = staircase(a.n(), blocks, 0);
    if (!(jordan_type(j_matrix(k)) == a)) throw std::logic_error("build_k_a: class mismatch");
    return k;
}

FamilySpec build_fak(const Partition& a, size_t k) {
    size_t n = a.n();
    FamilySpec spec;
    spec.variant = "fak";
    spec.n = n;
    spec.k = k;
    spec.l = k;
    spec.a = a;
    spec.base = build_ff_nkl(n, k, k);
    is_parabolic_radical(spec.base, &spec.ff_blocks);
    spec.head = build_k_a(a);
    spec.realized = compose(levi_section_af(spec.base, spec.head), spec.base);
    return spec;
}

FamilySpec build_embedJ(const Partition& a, size_t k) {
    size_t n = a.n();
    size_t ambient = k + n;
    FamilySpec spec;
    spec.variant = "embedJ";
    spec.n = n;
    spec.k = k;
    spec.a = a;
    AF fa = build_k_a(a);
    std::vector<size_t> map(n);
    for (size_t i = 0; i < n; ++i) map[i] = k + i + 1;
    AF ja = standard_embed(map, ambient, fa);
    spec.base = AF::j_r(ambient, k);
    spec.head = fa;
    spec.realized = compose(ja, spec.base);
    return spec;
}

std::set<Partition> a_set(const Partition& a, size_t k) {
    std::set<Partition> out;
    size_t m = a.size();
    std::vector<long> cur(m, 0);
    auto rec = [&](auto&& self, size_t i) -> void {
        if (i == m) {
            long sum = 0;
            for (long v : cur) sum += v;
            std::vector<long> parts = cur;
            parts.push_back((long)(k + a.n()) - sum);
            out.insert(Partition::normalize(parts));
            return;
        }
        for (long v = 0; v <= a.part(i); ++v) {
            cur[i] = v;
            self(self, i + 1);
        }
    };
    rec(rec, 0);
    return out;
}

Partition a_set_min(const Partition& a, size_t k) {
    auto mins = minimal_elements(a_set(a, k));
    if (mins.size() != 1)
        throw std::logic_error("a_set_min: minimum is not unique for " + a.str());
    return *mins.begin();
}

namespace {
void rep(std::vector<long>& v, long x, long times) {
    for (long i = 0; i < times; ++i) v.push_back(x);
}
void check_sum(const Partition& p, long n, const char* what) {
    if ((long)p.n() != n) throw std::logic_error(std::string(what) + ": part sum mismatch");
}
}  // namespace

std::set<Partition> thD1_closed(long n, long k, long l) {
    if (n < 2 || k < 2 || l < 2 || l > k) throw std::invalid_argument("thD1_closed: parameters");
    long N = (n - 1) * k + l;
    std::set<Partition> out;
    std::vector<long> A{k + n - 1, l - 1};
    rep(A, k - 1, n - 2);
    Partition pa = Partition::normalize(A);
    check_sum(pa, N, "thD1 A");
    out.insert(pa);
    if (n == 2) return out;
    if (l - n + 1 >= 0) {
        std::vector<long> B;
        rep(B, k + 1, n - 1);
        B.push_back(l - n + 1);
        Partition pb = Partition::normalize(B);
        check_sum(pb, N, "thD1 B");
        out.insert(pb);
    }
    if (l != k) {
        std::vector<long> AB{k + 2, l - 1};
        if (n % 2 == 1) {
            for (long i = 0; i < (n - 3) / 2; ++i) {
                AB.push_back(k + 2);
                AB.push_back(k - 2);
            }
            AB.push_back(k - 1);
        } else {
            for (long i = 0; i < n / 2 - 2; ++i) {
                AB.push_back(k + 2);
                AB.push_back(k - 2);
            }
            AB.push_back(k + 1);
            AB.push_back(k - 2);
        }
        Partition pab = Partition::normalize(AB);
        check_sum(pab, N, "thD1 AB");
        out.insert(pab);
    }
    if (k - n - l + 3 >= 0) {
        std::vector<long> ABB{k + 2, l - 1};
        rep(ABB, k + 1, n - 3);
        ABB.push_back(k - n + 2);
        Partition pabb = Partition::normalize(ABB);
        check_sum(pabb, N, "thD1 A(B)");
        out.insert(pabb);
    }
    return out;
}

std::set<Partition> thD2_closed(long n, long k) {
    if (n < 3 || k < 2) throw std::invalid_argument("thD2_closed: parameters");
    long N = (n - 1) * k + 1;
    std::set<Partition> out;
    std::vector<long> A{n + k - 1};
    rep(A, k - 1, n - 2);
    Partition pa = Partition::normalize(A);
    check_sum(pa, N, "thD2 A");
    out.insert(pa);
    if (k == 2) {
        std::vector<long> B2;
        if (n % 2 == 1) {
            rep(B2, 4, (n - 1) / 2);
            B2.push_back(1);
        } else {
            rep(B2, 4, (n - 2) / 2);
            B2.push_back(3);
        }
        Partition pb = Partition::normalize(B2);
        check_sum(pb, N, "thD2 B(k=2)");
        out.insert(pb);
        return out;
    }
    {
        std::vector<long> BAB{k + 2};
        if (n % 2 == 1) {
            for (long i = 0; i < (n - 3) / 2; ++i) {
                BAB.push_back(k + 2);
                BAB.push_back(k - 2);
            }
            BAB.push_back(k - 1);
        } else {
            for (long i = 0; i < n / 2 - 2; ++i) {
                BAB.push_back(k + 2);
                BAB.push_back(k - 2);
            }
            BAB.push_back(k + 1);
            BAB.push_back(k - 2);
        }
        Partition p = Partition::normalize(BAB);
        check_sum(p, N, "thD2 B(AB)");
        out.insert(p);
    }
    if (k - n + 2 >= 0) {
        std::vector<long> B{k + 2};
        rep(B, k + 1, n - 3);
        B.push_back(k - n + 2);
        Partition p = Partition::normalize(B);
        check_sum(p, N, "thD2 B");
        out.insert(p);
    }
    return out;
}

std::set<Partition> thD3_closed(const Partition& a, long k) {
    long n = (long)a.n();
    long m = (long)a.size();
    if (n < 2 || k < 2) throw std::invalid_argument("thD3_closed: parameters");
    long N = n * k;
    std::set<Partition> out;
    std::vector<long> A;
    for (long p : a.parts()) A.push_back(k + p - 1);
    rep(A, k - 1, n - m);
    Partition pa = Partition::normalize(A);
    check_sum(pa, N, "thD3 A");
    out.insert(pa);
    if (k - a.part(0) + 1 >= 0) {
        std::vector<long> B;
        rep(B, k + 1, n - m);
        for (long p : a.parts()) B.push_back(k - p + 1);
        Partition pb = Partition::normalize(B);
        check_sum(pb, N, "thD3 B");
        out.insert(pb);
    }
    return out;
}

std::optional<Partition> thD3_beta_closed(long k, const std::vector<std::pair<long, long>>& pairs) {
    long n = 0, m = (long)pairs.size();
    for (auto& [ai, li] : pairs) n += ai;
    for (auto& [ai, li] : pairs)
        if (li - ai + 1 < 0) return std::nullopt;
    std::vector<long> B;
    rep(B, k + 1, n - m);
    for (auto& [ai, li] : pairs) B.push_back(li - ai + 1);
    return Partition::normalize(B);
}

// ---------- compatibility checks ----------

namespace {

bool af_is_hat(const AF& f) {
    std::set<size_t> rows, cols;
    for (auto [i, j] : f.support()) {
        if (!f.has_root(i, j)) return false;
        if (f.root_value(i, j).is_zero()) continue;
        if (rows.count(i) || cols.count(j)) return false;
        rows.insert(i);
        cols.insert(j);
    }
    return true;
}

bool af_is_nless_pub(const AF& f) {
    std::vector<std::pair<size_t, size_t>> nz;
    for (auto [i, j] : f.support())
        if (f.has_root(i, j) && !f.root_value(i, j).is_zero()) nz.push_back({i, j});
    for (auto& a : nz)
        for (auto& b : nz) {
            if (a == b) continue;
            if (a.first <= b.first && a.second >= b.second) return false;
        }
    return true;
}

// Set of the section image of the component torus
std::set<size_t> section_torus_set(const AF& ff, const std::set<size_t>& comp) {
    std::vector<long> blocks;
    is_parabolic_radical(ff, &blocks);
    SparseMat x((size_t)blocks[0]);
    for (size_t i : comp) x.set(i, i, Scalar(1));
    SparseMat zeta = levi_section(ff, x);
    std::set<size_t> out;
    for (auto& [p, v] : zeta.entries()) {
        auto [i, j] = SparseMat::pos_of(p, ff.ambient());
        if (i == j && !v.is_zero()) out.insert(i);
    }
    return out;
}

}  // namespace

bool s_nN_check(const AF& k_head, const AF& ff, std::string* why) {
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    std::vector<long> blocks;
    if (!is_parabolic_radical(ff, &blocks)) return fail("base domain is not a parabolic radical");
    for (size_t b = 0; b + 1 < blocks.size(); ++b)
        if (blocks[b] < blocks[b + 1]) return fail("base blocks are not decreasing");
    if (!af_is_nless_pub(ff)) return fail("base has comparable roots");
    if (!(jordan_type(j_matrix(ff)) == richardson(blocks)))
        return fail("base matrix is not in the Richardson orbit");
    if (!k_head.is_root_generated()) return fail("head domain is not root-generated");
    if (!af_is_hat(k_head)) return fail("head values share a row or column");
    if (!af_is_nless_pub(k_head)) return fail("head has comparable roots");
    try {
        brow_path(k_head);
    } catch (const std::exception& e) {
        return fail(std::string("head row path: ") + e.what());
    }
    // D_K inside the section domain
    try {
        levi_section_af(ff, k_head);
    } catch (const std::exception& e) {
        return fail(std::string("head does not embed in the stabilizer section: ") + e.what());
    }
    // component size condition
    auto kcomps = stab_torus_components(k_head);
    std::set<size_t> kmins;
    for (auto& c : kcomps) {
        if (c.size() < 1) continue;
        auto s = section_torus_set(ff, c);
        kmins.insert(*s.begin());
    }
    auto fcomps = stab_torus_components(ff);
    size_t maxsz = blocks.size();
    for (auto& c : fcomps) {
        if (kmins.count(*c.begin())) continue;
        if (c.size() != maxsz) return fail("a free base component has the wrong size");
    }
    return true;
}

bool skal_check(size_t k, const std::vector<std::pair<long, long>>& pairs, const AF& k_head,
                const AF& ff, std::string* why) {
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    if (!s_nN_check(k_head, ff, why)) return false;
    size_t m = pairs.size();
    // components of the head ordered by their minimum
    auto kcomps = stab_torus_components(k_head);
    std::vector<std::set<size_t>> data(kcomps.begin(), kcomps.end());
    std::sort(data.begin(), data.end(),
              [](auto& x, auto& y) { return *x.begin() < *y.begin(); });
    if (data.size() != m) return fail("component count differs from the pair count");
    for (size_t i = 0; i < m; ++i)
        if ((long)data[i].size() != pairs[i].first) return fail("head component sizes mismatch");
    // condition 3: base component size at the section minimum
    auto fcomps = stab_torus_components(ff);
    for (size_t i = 0; i < m; ++i) {
        auto s = section_torus_set(ff, data[i]);
        size_t mn = *s.begin();
        bool found = false;
        for (auto& c : fcomps)
            if (c.count(mn)) {
                if ((long)c.size() != pairs[i].second) return fail("base component size mismatch");
                found = true;
            }
        if (!found) return fail("no base component at the section minimum");
    }
    // condition 4
    if (data[0].size() >= 2) {
        size_t second = *std::next(data[0].begin());
        for (size_t i = 0; i < m; ++i)
            if (*data[i].begin() >= second && pairs[i].second != (long)k)
                return fail("pair above the threshold must have column length k");
    }
    // condition 5: decreasing component sizes after dropping leading indices
    size_t n = k_head.ambient();
    for (size_t t = 0; t < n; ++t) {
        std::vector<size_t> keep;
        for (size_t i = t + 1; i <= n; ++i) keep.push_back(i);
        AF cut = [&] {
            std::vector<std::pair<SparseMat, Scalar>> gens;
            for (size_t i = 0; i < keep.size(); ++i)
                for (size_t j = 0; j < keep.size(); ++j) {
                    if (i == j) continue;
                    SparseMat e = SparseMat::unit(n, keep[i], keep[j]);
                    if (k_head.domain().contains(e))
                        gens.push_back({SparseMat::unit(keep.size(), i + 1, j + 1), k_head.value(e)});
                }
            return AF(keep.size(), gens);
        }();
        auto cc = stab_torus_components(cut);
        std::vector<std::pair<size_t, size_t>> ms;  // (min, size)
        for (auto& c : cc) ms.push_back({*c.begin(), c.size()});
        std::sort(ms.begin(), ms.end());
        for (size_t i = 0; i + 1 < ms.size(); ++i)
            if (ms[i].second < ms[i + 1].second) return fail("restricted component sizes increase");
    }
    // condition 6: projected root saturation in the last nontrivial block
    std::vector<long> blocks;
    is_parabolic_radical(ff, &blocks);
    std::vector<long> off(blocks.size() + 1, 0);
    for (size_t b = 0; b < blocks.size(); ++b) off[b + 1] = off[b] + blocks[b];
    // projected positions of the section image of D_K per block
    for (auto& bk : k_head.domain().lie().basis()) {
        SparseMat z = levi_section(ff, bk);
        // biggest block with a nontrivial component
        long lb = -1;
        std::pair<size_t, size_t> alpha{0, 0};
        for (auto& [p, v] : z.entries()) {
            auto [i, j] = SparseMat::pos_of(p, ff.ambient());
            for (size_t b = 0; b < blocks.size(); ++b)
                if ((long)i > off[b] && (long)i <= off[b + 1] && (long)lb < (long)b) {
                    lb = (long)b;
                    alpha = {i - off[b], j - off[b]};
                }
        }
        if (lb < 0) continue;
        long t = blocks[lb];
        // collect all projected roots of D_K in block lb
        std::set<std::pair<size_t, size_t>> proj;
        for (auto& bk2 : k_head.domain().lie().basis()) {
            SparseMat z2 = levi_section(ff, bk2);
            for (auto& [p, v] : z2.entries()) {
                auto [i, j] = SparseMat::pos_of(p, ff.ambient());
                if ((long)i > off[lb] && (long)i <= off[lb + 1])
                    proj.insert({i - off[lb], j - off[lb]});
            }
        }
        // (a) every extension beta > alpha sharing an endpoint must be present
        for (long i = 1; i <= t; ++i)
            for (long j = i + 1; j <= t; ++j) {
                std::pair<size_t, size_t> beta{(size_t)i, (size_t)j};
                bool ext = (beta.first == alpha.first && beta.second > alpha.second) ||
                           (beta.second == alpha.second && beta.first < alpha.first);
                if (ext && !proj.count(beta)) return fail("missing extension root in projection");
            }
        // (b) at least half of the proper subroots sharing an endpoint
        long want = 0, have = 0;
        for (long i = 1; i <= t; ++i)
            for (long j = i + 1; j <= t; ++j) {
                std::pair<size_t, size_t> beta{(size_t)i, (size_t)j};
                bool sub = (beta.first == alpha.first && beta.second < alpha.second) ||
                           (beta.second == alpha.second && beta.first > alpha.first);
                if (sub) {
                    ++want;
                    if (proj.count(beta)) ++have;
                }
            }
        if (2 * have < want) return fail("fewer than half of the subroots are present");
    }
    return true;
}

std::vector<BigEStep> sgen_bpath(const AF& k_head, const AF& ff) {
    std::string why;
    if (!s_nN_check(k_head, ff, &why)) throw std::invalid_argument("sgen_bpath: " + why);
    std::vector<BigEStep> path = brow_path(ff);
    std::vector<BigEStep> kpath = brow_path(k_head);
    for (auto& st : kpath) {
        BigEStep amb;
        amb.input = compose(levi_section_af(ff, st.input), ff);
        std::vector<SparseMat> vgens;
        for (auto& g : st.v.lie().basis()) vgens.push_back(levi_section(ff, g));
        amb.v = UnipotentGroup(ff.ambient(), vgens);
        amb.chosen = compose(levi_section_af(ff, st.chosen), ff);
        for (auto& w : st.witness) amb.witness.push_back(levi_section(ff, w));
        amb.desc = "section " + st.desc;
        path.push_back(amb);
    }
    std::string why2;
    if (!b_path_validate(path, &why2)) throw std::logic_error("sgen_bpath: invalid path: " + why2);
    return path;
}

// ---------- theorem verification ----------

namespace {

VerifyReport run_verify(const std::string& which, const std::string& params, const AF& f,
                        const std::set<Partition>& expected, const ExpandLimits& lim) {
    VerifyReport r;
    r.which = which;
    r.params = params;
    r.expected = expected;
    auto t0 = std::chrono::steady_clock::now();
    OrbitReport rep = omega_report(f, lim);
    r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                       .count();
    r.computed = rep.omega_fin;
    r.witness_complete = rep.witness_complete;
    r.tree_digest = rep.digest;
    r.pass = (r.computed == r.expected) && rep.witness_complete;
    r.maincor_ok = true;
    for (auto& a : rep.omega_fin) {
        if (main_corollary_check(f, a) != MaincorVerdict::critical) r.maincor_ok = false;
    }
    for (auto& [a, mc] : rep.all_classes) {
        if (main_corollary_check(f, a) == MaincorVerdict::below) {
            r.maincor_ok = false;
            r.note += "below-verdict at " + a.str() + "; ";
        }
    }
    return r;
}

std::string set_str(const std::set<Partition>& s) {
    std::string out = "{";
    bool first = true;
    for (auto& p : s) {
        out += (first ? "" : ",") + p.str();
        first = false;
    }
    return out + "}";
}

}  // namespace

std::string VerifyReport::str() const {
    std::ostringstream os;
    os << which << "(" << params << "): " << (pass ? "PASS" : "FAIL") << " expected "
       << set_str(expected) << " computed " << set_str(computed)
       << (witness_complete ? "" : " [witness-incomplete]") << (maincor_ok ? "" : " [dim-check-failed]")
       << " " << (long)runtime_ms << "ms";
    if (!note.empty()) os << " note: " << note;
    return os.str();
}

VerifyReport verify_thD1(size_t n, size_t k, size_t l, const ExpandLimits& lim) {
    std::ostringstream ps;
    ps << "n=" << n << ",k=" << k << ",l=" << l;
    FamilySpec spec = build_fnkl(n, k, l);
    return run_verify("thD1", ps.str(), spec.realized, thD1_closed((long)n, (long)k, (long)l), lim);
}

VerifyReport verify_thD2(size_t n, size_t k, const ExpandLimits& lim) {
    std::ostringstream ps;
    ps << "n=" << n << ",k=" << k;
    FamilySpec spec = build_fnkl(n, k, 1);
    return run_verify("thD2", ps.str(), spec.realized, thD2_closed((long)n, (long)k), lim);
}

VerifyReport verify_thD3(const Partition& a, size_t k, const ExpandLimits& lim) {
    std::ostringstream ps;
    ps << "a=" << a.str() << ",k=" << k;
    FamilySpec spec = build_fak(a, k);
    return run_verify("thD3a", ps.str(), spec.realized, thD3_closed(a, (long)k), lim);
}

VerifyReport verify_thD3_beta(const Partition& a, size_t k, const ExpandLimits& lim) {
    std::ostringstream ps;
    ps << "a=" << a.str() << ",k=" << k;
    FamilySpec spec = build_fak(a, k);
    std::vector<std::pair<long, long>> pairs;
    for (long p : a.parts()) pairs.push_back({p, (long)k});
    auto beta = thD3_beta_closed((long)k, pairs);
    std::set<Partition> expected;
    if (beta) expected.insert(*beta);
    VerifyReport r;
    r.which = "thD3b";
    r.params = ps.str();
    r.expected = expected;
    auto t0 = std::chrono::steady_clock::now();
    OrbitReport rep = omega_report(spec.realized, lim);
    r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                       .count();
    r.computed = truncate(rep.omega_fin, (long)k + 1);
    r.witness_complete = rep.witness_complete;
    r.tree_digest = rep.digest;
    r.pass = (r.computed == r.expected) && rep.witness_complete;
    r.maincor_ok = true;
    return r;
}

VerifyReport verify_embedding(const Partition& a, size_t k, const ExpandLimits& lim) {
    std::ostringstream ps;
    ps << "a=" << a.str() << ",k=" << k;
    FamilySpec spec = build_embedJ(a, k);
    std::set<Partition> expected{a_set_min(a, k)};
    VerifyReport r;
    r.which = "embedding";
    r.params = ps.str();
    r.expected = expected;
    auto t0 = std::chrono::steady_clock::now();
    OrbitReport rep = omega_report(spec.realized, lim);
    r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                       .count();
    r.computed = rep.omega;
    r.witness_complete = rep.witness_complete;
    r.tree_digest = rep.digest;
    bool omega_ok = (r.computed == expected);
    // multiplicity finiteness must match the max-part criterion
    bool want_finite = a.max_part() <= (long)k;
    bool got_finite = false;
    if (rep.omega.size() == 1) {
        auto it = rep.mult.find(*rep.omega.begin());
        got_finite = it != rep.mult.end() && !it->second.infinite;
    }
    // the list-form condition: the minimum equals [k, a_1, ..., a_m]
    std::vector<long> canon = a.parts();
    canon.push_back((long)k);
    bool cond_c = (*expected.begin() == Partition::normalize(canon));
    if (cond_c != want_finite) {
        std::ostringstream os;
        os << "condition-c/d discrepancy: list-form " << (cond_c ? "holds" : "fails")
           << " but max-part criterion " << (want_finite ? "holds" : "fails")
           << "; tree multiplicity is " << (got_finite ? "finite" : "infinite") << "; ";
        r.note += os.str();
    }
    r.pass = omega_ok && (got_finite == want_finite) && rep.witness_complete;
    r.maincor_ok = true;
    for (auto& aa : rep.omega_fin)
        if (main_corollary_check(spec.realized, aa) != MaincorVerdict::critical) r.maincor_ok = false;
    return r;
}

// ---------- a2-1d chain lemma ----------

namespace {

UnipotentGroup rossa(size_t n, const SparseMat& v) {
    std::vector<SparseMat> gens;
    for (auto& [p, s] : v.entries()) {
        auto [i, j] = SparseMat::pos_of(p, n);
        gens.push_back(SparseMat::unit(n, i, j));
    }
    return UnipotentGroup::from_generators(n, gens);
}

UnipotentGroup commutator_group(size_t n, const UnipotentGroup& a, const UnipotentGroup& b) {
    std::vector<SparseMat> gens;
    for (auto& x : a.lie().basis())
        for (auto& y : b.lie().basis()) {
            SparseMat br = SparseMat::bracket(x, y);
            if (!br.is_zero()) gens.push_back(br);
        }
    return UnipotentGroup::from_generators(n, gens);
}

}  // namespace

EuChainReport eu_chain_lemma_check(const std::vector<SparseMat>& s_gens, const AF& f) {
    EuChainReport rep;
    size_t n = f.ambient();
    // hypotheses
    rep.hypotheses_ok = true;
    for (auto& v : s_gens)
        if (!is_a2_1d_element(n, v)) {
            rep.hypotheses_ok = false;
            rep.note += "a generator is not a2-1d; ";
        }
    std::map<uint32_t, size_t> owner;
    for (size_t i = 0; i < s_gens.size(); ++i)
        for (auto& [p, s] : s_gens[i].entries()) {
            if (owner.count(p)) {
                rep.hypotheses_ok = false;
                rep.note += "two generators share an entry; ";
            }
            owner[p] = i;
        }
    for (auto& [p, idx] : owner) {
        auto [i, j] = SparseMat::pos_of(p, n);
        if (i >= j) {
            rep.hypotheses_ok = false;
            rep.note += "generator below the diagonal; ";
        }
    }
    for (size_t i = 0; i < s_gens.size() && rep.hypotheses_ok; ++i)
        for (size_t j = 0; j < s_gens.size(); ++j) {
            if (i == j) continue;
            SparseMat br = SparseMat::bracket(s_gens[i], s_gens[j]);
            if (br.is_zero()) continue;
            if (!is_a2_1d_element(n, br)) {
                rep.hypotheses_ok = false;
                rep.note += "a bracket is not a2-1d; ";
                break;
            }
            UnipotentGroup lhs = rossa(n, br);
            UnipotentGroup rhs =
                commutator_group(n, rossa(n, s_gens[i]), rossa(n, s_gens[j]));
            if (!(lhs == rhs)) {
                rep.hypotheses_ok = false;
                rep.note += "bracket closure mismatch; ";
                break;
            }
            // condition (ii): the bracket is covered by commuting members of S
            SpanBasis cover(n);
            for (auto& [p, s] : br.entries()) {
                if (!owner.count(p)) {
                    rep.hypotheses_ok = false;
                    rep.note += "bracket entry not covered by S; ";
                    break;
                }
                cover.insert(s_gens[owner[p]]);
            }
            if (rep.hypotheses_ok && !cover.contains(br)) {
                rep.hypotheses_ok = false;
                rep.note += "bracket is not in the span of its covering members; ";
            }
        }
    UnipotentGroup span = UnipotentGroup::from_generators(n, s_gens);
    if (!(span == f.domain())) {
        rep.hypotheses_ok = false;
        rep.note += "D_F differs from <S>; ";
    }
    if (!rep.hypotheses_ok) return rep;

    // (I): coverage of every nontrivial entry by a member of S
    rep.coverage_ok = true;
    for (auto [i, j] : f.support())
        if (!owner.count((uint32_t)((i - 1) * n + (j - 1)))) rep.coverage_ok = false;

    // locate the first removed entry (k, l1)
    size_t l1 = 0;
    for (size_t l = 2; l <= n; ++l)
        if (f.has_root(1, l) && !f.root_value(1, l).is_zero()) l1 = l;
    if (l1 == 0) {
        rep.note += "no removable entry (first row has no pure value); ";
        return rep;
    }
    size_t kk = 0;
    for (auto [i, j] : f.support())
        if (j == l1) kk = std::max(kk, i);
    // run the first exchange of the initial path
    XiLevel lvl = xi_level(f);
    if (lvl.pre_steps.empty() || lvl.pre_steps[0].kind != StepKind::eu) {
        rep.note += "initial path does not start with an exchange; ";
        return rep;
    }
    AF fprime = lvl.pre_steps[0].output;

    // S': replace Y (the member at (k,l1)) per the statement
    size_t yidx = owner[(uint32_t)((kk - 1) * n + (l1 - 1))];
    std::vector<SparseMat> sprime;
    for (size_t i = 0; i < s_gens.size(); ++i)
        if (i != yidx) sprime.push_back(s_gens[i]);
    uint32_t p1k = (uint32_t)((1 - 1) * n + (kk - 1));
    if (owner.count(p1k)) {
        size_t vidx = owner[p1k];
        // drop the (1,k)-coordinate from V_k
        SparseMat pv(n);
        for (auto& [p, s] : s_gens[vidx].entries())
            if (p != p1k) pv.set(p / n + 1, p % n + 1, s);
        std::vector<SparseMat> tmp;
        for (auto& v : sprime)
            if (!(v == s_gens[vidx])) tmp.push_back(v);
        sprime = tmp;
        if (!pv.is_zero()) sprime.push_back(pv);
    }
    sprime.push_back(SparseMat::unit(n, 1, kk));
    UnipotentGroup span2 = UnipotentGroup::from_generators(n, sprime);
    rep.regen_ok = (span2 == fprime.domain());

    // (III): hypotheses for S'
    EuChainReport again;
    {
        // reuse the hypothesis block through a self-call with a trivial f
        AF f2 = AF::trivial(span2);
        again = eu_chain_lemma_check(sprime, f2);
    }
    rep.preserved_ok = again.hypotheses_ok;
    if (!again.note.empty()) rep.note += "S' : " + again.note;
    return rep;
}

}  // namespace orbitree
