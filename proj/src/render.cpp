#include "orbitree/render.hpp"

#include <algorithm>
#include <sstream>

namespace orbitree {

namespace {

/* The minimal-support element of Lie(H cut) through the entry (i,j):
 * start from any stabilizer-cut element with coordinate 1 at (i,j), then
 * greedily remove support positions while a solution persists. */
std::optional<SparseMat> minimal_through(const AF& f, const AF& rgf, size_t i, size_t j) {
    const auto& basis = f.domain().lie().basis();
    size_t n = f.ambient();
    // first-order stabilizer conditions for rg(f) on elements of Lie(D_f)
    auto stab_rows = [&](std::vector<std::pair<std::vector<Scalar>, Scalar>>& cons) {
        for (auto& y : rgf.domain().lie().basis()) {
            std::vector<SparseMat> br(basis.size());
            for (size_t b = 0; b < basis.size(); ++b) br[b] = SparseMat::bracket(basis[b], y);
            std::vector<SparseMat> res(basis.size());
            for (size_t b = 0; b < basis.size(); ++b) res[b] = rgf.domain().lie().reduce(br[b]);
            std::set<uint32_t> pos;
            for (auto& r : res)
                for (auto& [p, s] : r.entries()) pos.insert(p);
            for (auto p : pos) {
                std::vector<Scalar> row(basis.size(), Scalar(0));
                for (size_t b = 0; b < basis.size(); ++b) row[b] = res[b].get_flat(p);
                cons.push_back({row, Scalar(0)});
            }
            std::vector<Scalar> vrow(basis.size(), Scalar(0));
            for (size_t b = 0; b < basis.size(); ++b) {
                SparseMat inpart = br[b] - res[b];
                if (!inpart.is_zero()) vrow[b] = rgf.value(inpart);
            }
            cons.push_back({vrow, Scalar(0)});
        }
    };
    auto coord_row = [&](size_t a, size_t b) {
        std::vector<Scalar> row(basis.size(), Scalar(0));
        for (size_t k = 0; k < basis.size(); ++k) row[k] = basis[k].get(a, b);
        return row;
    };
    auto solve_with_zeros = [&](const std::set<uint32_t>& zeros) -> std::optional<SparseMat> {
        std::vector<std::pair<std::vector<Scalar>, Scalar>> cons;
        stab_rows(cons);
        cons.push_back({coord_row(i, j), Scalar(1)});
        for (auto p : zeros) {
            auto [a, b] = SparseMat::pos_of(p, n);
            cons.push_back({coord_row(a, b), Scalar(0)});
        }
        auto sol = affine_solve(cons, basis.size());
        if (!sol) return std::nullopt;
        SparseMat v(n);
        for (size_t k = 0; k < basis.size(); ++k)
            if (!sol->point[k].is_zero()) v = v + basis[k].scaled(sol->point[k]);
        if (!fixes_af(v, rgf)) return std::nullopt;
        return v;
    };
    auto v0 = solve_with_zeros({});
    if (!v0) return std::nullopt;
    std::set<uint32_t> zeros;
    for (;;) {
        bool improved = false;
        for (auto& [p, s] : v0->entries()) {
            auto [a, b] = SparseMat::pos_of(p, n);
            if (a == i && b == j) continue;
            if (zeros.count(p)) continue;
            std::set<uint32_t> z2 = zeros;
            z2.insert(p);
            auto v1 = solve_with_zeros(z2);
            if (v1) {
                zeros = z2;
                v0 = v1;
                improved = true;
                break;
            }
        }
        if (!improved) break;
    }
    return v0;
}

}  // namespace

PictureGrid render(const AF& f) {
    PictureGrid g;
    g.n = f.ambient();
    for (size_t i = 1; i <= g.n; ++i) g.diagonal_labels.push_back(i);
    AF rgf = rg(f);
    StabCondition stab_gl{rgf, std::nullopt};
    for (auto [i, j] : f.support()) {
        auto vopt = minimal_through(f, rgf, i, j);
        Glyph glyph = Glyph::triangle;
        SparseMat vrep(f.ambient());
        if (vopt) {
            vrep = *vopt;
            if (vrep.entries().size() == 1) {
                glyph = Glyph::disc;
            } else if (is_a2_1d_element(f.ambient(), vrep) &&
                       h_minimal(UnipotentGroup(f.ambient(), {vrep}), stab_gl)) {
                glyph = Glyph::ring;
            } else {
                glyph = Glyph::triangle;
            }
        } else {
            // no stabilizer-compatible group through the entry: fall back to
            // the plain minimal-support element of the domain
            glyph = Glyph::triangle;
            SparseMat best(f.ambient());
            for (auto& b : f.domain().lie().basis())
                if (!b.get(i, j).is_zero()) {
                    best = b;
                    break;
                }
            vrep = best;
        }
        Shade shade = Shade::gray;
        if (!vrep.is_zero() && f.domain().contains(vrep) && !f.value(vrep).is_zero())
            shade = Shade::black;
        g.cells[{i, j}] = {glyph, shade};
    }
    return g;
}

std::string PictureGrid::ascii() const {
    std::ostringstream os;
    auto glyph_str = [](Glyph gl, Shade sh) -> const char* {
        switch (gl) {
            case Glyph::disc: return sh == Shade::black ? "●" : "○";
            case Glyph::ring: return sh == Shade::black ? "◎" : "◌";
            case Glyph::triangle: return sh == Shade::black ? "▲" : "△";
        }
        return "?";
    };
    for (size_t i = 1; i <= n; ++i) {
        for (size_t j = 1; j <= n; ++j) {
            if (j > 1) os << " ";
            if (i == j) {
                os << diagonal_labels[i - 1] % 10;
            } else {
                auto it = cells.find({i, j});
                os << (it == cells.end() ? "." : glyph_str(it->second.first, it->second.second));
            }
        }
        os << "\n";
    }
    return os.str();
}

std::string PictureGrid::svg() const {
    std::ostringstream os;
    const int cell = 24;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << n * cell << "\" height=\""
       << n * cell << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (size_t i = 0; i <= n; ++i) {
        os << "<line x1=\"0\" y1=\"" << i * cell << "\" x2=\"" << n * cell << "\" y2=\"" << i * cell
           << "\" stroke=\"#ccc\"/>\n";
        os << "<line x1=\"" << i * cell << "\" y1=\"0\" x2=\"" << i * cell << "\" y2=\"" << n * cell
           << "\" stroke=\"#ccc\"/>\n";
    }
    for (size_t i = 1; i <= n; ++i)
        os << "<text x=\"" << (i - 1) * cell + 8 << "\" y=\"" << (i - 1) * cell + 16
           << "\" font-size=\"10\">" << diagonal_labels[i - 1] << "</text>\n";
    for (auto& [pos, cs] : cells) {
        auto [i, j] = pos;
        double cx = (j - 1) * cell + cell / 2.0;
        double cy = (i - 1) * cell + cell / 2.0;
        std::string color = cs.second == Shade::black ? "black" : "#999";
        switch (cs.first) {
            case Glyph::disc:
                os << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"6\" fill=\"" << color
                   << "\"/>\n";
                break;
            case Glyph::ring:
                os << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"6\" fill=\"none\" stroke=\""
                   << color << "\" stroke-width=\"2\"/>\n";
                break;
            case Glyph::triangle:
                os << "<polygon points=\"" << cx << "," << cy - 6 << " " << cx - 6 << "," << cy + 6
                   << " " << cx + 6 << "," << cy + 6 << "\" fill=\"" << color << "\"/>\n";
                break;
        }
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace orbitree
