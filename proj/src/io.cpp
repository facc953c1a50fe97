#include "orbitree/io.hpp"

#include <json.hpp>
#include <sstream>

namespace orbitree {

using nlohmann::json;

std::string af_to_json(const AF& f) {
    json j;
    j["n"] = f.ambient();
    json basis = json::array();
    json values = json::array();
    for (size_t k = 0; k < f.dim(); ++k) {
        json elem = json::array();
        for (auto& [p, v] : f.domain().lie().basis()[k].entries()) {
            auto [r, c] = SparseMat::pos_of(p, f.ambient());
            elem.push_back(json::array({r, c, v.str()}));
        }
        basis.push_back(elem);
        values.push_back(f.values()[k].str());
    }
    j["basis"] = basis;
    j["values"] = values;
    return j.dump(2);
}

AF af_from_json(const std::string& text) {
    json j = json::parse(text);
    size_t n = j.at("n").get<size_t>();
    std::vector<std::pair<SparseMat, Scalar>> gens;
    auto& basis = j.at("basis");
    auto& values = j.at("values");
    if (basis.size() != values.size()) throw std::invalid_argument("af_from_json: length mismatch");
    for (size_t k = 0; k < basis.size(); ++k) {
        SparseMat m(n);
        for (auto& trip : basis[k]) {
            size_t r = trip.at(0).get<size_t>();
            size_t c = trip.at(1).get<size_t>();
            Scalar v = trip.at(2).is_string() ? Scalar::parse(trip.at(2).get<std::string>())
                                              : Scalar(trip.at(2).get<long>());
            m.set(r, c, v);
        }
        Scalar val = values[k].is_string() ? Scalar::parse(values[k].get<std::string>())
                                           : Scalar(values[k].get<long>());
        gens.push_back({m, val});
    }
    return AF(n, gens);
}

std::string partition_to_json(const Partition& p) {
    json j = json::array();
    for (long v : p.parts()) j.push_back(v);
    return j.dump();
}

std::string mat_to_json(const Mat& m) {
    json j = json::array();
    for (size_t i = 1; i <= m.rows(); ++i) {
        json row = json::array();
        for (size_t c = 1; c <= m.cols(); ++c) row.push_back(m(i, c).str());
        j.push_back(row);
    }
    return j.dump();
}

Mat mat_from_json(const std::string& text) {
    json j = json::parse(text);
    size_t rows = j.size();
    size_t cols = rows ? j[0].size() : 0;
    Mat m(rows, cols);
    for (size_t i = 0; i < rows; ++i)
        for (size_t c = 0; c < j[i].size(); ++c) {
            auto& cell = j[i][c];
            m(i + 1, c + 1) = cell.is_string() ? Scalar::parse(cell.get<std::string>())
                                               : Scalar(cell.get<long>());
        }
    return m;
}

namespace {
json tree_node_json(const Tree& t, size_t v) {
    json j;
    j["label"] = json::parse(af_to_json(t.nodes[v].term.rep));
    j["marker"] = marker_name(t.nodes[v].term.marker);
    j["step_kind"] = t.nodes[v].from_kind == StepKind::e
                         ? "e"
                         : (t.nodes[v].from_kind == StepKind::eu ? "eu" : "co");
    j["step"] = t.nodes[v].step_desc;
    json ch = json::array();
    for (size_t c : t.nodes[v].children) ch.push_back(tree_node_json(t, c));
    j["children"] = ch;
    return j;
}
}  // namespace

std::string tree_to_json(const Tree& t) { return tree_node_json(t, t.root).dump(2); }

std::string tree_to_dot(const Tree& t) {
    std::ostringstream os;
    os << "digraph atree {\n  rankdir=TB;\n  node [shape=box, fontsize=10];\n";
    for (size_t v = 0; v < t.nodes.size(); ++v) {
        const auto& nd = t.nodes[v];
        std::string cls = "-";
        try {
            cls = orbit_class(nd.term.rep).str();
        } catch (const std::exception&) {
        }
        os << "  v" << v << " [label=\"" << cls << " / " << marker_name(nd.term.marker) << " / dim "
           << nd.term.rep.dim() << "\"];\n";
    }
    for (size_t v = 0; v < t.nodes.size(); ++v)
        for (size_t c : t.nodes[v].children) {
            const char* k = t.nodes[c].from_kind == StepKind::e
                                ? "e"
                                : (t.nodes[c].from_kind == StepKind::eu ? "eu" : "co");
            os << "  v" << v << " -> v" << c << " [label=\"" << k << "\"];\n";
        }
    os << "}\n";
    return os.str();
}

std::string report_to_json(const OrbitReport& rep) {
    json j;
    json omega = json::array();
    for (auto& a : rep.omega) omega.push_back(json::parse(partition_to_json(a)));
    j["omega"] = omega;
    json mult = json::object();
    for (auto& [a, mc] : rep.mult)
        mult[a.str()] = mc.infinite ? json("inf") : json(mc.count);
    j["mult"] = mult;
    json fin = json::array();
    for (auto& a : rep.omega_fin) fin.push_back(json::parse(partition_to_json(a)));
    j["omega_fin"] = fin;
    j["witness_complete"] = rep.witness_complete;
    std::ostringstream dg;
    dg << std::hex << rep.digest;
    j["tree_digest"] = dg.str();
    j["leaves"] = rep.leaves;
    j["nodes"] = rep.nodes;
    return j.dump(2);
}

std::string verify_report_to_json(const VerifyReport& rep) {
    json j;
    j["which"] = rep.which;
    j["params"] = rep.params;
    json exp = json::array(), comp = json::array();
    for (auto& a : rep.expected) exp.push_back(json::parse(partition_to_json(a)));
    for (auto& a : rep.computed) comp.push_back(json::parse(partition_to_json(a)));
    j["expected"] = exp;
    j["computed"] = comp;
    j["pass"] = rep.pass;
    j["witness_complete"] = rep.witness_complete;
    j["maincor_ok"] = rep.maincor_ok;
    j["runtime_ms"] = rep.runtime_ms;
    std::ostringstream dg;
    dg << std::hex << rep.tree_digest;
    j["tree_digest"] = dg.str();
    if (!rep.note.empty()) j["note"] = rep.note;
    return j.dump(2);
}

}  // namespace orbitree
