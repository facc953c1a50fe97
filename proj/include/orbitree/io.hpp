#ifndef ORBITREE_IO_HPP
#define ORBITREE_IO_HPP

#include <string>

#include "orbitree/canonical.hpp"
#include "orbitree/families.hpp"
#include "orbitree/render.hpp"

namespace orbitree {

// AF schema: { "n": nat, "basis": [[[row,col,"scalar"],...] per element],
//              "values": ["scalar", ...] }
std::string af_to_json(const AF& f);
AF af_from_json(const std::string& text);

std::string partition_to_json(const Partition& p);
std::string mat_to_json(const Mat& m);
Mat mat_from_json(const std::string& text);

// tree as nested records {label, marker, step_kind, children}
std::string tree_to_json(const Tree& t);
// DOT with vertex labels "orbit-class / marker / dim D"
std::string tree_to_dot(const Tree& t);

std::string report_to_json(const OrbitReport& rep);
std::string verify_report_to_json(const VerifyReport& rep);

}  // namespace orbitree

#endif
