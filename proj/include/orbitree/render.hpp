#ifndef ORBITREE_RENDER_HPP
#define ORBITREE_RENDER_HPP

#include <map>
#include <string>

#include "orbitree/af.hpp"

namespace orbitree {

enum class Glyph { disc, ring, triangle };
enum class Shade { black, gray };

/* Grid rendering of an AF: one glyph per nontrivial entry of the domain,
 * classified by the minimality of the smallest stabilizer-compatible
 * one-dimensional group through the entry. */
struct PictureGrid {
    size_t n = 0;
    std::map<std::pair<size_t, size_t>, std::pair<Glyph, Shade>> cells;
    std::vector<size_t> diagonal_labels;  // defaults to 1..n

    std::string ascii() const;
    std::string svg() const;
};

PictureGrid render(const AF& f);

}  // namespace orbitree

#endif
