#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace dmt {

/// A cell of a regular complex, stored as a coordinate pair.
///
/// Cubical complexes (2D pixel grids and 1D paths) use doubled
/// ("Khalimsky") coordinates: pixel (i,j) is the vertex (2i,2j), and a
/// coordinate is odd exactly where the cube has extent, so the dimension
/// of a cell is the number of odd coordinates.  Tree complexes reuse the
/// pair as (u,u) for the vertex u and (u,v) with u < v for the edge {u,v}.
struct Cell {
    std::int32_t x = 0;
    std::int32_t y = 0;

    friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// Dimension of a cubical cell (count of odd coordinates).
inline int cubical_dim(const Cell& c) {
    return static_cast<int>(c.x & 1) + static_cast<int>(c.y & 1);
}

inline std::string to_string(const Cell& c) {
    return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
}

} // namespace dmt
