#pragma once

#include <random>
#include <vector>

#include "dmt/complex.hpp"
#include "dmt/grayscale.hpp"
#include "dmt/pls.hpp"

namespace dmtest {

/// The 1-3-4-2 path: four vertices whose naive patch merge goes wrong.
struct RampPath {
    dmt::AmbientComplex amb = dmt::AmbientComplex::path(4);
    dmt::GrayscaleData g{amb, {1.0, 3.0, 4.0, 2.0}};
    dmt::Subcomplex K = dmt::Subcomplex::full(amb);
    // left patch: vertices 1,3,4 with the edges between them
    dmt::Subcomplex U{amb, {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}}};
    // right patch: vertices 3,4,2 with the edges between them
    dmt::Subcomplex W{amb, {{2, 0}, {3, 0}, {4, 0}, {5, 0}, {6, 0}}};
};

inline dmt::GrayscaleData random_image(const dmt::AmbientComplex& amb, std::mt19937& rng,
                                       int maxval = 255) {
    std::uniform_int_distribution<int> dist(0, maxval);
    std::vector<double> v(static_cast<std::size_t>(amb.vertex_count()));
    for (double& x : v) x = static_cast<double>(dist(rng));
    return uniquify(dmt::GrayscaleData(amb, std::move(v)));
}

/// Full-height vertical strip [c0, c1] of a grid, as a subcomplex.
inline dmt::Subcomplex vstrip(const dmt::AmbientComplex& amb, int c0, int c1) {
    return dmt::rect_subcomplex(amb, {c0, 0, c1, amb.height() - 1});
}

/// Full-width horizontal strip [r0, r1] of a grid.
inline dmt::Subcomplex hstrip(const dmt::AmbientComplex& amb, int r0, int r1) {
    return dmt::rect_subcomplex(amb, {0, r0, amb.width() - 1, r1});
}

} // namespace dmtest
