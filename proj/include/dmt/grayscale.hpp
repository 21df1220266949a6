#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "dmt/complex.hpp"

namespace dmt {

/// Real values attached to the 0-cells of an ambient complex.  May be
/// defined on a subset of the vertices (restrictions); reading an
/// undefined vertex throws, which keeps locality bugs loud.
class GrayscaleData {
public:
    GrayscaleData() = default;

    GrayscaleData(const AmbientComplex& ambient, std::vector<double> per_vertex)
        : ambient_(&ambient), values_(std::move(per_vertex)),
          defined_(values_.size(), true) {
        if (values_.size() != static_cast<std::size_t>(ambient.vertex_count()))
            throw std::invalid_argument("grayscale: one value per 0-cell required");
    }

    const AmbientComplex& ambient() const { return *ambient_; }

    double at(const Cell& vertex) const {
        return at_index(ambient_->vertex_index(vertex));
    }

    double at_index(int idx) const {
        if (idx < 0 || static_cast<std::size_t>(idx) >= values_.size() || !defined_[static_cast<std::size_t>(idx)])
            throw std::out_of_range("grayscale: value read outside the restricted domain");
        return values_[static_cast<std::size_t>(idx)];
    }

    bool defined(const Cell& vertex) const {
        int idx = ambient_->vertex_index(vertex);
        return idx >= 0 && static_cast<std::size_t>(idx) < values_.size() && defined_[static_cast<std::size_t>(idx)];
    }

    std::size_t defined_count() const {
        std::size_t n = 0;
        for (char d : defined_) n += d ? 1 : 0;
        return n;
    }

    /// Restriction to the 0-cells of a subcomplex.
    GrayscaleData restricted_to(const Subcomplex& S) const {
        GrayscaleData out;
        out.ambient_ = ambient_;
        out.values_ = values_;
        out.defined_.assign(values_.size(), false);
        for (const Cell& c : S.cells())
            if (ambient_->dim(c) == 0) {
                int idx = ambient_->vertex_index(c);
                out.defined_[static_cast<std::size_t>(idx)] = defined_[static_cast<std::size_t>(idx)];
            }
        return out;
    }

    /// True when all defined values are pairwise distinct.
    bool all_distinct() const {
        std::vector<double> v;
        v.reserve(values_.size());
        for (std::size_t i = 0; i < values_.size(); ++i)
            if (defined_[i]) v.push_back(values_[i]);
        std::sort(v.begin(), v.end());
        return std::adjacent_find(v.begin(), v.end()) == v.end();
    }

private:
    friend GrayscaleData uniquify(const GrayscaleData&);

    const AmbientComplex* ambient_ = nullptr;
    std::vector<double> values_;
    std::vector<char> defined_;
};

/// Breaks ties by a linear ramp in vertex-index order: value + eps*index
/// with eps = (minimum nonzero gap) / (2 * vertex count), so the relative
/// order of originally distinct values is preserved and equal values are
/// ordered by raster position.
inline GrayscaleData uniquify(const GrayscaleData& g) {
    if (g.all_distinct()) return g;
    std::vector<double> sorted;
    std::size_t n = g.values_.size();
    sorted.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        if (g.defined_[i]) sorted.push_back(g.values_[i]);
    std::sort(sorted.begin(), sorted.end());
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        double gap = sorted[i] - sorted[i - 1];
        if (gap > 0.0 && gap < min_gap) min_gap = gap;
    }
    if (!std::isfinite(min_gap)) min_gap = 1.0; // constant input: any ramp works
    const double eps = min_gap / (2.0 * static_cast<double>(std::max<std::size_t>(n, 1)));
    GrayscaleData out = g;
    for (std::size_t i = 0; i < n; ++i)
        if (out.defined_[i]) out.values_[i] += eps * static_cast<double>(i);
    if (!out.all_distinct())
        throw std::runtime_error("uniquify: ramp failed to separate values");
    return out;
}

/// Vertex values of a cell in strictly descending order; cells are
/// compared lexicographically on these sequences.
struct GSequence {
    std::vector<double> desc;

    friend bool operator<(const GSequence& a, const GSequence& b) {
        return std::lexicographical_compare(a.desc.begin(), a.desc.end(),
                                            b.desc.begin(), b.desc.end());
    }
    friend bool operator==(const GSequence& a, const GSequence& b) { return a.desc == b.desc; }
};

inline GSequence g_sequence(const AmbientComplex& amb, const Cell& c, const GrayscaleData& g) {
    GSequence s;
    for (const Cell& v : amb.vertices_of(c)) s.desc.push_back(g.at(v));
    std::sort(s.desc.begin(), s.desc.end(), std::greater<double>());
    if (std::adjacent_find(s.desc.begin(), s.desc.end()) != s.desc.end())
        throw std::invalid_argument("g_sequence: vertex values are not unique");
    return s;
}

} // namespace dmt
