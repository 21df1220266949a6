#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dmt/cell.hpp"

namespace dmt {

/// The ambient regular complex that cells live in.  Three kinds are
/// supported: 2D pixel grids and 1D paths (cubical, doubled coordinates)
/// and rooted simplicial trees (vertex/edge pairs).  The universe of
/// cells is implied by the kind; subcomplexes are explicit cell sets.
class AmbientComplex {
public:
    enum class Kind { grid2d, path, tree };

    static AmbientComplex grid2d(int width, int height) {
        if (width < 1 || height < 1)
            throw std::invalid_argument("grid2d: need at least one pixel");
        AmbientComplex k;
        k.kind_ = Kind::grid2d;
        k.width_ = width;
        k.height_ = height;
        return k;
    }

    static AmbientComplex path(int vertices) {
        if (vertices < 1)
            throw std::invalid_argument("path: need at least one vertex");
        AmbientComplex k;
        k.kind_ = Kind::path;
        k.width_ = vertices;
        k.height_ = 1;
        return k;
    }

    /// Rooted tree over vertex ids 0..n-1 given as an undirected edge list.
    /// Must be connected and acyclic.
    static AmbientComplex tree(int root, std::vector<std::pair<int, int>> edges) {
        AmbientComplex k;
        k.kind_ = Kind::tree;
        int n = root + 1;
        for (auto [u, v] : edges) n = std::max({n, u + 1, v + 1});
        k.adj_.assign(static_cast<std::size_t>(n), {});
        for (auto [u, v] : edges) {
            if (u < 0 || v < 0 || u == v)
                throw std::invalid_argument("tree: bad edge");
            k.adj_[static_cast<std::size_t>(u)].push_back(v);
            k.adj_[static_cast<std::size_t>(v)].push_back(u);
        }
        for (auto& a : k.adj_) {
            std::sort(a.begin(), a.end());
            if (std::adjacent_find(a.begin(), a.end()) != a.end())
                throw std::invalid_argument("tree: duplicate edge");
        }
        if (edges.size() + 1 != static_cast<std::size_t>(n))
            throw std::invalid_argument("tree: edge count does not match a tree");
        // root the tree; BFS doubles as the connectivity check
        k.root_ = root;
        k.parent_.assign(static_cast<std::size_t>(n), -1);
        k.depth_.assign(static_cast<std::size_t>(n), -1);
        std::vector<int> queue{root};
        k.depth_[static_cast<std::size_t>(root)] = 0;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            int u = queue[head];
            for (int v : k.adj_[static_cast<std::size_t>(u)]) {
                if (k.depth_[static_cast<std::size_t>(v)] >= 0) continue;
                k.depth_[static_cast<std::size_t>(v)] = k.depth_[static_cast<std::size_t>(u)] + 1;
                k.parent_[static_cast<std::size_t>(v)] = u;
                queue.push_back(v);
            }
        }
        if (queue.size() != static_cast<std::size_t>(n))
            throw std::invalid_argument("tree: not connected");
        return k;
    }

    Kind kind() const { return kind_; }
    bool cubical() const { return kind_ != Kind::tree; }

    /// Pixel dimensions (cubical kinds only).
    int width() const { return width_; }
    int height() const { return height_; }

    int vertex_count() const {
        return cubical() ? width_ * height_ : static_cast<int>(adj_.size());
    }

    bool contains(const Cell& c) const {
        if (cubical())
            return c.x >= 0 && c.x <= 2 * (width_ - 1) && c.y >= 0 && c.y <= 2 * (height_ - 1);
        if (c.x == c.y) return c.x >= 0 && c.x < vertex_count();
        return c.x >= 0 && c.x < c.y && c.y < vertex_count() && has_tree_edge(c.x, c.y);
    }

    int dim(const Cell& c) const {
        return cubical() ? cubical_dim(c) : (c.x == c.y ? 0 : 1);
    }

    /// Codimension-1 faces; always 2*dim(c) of them and always in the universe.
    std::vector<Cell> faces(const Cell& c) const {
        std::vector<Cell> out;
        if (cubical()) {
            if (c.x & 1) { out.push_back({c.x - 1, c.y}); out.push_back({c.x + 1, c.y}); }
            if (c.y & 1) { out.push_back({c.x, c.y - 1}); out.push_back({c.x, c.y + 1}); }
        } else if (c.x != c.y) {
            out.push_back({c.x, c.x});
            out.push_back({c.y, c.y});
        }
        return out;
    }

    /// Codimension-1 cofaces within the whole universe.
    std::vector<Cell> cofaces_in_universe(const Cell& c) const {
        std::vector<Cell> out;
        if (cubical()) {
            if (!(c.x & 1)) {
                if (c.x - 1 >= 0) out.push_back({c.x - 1, c.y});
                if (c.x + 1 <= 2 * (width_ - 1)) out.push_back({c.x + 1, c.y});
            }
            if (!(c.y & 1)) {
                if (c.y - 1 >= 0) out.push_back({c.x, c.y - 1});
                if (c.y + 1 <= 2 * (height_ - 1)) out.push_back({c.x, c.y + 1});
            }
            std::sort(out.begin(), out.end());
        } else if (c.x == c.y) {
            for (int v : adj_[static_cast<std::size_t>(c.x)])
                out.push_back({std::min(c.x, v), std::max(c.x, v)});
            std::sort(out.begin(), out.end());
        }
        return out;
    }

    /// Cells whose closure shares a point with the closure of c (includes c).
    void append_adjacent(const Cell& c, std::vector<Cell>& out) const {
        if (cubical()) {
            const int ox = c.x & 1, oy = c.y & 1;
            for (int dx = -2; dx <= 2; ++dx) {
                for (int dy = -2; dy <= 2; ++dy) {
                    Cell d{c.x + dx, c.y + dy};
                    if (!contains(d)) continue;
                    if (std::abs(dx) > ox + (d.x & 1)) continue;
                    if (std::abs(dy) > oy + (d.y & 1)) continue;
                    out.push_back(d);
                }
            }
            return;
        }
        out.push_back(c);
        if (c.x == c.y) {
            for (int v : adj_[static_cast<std::size_t>(c.x)])
                out.push_back({std::min(c.x, v), std::max(c.x, v)});
        } else {
            out.push_back({c.x, c.x});
            out.push_back({c.y, c.y});
            for (int end : {c.x, c.y})
                for (int v : adj_[static_cast<std::size_t>(end)])
                    out.push_back({std::min(end, v), std::max(end, v)});
        }
    }

    /// The 0-cells of the closure of c (2^dim corners for cubes).
    std::vector<Cell> vertices_of(const Cell& c) const {
        std::vector<Cell> out;
        if (cubical()) {
            const int xs[2] = {(c.x & 1) ? c.x - 1 : c.x, c.x + 1};
            const int ys[2] = {(c.y & 1) ? c.y - 1 : c.y, c.y + 1};
            const int nx = (c.x & 1) ? 2 : 1, ny = (c.y & 1) ? 2 : 1;
            for (int i = 0; i < nx; ++i)
                for (int j = 0; j < ny; ++j)
                    out.push_back({xs[i], ys[j]});
        } else if (c.x == c.y) {
            out.push_back(c);
        } else {
            out.push_back({c.x, c.x});
            out.push_back({c.y, c.y});
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    std::vector<Cell> all_cells() const {
        std::vector<Cell> out;
        if (cubical()) {
            for (int x = 0; x <= 2 * (width_ - 1); ++x)
                for (int y = 0; y <= 2 * (height_ - 1); ++y)
                    out.push_back({x, y});
            return out; // already lexicographic
        }
        for (int v = 0; v < vertex_count(); ++v) {
            out.push_back({v, v});
            for (int w : adj_[static_cast<std::size_t>(v)])
                if (w > v) out.push_back({v, w});
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Dense index of a 0-cell: raster order (row-major from top-left) for
    /// grids and paths, the vertex id for trees.
    int vertex_index(const Cell& v) const {
        if (cubical()) return (v.y / 2) * width_ + v.x / 2;
        return v.x;
    }

    Cell vertex_cell(int index) const {
        if (cubical()) return {2 * (index % width_), 2 * (index / width_)};
        return {index, index};
    }

    // --- tree accessors ---
    int tree_root() const { return root_; }
    int tree_parent(int v) const { return parent_[static_cast<std::size_t>(v)]; }
    int tree_depth(int v) const { return depth_[static_cast<std::size_t>(v)]; }
    const std::vector<int>& tree_neighbors(int v) const { return adj_[static_cast<std::size_t>(v)]; }

    /// Path metric between tree vertices (edge count).
    int tree_distance(int u, int v) const {
        int d = 0;
        int du = tree_depth(u), dv = tree_depth(v);
        while (du > dv) { u = tree_parent(u); --du; ++d; }
        while (dv > du) { v = tree_parent(v); --dv; ++d; }
        while (u != v) { u = tree_parent(u); v = tree_parent(v); d += 2; }
        return d;
    }

    /// True when a lies on the geodesic [root, d), i.e. a is a proper
    /// ancestor of d.
    bool tree_is_proper_ancestor(int a, int d) const {
        if (a == d) return false;
        int da = tree_depth(a), dd = tree_depth(d);
        while (dd > da) { d = tree_parent(d); --dd; }
        return d == a;
    }

    /// An upper bound on the number of star iterations any subcomplex needs
    /// to stabilize (neighborhoods are monotone and the universe is finite).
    int stabilization_bound() const {
        if (cubical()) return std::max(width_, height_) + 1;
        int maxdepth = 0;
        for (int v = 0; v < vertex_count(); ++v) maxdepth = std::max(maxdepth, tree_depth(v));
        return 2 * maxdepth + 1;
    }

    friend bool compatible(const AmbientComplex& a, const AmbientComplex& b) {
        if (&a == &b) return true;
        if (a.kind_ != b.kind_) return false;
        if (a.cubical()) return a.width_ == b.width_ && a.height_ == b.height_;
        return a.root_ == b.root_ && a.adj_ == b.adj_;
    }

private:
    AmbientComplex() = default;

    bool has_tree_edge(int u, int v) const {
        const auto& a = adj_[static_cast<std::size_t>(u)];
        return std::binary_search(a.begin(), a.end(), v);
    }

    Kind kind_ = Kind::grid2d;
    int width_ = 0;
    int height_ = 0;
    // tree storage
    int root_ = 0;
    std::vector<std::vector<int>> adj_;
    std::vector<int> parent_;
    std::vector<int> depth_;
};

namespace detail {

inline void sort_unique(std::vector<Cell>& cells) {
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
}

/// Close a sorted unique cell list under taking faces.  Faces of universe
/// cells are universe cells, so no membership test is needed.
inline void close_cells(const AmbientComplex& amb, std::vector<Cell>& cells) {
    std::vector<Cell> frontier = cells;
    while (!frontier.empty()) {
        std::vector<Cell> added;
        for (const Cell& c : frontier)
            for (const Cell& f : amb.faces(c))
                if (!std::binary_search(cells.begin(), cells.end(), f))
                    added.push_back(f);
        sort_unique(added);
        if (added.empty()) break;
        std::vector<Cell> merged;
        merged.reserve(cells.size() + added.size());
        std::set_union(cells.begin(), cells.end(), added.begin(), added.end(),
                       std::back_inserter(merged));
        cells.swap(merged);
        frontier.swap(added);
    }
}

} // namespace detail

/// A closed, face-complete set of cells of an ambient complex, stored as a
/// canonically ordered list.  Values are immutable after construction.
class Subcomplex {
public:
    Subcomplex() = default;

    /// Builds the subcomplex spanned by `cells` (closure is taken).
    Subcomplex(const AmbientComplex& ambient, std::vector<Cell> cells)
        : ambient_(&ambient) {
        for (const Cell& c : cells)
            if (!ambient.contains(c))
                throw std::invalid_argument("subcomplex: cell outside the universe " + to_string(c));
        detail::sort_unique(cells);
        detail::close_cells(ambient, cells);
        cells_ = std::move(cells);
    }

    static Subcomplex full(const AmbientComplex& ambient) {
        Subcomplex s;
        s.ambient_ = &ambient;
        s.cells_ = ambient.all_cells();
        return s;
    }

    const AmbientComplex& ambient() const {
        if (!ambient_) throw std::logic_error("subcomplex: empty handle");
        return *ambient_;
    }

    const std::vector<Cell>& cells() const& { return cells_; }
    std::vector<Cell> cells() && { return std::move(cells_); }
    std::size_t size() const { return cells_.size(); }
    bool empty() const { return cells_.empty(); }

    bool contains(const Cell& c) const {
        return std::binary_search(cells_.begin(), cells_.end(), c);
    }

    bool is_closed() const {
        for (const Cell& c : cells_)
            for (const Cell& f : ambient().faces(c))
                if (!contains(f)) return false;
        return true;
    }

    friend bool operator==(const Subcomplex& a, const Subcomplex& b) {
        return a.cells_ == b.cells_;
    }

private:
    friend Subcomplex subcomplex_from_sorted(const AmbientComplex&, std::vector<Cell>);

    const AmbientComplex* ambient_ = nullptr;
    std::vector<Cell> cells_;
};

/// Trusted constructor for callers that already hold a sorted closed set.
inline Subcomplex subcomplex_from_sorted(const AmbientComplex& amb, std::vector<Cell> cells) {
    Subcomplex s;
    s.ambient_ = &amb;
    s.cells_ = std::move(cells);
    return s;
}

namespace detail {
inline void require_same_ambient(const Subcomplex& a, const Subcomplex& b, const char* op) {
    if (a.empty() || b.empty()) {
        if (!a.empty() || !b.empty()) return; // one side empty: ambient of the other wins
        return;
    }
    if (!compatible(a.ambient(), b.ambient()))
        throw std::invalid_argument(std::string(op) + ": ambient complexes differ");
}
} // namespace detail

inline Subcomplex set_union(const Subcomplex& a, const Subcomplex& b) {
    detail::require_same_ambient(a, b, "union");
    if (a.empty()) return b;
    if (b.empty()) return a;
    std::vector<Cell> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.cells().begin(), a.cells().end(), b.cells().begin(), b.cells().end(),
                   std::back_inserter(out));
    return subcomplex_from_sorted(a.ambient(), std::move(out));
}

inline Subcomplex set_intersection(const Subcomplex& a, const Subcomplex& b) {
    detail::require_same_ambient(a, b, "intersection");
    if (a.empty()) return a;
    if (b.empty()) return b;
    std::vector<Cell> out;
    std::set_intersection(a.cells().begin(), a.cells().end(), b.cells().begin(), b.cells().end(),
                          std::back_inserter(out));
    return subcomplex_from_sorted(a.ambient(), std::move(out));
}

/// Set difference as a raw cell list; differences of closed sets are
/// generally not closed, so no Subcomplex is returned.
inline std::vector<Cell> set_difference_cells(const Subcomplex& a, const Subcomplex& b) {
    detail::require_same_ambient(a, b, "difference");
    std::vector<Cell> out;
    std::set_difference(a.cells().begin(), a.cells().end(), b.cells().begin(), b.cells().end(),
                        std::back_inserter(out));
    return out;
}

/// Smallest subcomplex of K containing all cells of K adjacent to S.
inline Subcomplex star_within(const Subcomplex& S, const Subcomplex& K) {
    if (S.empty()) return S;
    std::vector<Cell> out = S.cells();
    std::vector<Cell> adj;
    for (const Cell& c : S.cells()) S.ambient().append_adjacent(c, adj);
    detail::sort_unique(adj);
    std::vector<Cell> kept;
    kept.reserve(adj.size());
    for (const Cell& c : adj)
        if (K.contains(c)) kept.push_back(c);
    std::vector<Cell> merged;
    merged.reserve(out.size() + kept.size());
    std::set_union(out.begin(), out.end(), kept.begin(), kept.end(), std::back_inserter(merged));
    detail::close_cells(S.ambient(), merged); // closure stays inside K: K is closed
    return subcomplex_from_sorted(S.ambient(), std::move(merged));
}

inline Subcomplex star(const Subcomplex& S) {
    if (S.empty()) return S;
    return star_within(S, Subcomplex::full(S.ambient()));
}

namespace detail {

/// Incremental n-neighborhood: grows one star at a time, feeding only the
/// newly added cells back in.  Adjacents of older cells are already present.
class NeighborhoodGrower {
public:
    NeighborhoodGrower(const Subcomplex& S, const Subcomplex& K)
        : amb_(&S.ambient()), K_(&K), cells_(S.cells()), frontier_(S.cells()) {}

    /// One star step; returns false once stable.
    bool grow() {
        if (frontier_.empty()) return false;
        std::vector<Cell> cand;
        for (const Cell& c : frontier_) amb_->append_adjacent(c, cand);
        sort_unique(cand);
        std::vector<Cell> added;
        for (const Cell& c : cand)
            if (K_->contains(c) && !std::binary_search(cells_.begin(), cells_.end(), c))
                added.push_back(c);
        if (added.empty()) { frontier_.clear(); return false; }
        std::vector<Cell> merged;
        merged.reserve(cells_.size() + added.size());
        std::set_union(cells_.begin(), cells_.end(), added.begin(), added.end(),
                       std::back_inserter(merged));
        // close the new cells; collect anything closure adds as frontier too
        std::size_t before = merged.size();
        close_cells(*amb_, merged);
        if (merged.size() != before) {
            std::vector<Cell> extra;
            std::set_difference(merged.begin(), merged.end(), cells_.begin(), cells_.end(),
                                std::back_inserter(extra));
            added.swap(extra);
        }
        cells_.swap(merged);
        frontier_.swap(added);
        return true;
    }

    const std::vector<Cell>& cells() const { return cells_; }
    Subcomplex take(const AmbientComplex& amb) const { return subcomplex_from_sorted(amb, cells_); }

private:
    const AmbientComplex* amb_;
    const Subcomplex* K_;
    std::vector<Cell> cells_;
    std::vector<Cell> frontier_;
};

} // namespace detail

/// n-fold iterated star of S inside K.
inline Subcomplex neighborhood_within(const Subcomplex& S, int n, const Subcomplex& K) {
    if (n < 0) throw std::invalid_argument("neighborhood: negative radius");
    if (S.empty() || n == 0) return S;
    detail::NeighborhoodGrower g(S, K);
    for (int i = 0; i < n; ++i)
        if (!g.grow()) break;
    return g.take(S.ambient());
}

inline Subcomplex neighborhood(const Subcomplex& S, int n) {
    if (S.empty() || n == 0) return S;
    return neighborhood_within(S, n, Subcomplex::full(S.ambient()));
}

/// Cells of S whose k-neighborhood inside K escapes S.
inline std::vector<Cell> k_border_within(const Subcomplex& S, int k, const Subcomplex& K) {
    if (k < 1) throw std::invalid_argument("k_border: k must be positive");
    std::vector<Cell> out;
    for (const Cell& c : S.cells()) {
        // a single cell is generally not closed; the constructor closes it
        Subcomplex seed(S.ambient(), {c});
        Subcomplex grown = neighborhood_within(seed, k, K);
        bool escapes = false;
        for (const Cell& d : grown.cells())
            if (!S.contains(d)) { escapes = true; break; }
        if (escapes) out.push_back(c);
    }
    return out;
}

inline std::vector<Cell> k_border(const Subcomplex& S, int k) {
    return k_border_within(S, k, Subcomplex::full(S.ambient()));
}

/// Outcome of the antithetic-position test (U∩W)[n] = U[n] ∩ W[n].
struct AntitheticCheck {
    bool antithetic = false;
    int failing_n = -1;     ///< smallest n where equality fails (when !antithetic)
    int certified_n = 0;    ///< equality verified for all n up to this bound
    bool stabilized = false; ///< all three towers reached fixed points: certified for every n
};

/// Checks antithetic position of U and W inside K.  Growth stabilizes on
/// finite complexes; once every tower is a fixed point the equality holds
/// for all larger n, which gives a finite certificate.  n_max < 0 means
/// "run to stabilization" (bounded by the ambient stabilization bound).
inline AntitheticCheck check_antithetic(const Subcomplex& U, const Subcomplex& W,
                                        const Subcomplex& K, int n_max = -1) {
    detail::require_same_ambient(U, W, "antithetic");
    const AmbientComplex& amb = K.ambient();
    Subcomplex inter = set_intersection(U, W);
    detail::NeighborhoodGrower gu(U, K), gw(W, K), gi(inter, K);
    int bound = n_max >= 0 ? n_max : amb.stabilization_bound();
    AntitheticCheck res;
    for (int n = 1; n <= bound; ++n) {
        bool grew_u = gu.grow();
        bool grew_w = gw.grow();
        bool grew_i = gi.grow();
        std::vector<Cell> rhs;
        std::set_intersection(gu.cells().begin(), gu.cells().end(),
                              gw.cells().begin(), gw.cells().end(), std::back_inserter(rhs));
        if (rhs != gi.cells()) {
            res.antithetic = false;
            res.failing_n = n;
            res.certified_n = n - 1;
            return res;
        }
        res.certified_n = n;
        if (!grew_u && !grew_w && !grew_i) {
            res.stabilized = true;
            break;
        }
    }
    res.antithetic = true;
    return res;
}

inline bool is_antithetic(const Subcomplex& U, const Subcomplex& W, int n_max) {
    const AmbientComplex& amb = U.empty() ? W.ambient() : U.ambient();
    return check_antithetic(U, W, Subcomplex::full(amb), n_max).antithetic;
}

namespace detail {

/// One axis-restricted star step: adds adjacent cells with the same
/// coordinate on the fixed axis, then closes.  On full pixel rectangles
/// this widens the rectangle by one pixel in the chosen direction.
inline Subcomplex axis_star(const Subcomplex& S, bool horizontal) {
    const AmbientComplex& amb = S.ambient();
    if (!amb.cubical())
        throw std::invalid_argument("directional enlargement requires a cubical complex");
    std::vector<Cell> cand;
    std::vector<Cell> buf;
    for (const Cell& c : S.cells()) {
        buf.clear();
        amb.append_adjacent(c, buf);
        for (const Cell& d : buf)
            if (horizontal ? (d.y == c.y) : (d.x == c.x)) cand.push_back(d);
    }
    sort_unique(cand);
    std::vector<Cell> merged;
    merged.reserve(S.size() + cand.size());
    std::set_union(S.cells().begin(), S.cells().end(), cand.begin(), cand.end(),
                   std::back_inserter(merged));
    close_cells(amb, merged);
    return subcomplex_from_sorted(amb, std::move(merged));
}

} // namespace detail

/// [a,b]-enlargement: a horizontal star iterations followed by b vertical
/// ones, clamped at the image boundary.  On pixel rectangles the
/// composition widens by a and heightens by b, corners included, so
/// [n,n] agrees with neighborhood(S, n).
inline Subcomplex directional_enlarge(const Subcomplex& S, int a, int b) {
    if (a < 0 || b < 0) throw std::invalid_argument("directional_enlarge: negative radius");
    Subcomplex cur = S;
    for (int i = 0; i < a && !cur.empty(); ++i) cur = detail::axis_star(cur, true);
    for (int j = 0; j < b && !cur.empty(); ++j) cur = detail::axis_star(cur, false);
    return cur;
}

/// Inclusive pixel rectangle of a 2D grid (or a pixel interval of a path).
struct PixelRect {
    int x0 = 0, y0 = 0, x1 = -1, y1 = -1;

    bool valid() const { return x0 <= x1 && y0 <= y1; }
    int width() const { return x1 - x0 + 1; }
    int height() const { return y1 - y0 + 1; }

    PixelRect intersect(const PixelRect& o) const {
        return {std::max(x0, o.x0), std::max(y0, o.y0), std::min(x1, o.x1), std::min(y1, o.y1)};
    }

    PixelRect grown(int a, int b, const AmbientComplex& amb) const {
        return {std::max(0, x0 - a), std::max(0, y0 - b),
                std::min(amb.width() - 1, x1 + a), std::min(amb.height() - 1, y1 + b)};
    }

    friend bool operator==(const PixelRect&, const PixelRect&) = default;
};

/// All cells spanned by a pixel rectangle, as a closed subcomplex.
inline Subcomplex rect_subcomplex(const AmbientComplex& amb, const PixelRect& r) {
    if (!amb.cubical()) throw std::invalid_argument("rect_subcomplex: cubical complexes only");
    if (!r.valid()) return Subcomplex(amb, {});
    std::vector<Cell> cells;
    cells.reserve(static_cast<std::size_t>((2 * r.width() - 1) * (2 * r.height() - 1)));
    for (int x = 2 * r.x0; x <= 2 * r.x1; ++x)
        for (int y = 2 * r.y0; y <= 2 * r.y1; ++y)
            cells.push_back({x, y});
    return subcomplex_from_sorted(amb, std::move(cells)); // loop order is lexicographic
}

/// Exact rectangle recognition: the bounding box, provided S fills it.
inline bool as_pixel_rect(const Subcomplex& S, PixelRect& out) {
    if (S.empty() || !S.ambient().cubical()) return false;
    int minx = S.cells().front().x, maxx = S.cells().back().x;
    int miny = S.cells().front().y, maxy = miny;
    for (const Cell& c : S.cells()) {
        miny = std::min(miny, c.y);
        maxy = std::max(maxy, c.y);
    }
    if ((minx | miny | maxx | maxy) < 0 || (minx & 1) || (miny & 1) || (maxx & 1) || (maxy & 1))
        return false;
    PixelRect r{minx / 2, miny / 2, maxx / 2, maxy / 2};
    if (S.size() != static_cast<std::size_t>((2 * r.width() - 1) * (2 * r.height() - 1)))
        return false;
    out = r;
    return true;
}

/// Codimension-1 cofaces of c that lie in S.
inline std::vector<Cell> cofaces(const Cell& c, const Subcomplex& S) {
    if (!S.contains(c))
        throw std::invalid_argument("cofaces: cell not in the subcomplex");
    std::vector<Cell> out;
    for (const Cell& d : S.ambient().cofaces_in_universe(c))
        if (S.contains(d)) out.push_back(d);
    return out;
}

} // namespace dmt
