#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dmt/merge.hpp"

namespace dmt {

/// A rooted simplicial tree with unit edge lengths and the path metric,
/// wrapping a tree-kind ambient complex with jet/ball machinery.
///
/// Metric subsets are realized as subcomplexes vertex-first: an edge
/// belongs exactly when both endpoints do.
class SimplicialTree {
public:
    SimplicialTree(int root, std::vector<std::pair<int, int>> edges)
        : amb_(AmbientComplex::tree(root, std::move(edges))) {}

    const AmbientComplex& complex() const { return amb_; }
    int root() const { return amb_.tree_root(); }
    int vertex_count() const { return amb_.vertex_count(); }
    int depth(int v) const { return amb_.tree_depth(v); }
    int distance(int u, int v) const { return amb_.tree_distance(u, v); }

    int max_depth() const {
        int d = 0;
        for (int v = 0; v < vertex_count(); ++v) d = std::max(d, depth(v));
        return d;
    }

    /// t lies strictly beyond v on the geodesic from the root.
    bool in_jet(int v, int t) const { return amb_.tree_is_proper_ancestor(v, t); }

    /// Subcomplex induced by a vertex predicate: kept vertices plus every
    /// edge with both endpoints kept.
    template <typename Pred>
    Subcomplex vertex_induced(Pred&& keep) const {
        std::vector<Cell> cells;
        for (int v = 0; v < vertex_count(); ++v) {
            if (!keep(v)) continue;
            cells.push_back({v, v});
            for (int w : amb_.tree_neighbors(v))
                if (w > v && keep(w)) cells.push_back({v, w});
        }
        std::sort(cells.begin(), cells.end());
        return subcomplex_from_sorted(amb_, std::move(cells));
    }

    /// Open metric ball: vertices with d(v,.) < radius.
    Subcomplex ball(int v, int radius) const {
        require_vertex(v);
        return vertex_induced([&](int t) { return distance(v, t) < radius; });
    }

    /// Closed metric ball: d(v,.) <= radius.
    Subcomplex closed_ball(int v, int radius) const {
        require_vertex(v);
        return vertex_induced([&](int t) { return distance(v, t) <= radius; });
    }

    /// Boundary sphere: d(v,.) == radius exactly (isolated vertices; no two
    /// vertices at the same distance from v are adjacent in a tree).
    Subcomplex sphere(int v, int radius) const {
        require_vertex(v);
        return vertex_induced([&](int t) { return distance(v, t) == radius; });
    }

    std::vector<int> sphere_vertices(int v, int radius) const {
        require_vertex(v);
        std::vector<int> out;
        for (int t = 0; t < vertex_count(); ++t)
            if (distance(v, t) == radius) out.push_back(t);
        return out;
    }

    /// Jet of v: all points whose geodesic from the root passes through v,
    /// i.e. the strict descendants of v.
    Subcomplex jet(int v) const {
        require_vertex(v);
        return vertex_induced([&](int t) { return in_jet(v, t); });
    }

    /// Open jet band: jet(v) cut to l1 < d(v,.) < l2.  Requires l2 > l1 > 0.
    Subcomplex jet_band(int v, int l1, int l2) const {
        if (!(l2 > l1 && l1 > 0))
            throw std::invalid_argument("jet_band: need l2 > l1 > 0");
        return jet_range(v, l1 + 1, l2 - 1);
    }

    /// Jet vertices with lo <= d(v,.) <= hi (closed window, lo >= 1).
    Subcomplex jet_range(int v, int lo, int hi) const {
        require_vertex(v);
        return vertex_induced([&](int t) {
            if (!in_jet(v, t)) return false;
            int d = depth(t) - depth(v); // descendants: distance along the jet
            return d >= lo && d <= hi;
        });
    }

    /// Exact diameter of a vertex set under the tree metric (double sweep).
    int set_diameter(const Subcomplex& S) const {
        std::vector<int> verts;
        for (const Cell& c : S.cells())
            if (c.x == c.y) verts.push_back(c.x);
        if (verts.size() < 2) return 0;
        auto farthest = [&](int from) {
            int best = verts.front(), bd = -1;
            std::vector<int> dist = bfs_distances(from);
            for (int v : verts)
                if (dist[static_cast<std::size_t>(v)] > bd) { bd = dist[static_cast<std::size_t>(v)]; best = v; }
            return std::pair<int, int>(best, bd);
        };
        auto [a, da] = farthest(verts.front());
        auto [b, db] = farthest(a);
        (void)b;
        (void)da;
        return db;
    }

private:
    void require_vertex(int v) const {
        if (v < 0 || v >= vertex_count())
            throw std::invalid_argument("tree: no such vertex " + std::to_string(v));
    }

    std::vector<int> bfs_distances(int from) const {
        std::vector<int> dist(static_cast<std::size_t>(vertex_count()), -1);
        std::vector<int> q{from};
        dist[static_cast<std::size_t>(from)] = 0;
        for (std::size_t h = 0; h < q.size(); ++h)
            for (int w : amb_.tree_neighbors(q[h]))
                if (dist[static_cast<std::size_t>(w)] < 0) {
                    dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(q[h])] + 1;
                    q.push_back(w);
                }
        return dist;
    }

    AmbientComplex amb_;
};

/// One covering set: the root ball or a jet band hanging from a sphere
/// vertex.  `cells` is the closed-subcomplex realization; lo/hi is the
/// vertex-distance window from the center actually used.
struct JetCoverSet {
    enum class Kind { root_ball, band };
    Kind kind = Kind::root_ball;
    int center = 0;       ///< root, or the band's sphere vertex
    int sphere_index = 0; ///< n for bands: center sits on S(root, (2n-1)r)
    int lo = 0, hi = 0;
    Subcomplex cells;
};

struct CoverProperties {
    bool covers_all_cells = false;
    int max_set_diameter = 0;
    bool diameter_ok = false;        ///< every set diameter <= 6r
    bool only_double_overlaps = false;
    bool nerve_is_tree = false;
    bool margin_ok = false;          ///< nerve unchanged under r-enlargement
    std::size_t nerve_edge_count = 0;
};

struct JetCover {
    int r = 0;
    std::vector<JetCoverSet> sets;
    std::vector<std::pair<int, int>> nerve; ///< edges between set indices
    CoverProperties props;
};

namespace detail {

/// Cover sets are vertex-induced, so two of them intersect exactly when
/// they share a vertex.
struct CoverSetVerts {
    int kind = 0;         ///< 0 ball, 1 band
    int center = 0;
    int sphere_index = 0; ///< n for bands
    std::vector<int> verts; ///< sorted
};

inline bool share_vertex(const std::vector<int>& a, const std::vector<int>& b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return true;
        if (a[i] < b[j]) ++i;
        else ++j;
    }
    return false;
}

/// Pairwise-intersection graph with sound geometric pruning: jets of
/// distinct vertices on one sphere are disjoint, and bands two or more
/// sphere levels apart live in disjoint depth ranges.
inline std::vector<std::pair<int, int>> nerve_of(const SimplicialTree& T,
                                                 const std::vector<CoverSetVerts>& sets) {
    std::vector<std::pair<int, int>> edges;
    for (std::size_t a = 0; a < sets.size(); ++a) {
        for (std::size_t b = a + 1; b < sets.size(); ++b) {
            const CoverSetVerts& A = sets[a];
            const CoverSetVerts& B = sets[b];
            if (A.kind == 1 && B.kind == 1) {
                int dn = std::abs(A.sphere_index - B.sphere_index);
                if (dn == 0 || dn >= 2) continue;
                const CoverSetVerts& up = A.sphere_index < B.sphere_index ? A : B;
                const CoverSetVerts& down = A.sphere_index < B.sphere_index ? B : A;
                if (!T.in_jet(up.center, down.center)) continue;
            } else if (A.kind + B.kind == 1) {
                const CoverSetVerts& band = A.kind == 1 ? A : B;
                if (band.sphere_index >= 2) continue;
            }
            if (share_vertex(A.verts, B.verts))
                edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
        }
    }
    return edges;
}

inline bool graph_is_tree(std::size_t n, const std::vector<std::pair<int, int>>& edges) {
    if (n == 0) return true;
    if (edges.size() != n - 1) return false;
    std::vector<int> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    for (auto [a, b] : edges) {
        int ra = find(a), rb = find(b);
        if (ra == rb) return false;
        parent[static_cast<std::size_t>(ra)] = rb;
    }
    return true;
}

inline bool no_triple_overlaps(const std::vector<CoverSetVerts>& sets,
                               const std::vector<std::pair<int, int>>& edges) {
    // a triple overlap forces a triangle in the intersection graph
    std::vector<std::vector<int>> adj(sets.size());
    for (auto [a, b] : edges) {
        adj[static_cast<std::size_t>(a)].push_back(b);
        adj[static_cast<std::size_t>(b)].push_back(a);
    }
    for (auto [a, b] : edges)
        for (int c : adj[static_cast<std::size_t>(a)]) {
            if (c == b) continue;
            bool also_b = false;
            for (int c2 : adj[static_cast<std::size_t>(b)])
                if (c2 == c) { also_b = true; break; }
            if (!also_b) continue;
            // candidate triangle a-b-c: test the actual triple intersection
            std::vector<int> ab;
            std::set_intersection(sets[static_cast<std::size_t>(a)].verts.begin(),
                                  sets[static_cast<std::size_t>(a)].verts.end(),
                                  sets[static_cast<std::size_t>(b)].verts.begin(),
                                  sets[static_cast<std::size_t>(b)].verts.end(),
                                  std::back_inserter(ab));
            if (share_vertex(ab, sets[static_cast<std::size_t>(c)].verts)) return false;
        }
    return true;
}

} // namespace detail

/// Builds the margin-r covering of a rooted tree: the ball of radius 2r at
/// the root together with the jet bands over the vertices of the spheres
/// S(root, (2n-1)r).  Sets are closed up so that straddling edges are
/// covered: the ball keeps vertices to distance 2r, a band keeps jet
/// vertices at distances [r-1, 3r] from its center.  All three covering
/// properties are verified and reported: the sets cover the tree, each has
/// diameter at most 6r, and enlarging every set by r inside its own jet
/// leaves the nerve unchanged.
inline JetCover build_jet_cover(const SimplicialTree& T, int r) {
    if (r <= 1) throw std::invalid_argument("jet cover: radius must exceed 1");
    const AmbientComplex& amb = T.complex();
    const int n_verts = T.vertex_count();
    JetCover cover;
    cover.r = r;

    // One bucketing pass: each vertex walks up a bounded stretch of its
    // ancestor chain and registers with every band window that contains it.
    // band(v at sphere n) keeps jet vertices at distances [lo, hi] from v.
    auto bucket = [&](int ball_hi, int lo, int hi) {
        std::vector<detail::CoverSetVerts> out;
        out.push_back({0, T.root(), 0, {}});
        std::vector<std::vector<int>> by_center(static_cast<std::size_t>(n_verts));
        for (int t = 0; t < n_verts; ++t) {
            const int D = T.depth(t);
            if (D <= ball_hi) out[0].verts.push_back(t);
            int a = t; // the ancestor of t at depth D - dist
            for (int dist = 0; dist <= hi && D - dist >= 0; ++dist) {
                const int da = D - dist;
                // band centers sit at depths (2n-1)r; t joins when inside the window
                if (dist >= std::max(lo, 1) && da >= r && (da + r) % (2 * r) == 0)
                    by_center[static_cast<std::size_t>(a)].push_back(t);
                if (da == 0) break;
                a = amb.tree_parent(a);
            }
        }
        // sphere order: by (n, center id)
        std::vector<std::pair<int, int>> centers; // (depth, id)
        for (int v = 0; v < n_verts; ++v)
            if (!by_center[static_cast<std::size_t>(v)].empty())
                centers.emplace_back(T.depth(v), v);
        std::sort(centers.begin(), centers.end());
        for (auto [depth, v] : centers) {
            detail::CoverSetVerts s;
            s.kind = 1;
            s.center = v;
            s.sphere_index = (depth + r) / (2 * r);
            s.verts = by_center[static_cast<std::size_t>(v)];
            std::sort(s.verts.begin(), s.verts.end());
            out.push_back(std::move(s));
        }
        std::sort(out[0].verts.begin(), out[0].verts.end());
        return out;
    };

    std::vector<detail::CoverSetVerts> plain = bucket(2 * r, r - 1, 3 * r);
    auto realize = [&](const detail::CoverSetVerts& s) {
        std::vector<char> keep(static_cast<std::size_t>(n_verts), 0);
        for (int v : s.verts) keep[static_cast<std::size_t>(v)] = 1;
        return T.vertex_induced([&](int v) { return keep[static_cast<std::size_t>(v)] != 0; });
    };
    for (const detail::CoverSetVerts& s : plain) {
        JetCoverSet set;
        set.kind = s.kind == 0 ? JetCoverSet::Kind::root_ball : JetCoverSet::Kind::band;
        set.center = s.center;
        set.sphere_index = s.sphere_index;
        set.lo = s.kind == 0 ? 0 : r - 1;
        set.hi = s.kind == 0 ? 2 * r : 3 * r;
        set.cells = realize(s);
        cover.sets.push_back(std::move(set));
    }

    // property 1: the sets cover every cell of the tree
    Subcomplex all(amb, {});
    for (const JetCoverSet& s : cover.sets) all = set_union(all, s.cells);
    cover.props.covers_all_cells = (all == Subcomplex::full(amb));

    // property 2: diameters bounded by 6r
    cover.props.diameter_ok = true;
    for (const JetCoverSet& s : cover.sets) {
        int d = T.set_diameter(s.cells);
        cover.props.max_set_diameter = std::max(cover.props.max_set_diameter, d);
        if (d > 6 * r) cover.props.diameter_ok = false;
    }

    // properties of the nerve, and margin: the jet-confined r-enlargement
    // (the ball grows to radius 3r, a band window widens to (0, 4r)) must
    // leave the nerve unchanged.  Only the cover's own members are
    // enlarged; centers whose plain band was empty never joined the cover.
    std::vector<detail::CoverSetVerts> grown = bucket(3 * r - 1, 1, 4 * r - 1);
    {
        std::vector<char> member(static_cast<std::size_t>(n_verts), 0);
        for (const detail::CoverSetVerts& s : plain)
            if (s.kind == 1) member[static_cast<std::size_t>(s.center)] = 1;
        std::vector<detail::CoverSetVerts> kept;
        for (detail::CoverSetVerts& s : grown)
            if (s.kind == 0 || member[static_cast<std::size_t>(s.center)])
                kept.push_back(std::move(s));
        grown.swap(kept);
    }
    cover.nerve = detail::nerve_of(T, plain);
    cover.props.nerve_edge_count = cover.nerve.size();
    cover.props.only_double_overlaps = detail::no_triple_overlaps(plain, cover.nerve);
    cover.props.nerve_is_tree = detail::graph_is_tree(cover.sets.size(), cover.nerve);
    cover.props.margin_ok = true;
    if (grown.size() != plain.size()) {
        cover.props.margin_ok = false; // enlargement spawned or dropped a set
    } else {
        for (std::size_t i = 0; i < plain.size(); ++i) {
            if (plain[i].center != grown[i].center ||
                !std::includes(grown[i].verts.begin(), grown[i].verts.end(),
                               plain[i].verts.begin(), plain[i].verts.end())) {
                cover.props.margin_ok = false;
                break;
            }
        }
        if (cover.props.margin_ok) {
            std::vector<std::pair<int, int>> grown_nerve = detail::nerve_of(T, grown);
            cover.props.margin_ok = (grown_nerve == cover.nerve) &&
                                    detail::no_triple_overlaps(grown, grown_nerve);
        }
    }
    return cover;
}

struct TreeMergeStep {
    int set_index = 0;
    std::size_t overlap_cells = 0;
    std::size_t accumulated_cells = 0;
    std::size_t new_patch_cells = 0;
    bool antithetic = false;  ///< antithetic route used (false: fell back)
};

struct TreeMergeResult {
    FieldResult result;
    std::vector<TreeMergeStep> steps;
    int fallback_count = 0;
};

/// Folds the covering sets along the nerve (breadth-first from the root
/// ball), merging each next set into the accumulated complex with the
/// antithetic formula.  Pairs that fail the antithetic test fall back to
/// the enlarged-intersection formula.  Step sizes record how small the
/// overlaps stay relative to the patches.
inline TreeMergeResult merge_on_tree(const FieldGenerator& gen, const SimplicialTree& T,
                                     const JetCover& cover, const GrayscaleData& g) {
    if (cover.sets.empty())
        throw std::invalid_argument("merge_on_tree: empty cover");
    // breadth-first order over the nerve, starting at the root ball
    std::vector<std::vector<int>> adj(cover.sets.size());
    for (auto [a, b] : cover.nerve) {
        adj[static_cast<std::size_t>(a)].push_back(b);
        adj[static_cast<std::size_t>(b)].push_back(a);
    }
    std::vector<char> seen(cover.sets.size(), 0);
    std::vector<int> order{0};
    seen[0] = 1;
    for (std::size_t h = 0; h < order.size(); ++h)
        for (int nb : adj[static_cast<std::size_t>(order[h])])
            if (!seen[static_cast<std::size_t>(nb)]) {
                seen[static_cast<std::size_t>(nb)] = 1;
                order.push_back(nb);
            }
    for (std::size_t i = 0; i < seen.size(); ++i) // disconnected nerve: append the rest
        if (!seen[i]) order.push_back(static_cast<int>(i));

    TreeMergeResult out;
    Subcomplex acc = cover.sets[static_cast<std::size_t>(order[0])].cells;
    VectorField field = gen.run(acc, g.restricted_to(acc)).field;
    for (std::size_t step = 1; step < order.size(); ++step) {
        const Subcomplex& W = cover.sets[static_cast<std::size_t>(order[step])].cells;
        Subcomplex K = set_union(acc, W);
        TreeMergeStep rec;
        rec.set_index = order[step];
        rec.overlap_cells = set_intersection(acc, W).size();
        rec.accumulated_cells = acc.size();
        rec.new_patch_cells = W.size();
        try {
            field = merge_antithetic(gen, K, acc, W, g);
            rec.antithetic = true;
        } catch (const AntitheticError&) {
            field = merge_intersection(gen, K, acc, W, g);
            rec.antithetic = false;
            ++out.fallback_count;
        }
        out.steps.push_back(rec);
        acc = std::move(K);
    }
    if (!(acc == Subcomplex::full(T.complex())))
        throw std::logic_error("merge_on_tree: cover does not exhaust the tree");
    out.result.field = field;
    out.result.critical = recover_critical(acc, field);
    return out;
}

/// An index vector into per-factor covering sets; -1 marks the empty
/// choice, allowed only as a suffix.
struct HypercubeIndex {
    std::vector<int> choice;

    /// Highest 1-based position holding a real set (0 when all empty).
    int d() const {
        int last = 0;
        for (std::size_t i = 0; i < choice.size(); ++i)
            if (choice[i] >= 0) last = static_cast<int>(i) + 1;
        return last;
    }
    int stratum() const { return static_cast<int>(choice.size()) - d(); }

    bool suffix_rule_ok() const {
        bool seen_empty = false;
        for (int c : choice) {
            if (c < 0) seen_empty = true;
            else if (seen_empty) return false;
        }
        return true;
    }
};

/// Product decomposition: per-factor jet covers plus the full hypercube
/// index set (choices with empty suffixes) partitioned into strata by the
/// number of trailing empties.  Stratum 0 holds the full product cells;
/// higher strata are the strip-like unions a sweep accumulates.
struct ProductCover {
    std::vector<JetCover> factors;
    std::vector<HypercubeIndex> hypercubes;
    std::vector<std::vector<int>> strata; ///< hypercube indices per s = 0..D
};

inline ProductCover product_cover(const std::vector<const SimplicialTree*>& trees, int r) {
    if (trees.empty()) throw std::invalid_argument("product_cover: no factors");
    ProductCover out;
    for (const SimplicialTree* t : trees) out.factors.push_back(build_jet_cover(*t, r));
    const int D = static_cast<int>(trees.size());
    out.strata.assign(static_cast<std::size_t>(D) + 1, {});
    for (int prefix = D; prefix >= 0; --prefix) {
        // all choices over the first `prefix` factors, empty beyond
        std::vector<int> choice(static_cast<std::size_t>(D), -1);
        std::vector<int> counter(static_cast<std::size_t>(prefix), 0);
        bool done = (prefix > 0 && out.factors[static_cast<std::size_t>(prefix - 1)].sets.empty());
        while (!done) {
            for (int i = 0; i < prefix; ++i) choice[static_cast<std::size_t>(i)] = counter[static_cast<std::size_t>(i)];
            HypercubeIndex hx{choice};
            out.strata[static_cast<std::size_t>(hx.stratum())].push_back(static_cast<int>(out.hypercubes.size()));
            out.hypercubes.push_back(std::move(hx));
            if (prefix == 0) break;
            int pos = prefix - 1;
            while (pos >= 0) {
                counter[static_cast<std::size_t>(pos)]++;
                if (counter[static_cast<std::size_t>(pos)] <
                    static_cast<int>(out.factors[static_cast<std::size_t>(pos)].sets.size()))
                    break;
                counter[static_cast<std::size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0) done = true;
        }
    }
    return out;
}

/// Membership of a product point (one vertex id per factor) in a
/// hypercube: every non-empty coordinate's covering set must contain the
/// vertex.  Intersecting a set of points with the stratum-0 hypercubes
/// covers it the same way the covering sets cover each factor.
inline bool hypercube_contains(const ProductCover& pc, const HypercubeIndex& hx,
                               const std::vector<int>& point) {
    if (point.size() != hx.choice.size())
        throw std::invalid_argument("hypercube_contains: dimension mismatch");
    for (std::size_t i = 0; i < point.size(); ++i) {
        if (hx.choice[i] < 0) continue;
        const JetCoverSet& s =
            pc.factors[i].sets[static_cast<std::size_t>(hx.choice[i])];
        if (!s.cells.contains({point[i], point[i]})) return false;
    }
    return true;
}

/// Edge-list tree file: root id on the first line, then one "u v" per line.
inline SimplicialTree load_tree(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open tree file: " + path);
    std::string line;
    int root = -1;
    std::vector<std::pair<int, int>> edges;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        if (root < 0) {
            if (!(ls >> root) || root < 0)
                throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected root id");
            continue;
        }
        int u, v;
        if (!(ls >> u)) continue; // blank line
        if (!(ls >> v))
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 'u v'");
        edges.emplace_back(u, v);
    }
    if (root < 0) throw std::runtime_error(path + ": empty tree file");
    return SimplicialTree(root, std::move(edges));
}

} // namespace dmt
