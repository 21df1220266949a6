#pragma once

#include <atomic>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "dmt/complex.hpp"
#include "dmt/field.hpp"
#include "dmt/grayscale.hpp"

namespace dmt {

/// Lower star of a 0-cell x inside S: the cells of S whose maximum vertex
/// value is attained at x.  Always contains x; with unique values every
/// member has x as a vertex, so only the incident block is scanned.
inline std::vector<Cell> lower_star(const Cell& x, const Subcomplex& S, const GrayscaleData& g) {
    const AmbientComplex& amb = S.ambient();
    if (amb.dim(x) != 0) throw std::invalid_argument("lower_star: not a 0-cell");
    if (!S.contains(x)) throw std::invalid_argument("lower_star: cell not in the subcomplex");
    const double gx = g.at(x);
    std::vector<Cell> candidates;
    if (amb.cubical()) {
        for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy)
                candidates.push_back({x.x + dx, x.y + dy});
    } else {
        candidates.push_back(x);
        for (int w : amb.tree_neighbors(x.x))
            candidates.push_back({std::min(x.x, w), std::max(x.x, w)});
    }
    std::vector<Cell> out;
    for (const Cell& c : candidates) {
        if (!amb.contains(c) || !S.contains(c)) continue;
        bool max_at_x = true;
        for (const Cell& v : amb.vertices_of(c)) {
            if (v == x) continue;
            if (g.at(v) >= gx) { max_at_x = false; break; }
        }
        if (max_at_x) out.push_back(c);
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace detail {

/// Pairing state for the cells of one lower star (at most 9 in 2D).
class LowerStarRun {
public:
    LowerStarRun(const AmbientComplex& amb, const Cell& x,
                 const std::vector<Cell>& L, const GrayscaleData& g)
        : amb_(amb), L_(L) {
        const std::size_t n = L.size();
        gseq_.reserve(n);
        for (const Cell& c : L) gseq_.push_back(g_sequence(amb, c, g));
        state_.assign(n, State::available);
        in_one_.assign(n, 0);
        faces_in_L_.resize(n);
        cofaces_in_L_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (const Cell& f : amb.faces(L[i])) {
                int j = index_of(f);
                if (j >= 0) {
                    faces_in_L_[i].push_back(j);
                    cofaces_in_L_[static_cast<std::size_t>(j)].push_back(static_cast<int>(i));
                }
            }
        }
        x_index_ = index_of(x);
    }

    void run(std::vector<CellPair>& pairs, std::vector<Cell>& critical) {
        if (L_.size() == 1) {
            critical.push_back(L_[static_cast<std::size_t>(x_index_)]);
            return;
        }
        // the first pairing: x with its G-minimal 1-cell
        int delta = -1;
        for (std::size_t i = 0; i < L_.size(); ++i)
            if (amb_.dim(L_[i]) == 1 && (delta < 0 || less(static_cast<int>(i), delta)))
                delta = static_cast<int>(i);
        pair_cells(x_index_, delta, pairs);
        for (std::size_t i = 0; i < L_.size(); ++i)
            if (amb_.dim(L_[i]) == 1 && static_cast<int>(i) != delta)
                push_zero(static_cast<int>(i));
        push_eligible_cofaces(delta);
        // alternate: drain PQone, then release one cell from PQzero
        while (!pq_one_.empty() || !pq_zero_.empty()) {
            while (!pq_one_.empty()) {
                int alpha = pop_min(pq_one_);
                in_one_[static_cast<std::size_t>(alpha)] = false;
                int lambda = unique_available_face(alpha);
                if (lambda < 0) {
                    push_zero(alpha);
                    continue;
                }
                pair_cells(lambda, alpha, pairs);
                remove_from(pq_zero_, lambda);
                push_eligible_cofaces(alpha);
                push_eligible_cofaces(lambda);
            }
            if (!pq_zero_.empty()) {
                int gamma = pop_min(pq_zero_);
                state_[static_cast<std::size_t>(gamma)] = State::critical;
                critical.push_back(L_[static_cast<std::size_t>(gamma)]);
                push_eligible_cofaces(gamma);
            }
        }
    }

private:
    enum class State { available, paired, critical };

    int index_of(const Cell& c) const {
        auto it = std::lower_bound(L_.begin(), L_.end(), c);
        if (it == L_.end() || *it != c) return -1;
        return static_cast<int>(it - L_.begin());
    }

    bool less(int a, int b) const {
        if (gseq_[static_cast<std::size_t>(a)] == gseq_[static_cast<std::size_t>(b)])
            return L_[static_cast<std::size_t>(a)] < L_[static_cast<std::size_t>(b)];
        return gseq_[static_cast<std::size_t>(a)] < gseq_[static_cast<std::size_t>(b)];
    }

    int unpaired_face_count(int c) const {
        int n = 0;
        for (int f : faces_in_L_[static_cast<std::size_t>(c)])
            if (state_[static_cast<std::size_t>(f)] == State::available) ++n;
        return n;
    }

    int unique_available_face(int c) const {
        int found = -1;
        for (int f : faces_in_L_[static_cast<std::size_t>(c)]) {
            if (state_[static_cast<std::size_t>(f)] != State::available) continue;
            if (found >= 0) return -1; // more than one would be a queue discipline bug
            found = f;
        }
        return found;
    }

    void pair_cells(int face, int coface, std::vector<CellPair>& pairs) {
        state_[static_cast<std::size_t>(face)] = State::paired;
        state_[static_cast<std::size_t>(coface)] = State::paired;
        pairs.push_back({L_[static_cast<std::size_t>(face)], L_[static_cast<std::size_t>(coface)]});
    }

    void push_eligible_cofaces(int c) {
        for (int beta : cofaces_in_L_[static_cast<std::size_t>(c)]) {
            if (state_[static_cast<std::size_t>(beta)] != State::available) continue;
            if (in_one_[static_cast<std::size_t>(beta)]) continue;
            if (unpaired_face_count(beta) == 1) {
                pq_one_.push_back(beta);
                in_one_[static_cast<std::size_t>(beta)] = true;
            }
        }
    }

    void push_zero(int c) { pq_zero_.push_back(c); }

    int pop_min(std::vector<int>& q) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < q.size(); ++i)
            if (less(q[i], q[best])) best = i;
        int c = q[best];
        q.erase(q.begin() + static_cast<std::ptrdiff_t>(best));
        return c;
    }

    static void remove_from(std::vector<int>& q, int c) {
        auto it = std::find(q.begin(), q.end(), c);
        if (it != q.end()) q.erase(it);
    }

    const AmbientComplex& amb_;
    const std::vector<Cell>& L_;
    std::vector<GSequence> gseq_;
    std::vector<State> state_;
    std::vector<std::vector<int>> faces_in_L_;
    std::vector<std::vector<int>> cofaces_in_L_;
    std::vector<int> pq_one_;
    std::vector<int> pq_zero_;
    std::vector<char> in_one_;
    int x_index_ = -1;
};

} // namespace detail

/// Lower-star pairing over a whole subcomplex.  Each 0-cell is processed
/// independently: its lower star is either the cell alone (critical) or is
/// matched greedily in G-order through the two queues.  Deterministic for
/// a given grayscale assignment; requires unique vertex values.
inline FieldResult process_lower_stars(const Subcomplex& S, const GrayscaleData& g) {
    // precondition: pairwise distinct values on the 0-cells of S
    {
        std::vector<double> vals;
        for (const Cell& c : S.cells())
            if (S.ambient().dim(c) == 0) vals.push_back(g.at(c));
        std::sort(vals.begin(), vals.end());
        if (std::adjacent_find(vals.begin(), vals.end()) != vals.end())
            throw std::invalid_argument("process_lower_stars: duplicate vertex values, uniquify first");
    }
    std::vector<CellPair> pairs;
    std::vector<Cell> critical;
    for (const Cell& x : S.cells()) {
        if (S.ambient().dim(x) != 0) continue;
        std::vector<Cell> L = lower_star(x, S, g);
        detail::LowerStarRun run(S.ambient(), x, L, g);
        run.run(pairs, critical);
    }
    FieldResult out{VectorField(std::move(pairs)), CriticalSet(std::move(critical))};
    if (2 * out.field.size() + out.critical.size() != S.size())
        throw std::logic_error("process_lower_stars: partition invariant broken");
    return out;
}

/// A gradient-field generator whose pairing decision for a cell depends
/// only on data within the k-neighborhood of that cell.
class FieldGenerator {
public:
    virtual ~FieldGenerator() = default;
    virtual int locality() const = 0;
    virtual FieldResult run(const Subcomplex& S, const GrayscaleData& g) const = 0;
};

/// Lower-star pairing as a generator; decisions only consult the star of
/// the driving vertex, so the locality radius is 1.
class ProcessLowerStars final : public FieldGenerator {
public:
    int locality() const override { return 1; }
    FieldResult run(const Subcomplex& S, const GrayscaleData& g) const override {
        return process_lower_stars(S, g);
    }
};

/// Decorator recording the largest subcomplex any run was handed, for
/// memory-constraint accounting.  Safe under concurrent runs.
class InstrumentedGenerator final : public FieldGenerator {
public:
    explicit InstrumentedGenerator(const FieldGenerator& inner) : inner_(&inner) {}

    int locality() const override { return inner_->locality(); }

    FieldResult run(const Subcomplex& S, const GrayscaleData& g) const override {
        std::size_t n = S.size();
        std::size_t prev = peak_.load();
        while (n > prev && !peak_.compare_exchange_weak(prev, n)) {}
        runs_.fetch_add(1);
        return inner_->run(S, g);
    }

    std::size_t peak_cells() const { return peak_.load(); }
    std::size_t run_count() const { return runs_.load(); }

private:
    const FieldGenerator* inner_;
    mutable std::atomic<std::size_t> peak_{0};
    mutable std::atomic<std::size_t> runs_{0};
};

} // namespace dmt
