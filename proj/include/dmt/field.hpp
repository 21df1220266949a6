#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dmt/complex.hpp"

namespace dmt {

/// One gradient arrow: face is a codimension-1 face of coface.
struct CellPair {
    Cell face;
    Cell coface;

    friend auto operator<=>(const CellPair&, const CellPair&) = default;
};

inline std::string to_string(const CellPair& p) {
    return to_string(p.face) + " <= " + to_string(p.coface);
}

/// A discrete vector field: a canonically ordered set of face–coface
/// pairs.  The matching invariant (no cell used twice) is checked on
/// demand, not enforced by the container, because naive merges
/// deliberately produce violating sets.
class VectorField {
public:
    VectorField() = default;

    explicit VectorField(std::vector<CellPair> pairs) : pairs_(std::move(pairs)) {
        std::sort(pairs_.begin(), pairs_.end());
        pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
    }

    const std::vector<CellPair>& pairs() const& { return pairs_; }
    std::vector<CellPair> pairs() && { return std::move(pairs_); } // no dangling off temporaries
    std::size_t size() const { return pairs_.size(); }
    bool empty() const { return pairs_.empty(); }

    bool contains(const CellPair& p) const {
        return std::binary_search(pairs_.begin(), pairs_.end(), p);
    }

    /// All cells employed by the field, duplicates kept (sorted).
    std::vector<Cell> support_with_multiplicity() const {
        std::vector<Cell> out;
        out.reserve(2 * pairs_.size());
        for (const CellPair& p : pairs_) {
            out.push_back(p.face);
            out.push_back(p.coface);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// First cell appearing in more than one pair, if any.
    std::optional<Cell> matching_violation() const {
        std::vector<Cell> s = support_with_multiplicity();
        auto it = std::adjacent_find(s.begin(), s.end());
        if (it == s.end()) return std::nullopt;
        return *it;
    }

    bool is_matching() const { return !matching_violation().has_value(); }

    friend bool operator==(const VectorField& a, const VectorField& b) {
        return a.pairs_ == b.pairs_;
    }

private:
    VectorField(std::vector<CellPair> pairs, int) : pairs_(std::move(pairs)) {}
    friend VectorField field_from_sorted(std::vector<CellPair>);

    std::vector<CellPair> pairs_;
};

inline VectorField field_from_sorted(std::vector<CellPair> pairs) {
    return VectorField(std::move(pairs), 0);
}

inline VectorField field_union(const VectorField& a, const VectorField& b) {
    std::vector<CellPair> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.pairs().begin(), a.pairs().end(), b.pairs().begin(), b.pairs().end(),
                   std::back_inserter(out));
    return field_from_sorted(std::move(out));
}

inline VectorField field_difference(const VectorField& a, const VectorField& b) {
    std::vector<CellPair> out;
    std::set_difference(a.pairs().begin(), a.pairs().end(), b.pairs().begin(), b.pairs().end(),
                        std::back_inserter(out));
    return field_from_sorted(std::move(out));
}

inline VectorField field_intersection(const VectorField& a, const VectorField& b) {
    std::vector<CellPair> out;
    std::set_intersection(a.pairs().begin(), a.pairs().end(), b.pairs().begin(), b.pairs().end(),
                          std::back_inserter(out));
    return field_from_sorted(std::move(out));
}

inline std::vector<CellPair> field_symmetric_difference(const VectorField& a, const VectorField& b) {
    std::vector<CellPair> out;
    std::set_symmetric_difference(a.pairs().begin(), a.pairs().end(),
                                  b.pairs().begin(), b.pairs().end(), std::back_inserter(out));
    return out;
}

/// Cells left unmatched by a vector field.
class CriticalSet {
public:
    CriticalSet() = default;

    explicit CriticalSet(std::vector<Cell> cells) : cells_(std::move(cells)) {
        std::sort(cells_.begin(), cells_.end());
        cells_.erase(std::unique(cells_.begin(), cells_.end()), cells_.end());
    }

    const std::vector<Cell>& cells() const& { return cells_; }
    std::vector<Cell> cells() && { return std::move(cells_); }
    std::size_t size() const { return cells_.size(); }

    bool contains(const Cell& c) const {
        return std::binary_search(cells_.begin(), cells_.end(), c);
    }

    friend bool operator==(const CriticalSet& a, const CriticalSet& b) {
        return a.cells_ == b.cells_;
    }

private:
    std::vector<Cell> cells_;
};

struct FieldResult {
    VectorField field;
    CriticalSet critical;

    friend bool operator==(const FieldResult& a, const FieldResult& b) {
        return a.field == b.field && a.critical == b.critical;
    }
};

/// Checks the face relation and the matching/partition discipline of a
/// field over S.  Returns an explanation for the first violation found.
inline std::optional<std::string> partition_violation(const Subcomplex& S,
                                                      const VectorField& V,
                                                      const CriticalSet& C) {
    const AmbientComplex& amb = S.ambient();
    for (const CellPair& p : V.pairs()) {
        if (!S.contains(p.face) || !S.contains(p.coface))
            return "pair outside the subcomplex: " + to_string(p);
        if (amb.dim(p.coface) != amb.dim(p.face) + 1)
            return "pair is not codimension 1: " + to_string(p);
        auto fs = amb.faces(p.coface);
        if (std::find(fs.begin(), fs.end(), p.face) == fs.end())
            return "face is not a face of coface: " + to_string(p);
    }
    if (auto dup = V.matching_violation())
        return "cell matched twice: " + to_string(*dup);
    std::vector<Cell> used = V.support_with_multiplicity();
    for (const Cell& c : C.cells()) {
        if (!S.contains(c)) return "critical cell outside the subcomplex: " + to_string(c);
        if (std::binary_search(used.begin(), used.end(), c))
            return "cell both critical and matched: " + to_string(c);
    }
    if (2 * V.size() + C.size() != S.size())
        return "partition count mismatch: 2*" + std::to_string(V.size()) + " + " +
               std::to_string(C.size()) + " != " + std::to_string(S.size());
    // every cell accounted for
    for (const Cell& c : S.cells())
        if (!C.contains(c) && !std::binary_search(used.begin(), used.end(), c))
            return "cell neither matched nor critical: " + to_string(c);
    return std::nullopt;
}

/// Cells of K not employed in V.  V must be a valid matching on K.
inline CriticalSet recover_critical(const Subcomplex& K, const VectorField& V) {
    if (auto dup = V.matching_violation())
        throw std::invalid_argument("recover_critical: field is not a matching, cell " +
                                    to_string(*dup) + " used twice");
    std::vector<Cell> used = V.support_with_multiplicity();
    for (const Cell& c : used)
        if (!K.contains(c))
            throw std::invalid_argument("recover_critical: field uses cell outside the complex " +
                                        to_string(c));
    std::vector<Cell> crit;
    std::set_difference(K.cells().begin(), K.cells().end(), used.begin(), used.end(),
                        std::back_inserter(crit));
    return CriticalSet(std::move(crit));
}

/// Plain union of two pair lists.  The matching invariant is not
/// guaranteed; the result carries a validity flag and the offending cells.
struct NaiveMergeResult {
    VectorField field;
    bool valid_matching = false;
    std::vector<Cell> doubly_matched;
};

inline NaiveMergeResult naive_merge(const VectorField& a, const VectorField& b) {
    NaiveMergeResult out;
    out.field = field_union(a, b);
    std::vector<Cell> s = out.field.support_with_multiplicity();
    for (std::size_t i = 1; i < s.size(); ++i)
        if (s[i] == s[i - 1] && (out.doubly_matched.empty() || out.doubly_matched.back() != s[i]))
            out.doubly_matched.push_back(s[i]);
    out.valid_matching = out.doubly_matched.empty();
    return out;
}

} // namespace dmt
