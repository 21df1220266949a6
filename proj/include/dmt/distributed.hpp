#pragma once

#include <future>
#include <stdexcept>
#include <string>
#include <vector>

#include "dmt/merge.hpp"

namespace dmt {

/// An m x l grid of disjoint rectangular pixel blocks covering an image,
/// plus their [1,1]-enlargements.  Blocks are near-equal; remainders go to
/// the leftmost columns and topmost rows.
class PatchGrid {
public:
    static PatchGrid partition(const AmbientComplex& image, int m, int l) {
        if (!image.cubical())
            throw std::invalid_argument("partition: 2D images only");
        if (m < 1 || l < 1)
            throw std::invalid_argument("partition: need at least one patch each way");
        if (m > image.width() || l > image.height())
            throw std::invalid_argument("partition: more patches than pixels");
        if ((m > 1 && image.height() < 2) || (l > 1 && image.width() < 2))
            throw std::invalid_argument("partition: patch overlaps would contain no 2-cell");
        PatchGrid g;
        g.image_ = &image;
        g.m_ = m;
        g.l_ = l;
        g.col_lo_.resize(static_cast<std::size_t>(m));
        g.col_hi_.resize(static_cast<std::size_t>(m));
        g.row_lo_.resize(static_cast<std::size_t>(l));
        g.row_hi_.resize(static_cast<std::size_t>(l));
        split(image.width(), m, g.col_lo_, g.col_hi_);
        split(image.height(), l, g.row_lo_, g.row_hi_);
        return g;
    }

    const AmbientComplex& image() const { return *image_; }
    int columns() const { return m_; }
    int rows() const { return l_; }

    /// Disjoint core block.
    PixelRect core(int i, int j) const {
        return {col_lo_[static_cast<std::size_t>(i)], row_lo_[static_cast<std::size_t>(j)],
                col_hi_[static_cast<std::size_t>(i)], row_hi_[static_cast<std::size_t>(j)]};
    }

    /// Enlarged patch: the core grown one pixel in every direction, clamped.
    PixelRect enlarged(int i, int j) const { return core(i, j).grown(1, 1, *image_); }

    Subcomplex patch(int i, int j) const { return rect_subcomplex(*image_, enlarged(i, j)); }

    /// Rows only overlap their immediate neighbors (fails for one-pixel strips).
    bool adjacent_only_row_overlaps() const {
        for (int j = 0; j + 2 < l_; ++j)
            if (enlarged(0, j).y1 >= enlarged(0, j + 2).y0) return false;
        for (int i = 0; i + 2 < m_; ++i)
            if (enlarged(i, 0).x1 >= enlarged(i + 2, 0).x0) return false;
        return true;
    }

    bool overlaps_contain_2cell() const {
        for (int j = 0; j < l_; ++j)
            for (int i = 0; i + 1 < m_; ++i) {
                PixelRect o = enlarged(i, j).intersect(enlarged(i + 1, j));
                if (o.width() < 2 || o.height() < 2) return false;
            }
        for (int j = 0; j + 1 < l_; ++j)
            for (int i = 0; i < m_; ++i) {
                PixelRect o = enlarged(i, j).intersect(enlarged(i, j + 1));
                if (o.width() < 2 || o.height() < 2) return false;
            }
        return true;
    }

private:
    static void split(int total, int parts, std::vector<int>& lo, std::vector<int>& hi) {
        int base = total / parts, extra = total % parts;
        int at = 0;
        for (int i = 0; i < parts; ++i) {
            int len = base + (i < extra ? 1 : 0);
            lo[static_cast<std::size_t>(i)] = at;
            hi[static_cast<std::size_t>(i)] = at + len - 1;
            at += len;
        }
    }

    const AmbientComplex* image_ = nullptr;
    int m_ = 0, l_ = 0;
    std::vector<int> col_lo_, col_hi_, row_lo_, row_hi_;
};

/// The per-patch fields precomputed before any sweep: the enlarged patch
/// itself, the horizontal and vertical seam overlaps, the corner overlap,
/// and the widened/tallened versions of each that the sweep corrections
/// consume.  Every entry is the generator run on exactly its named domain.
class FieldLedger {
public:
    struct Entry {
        PixelRect domain;
        VectorField field;
        bool present = false;
    };

    FieldLedger(int m, int l) : m_(m), l_(l) {
        for (auto* fam : {&patch_, &right_, &down_, &corner_, &right_wide_,
                          &corner_wide_, &down_tall_, &corner_tall_, &corner_wide_tall_})
            fam->assign(static_cast<std::size_t>(m) * static_cast<std::size_t>(l), {});
    }

    // family accessors (i horizontal 0..m-1, j vertical 0..l-1)
    Entry& patch(int i, int j) { return at(patch_, i, j); }
    Entry& right_overlap(int i, int j) { return at(right_, i, j); }
    Entry& down_overlap(int i, int j) { return at(down_, i, j); }
    Entry& corner_overlap(int i, int j) { return at(corner_, i, j); }
    Entry& right_overlap_wide(int i, int j) { return at(right_wide_, i, j); }
    Entry& corner_overlap_wide(int i, int j) { return at(corner_wide_, i, j); }
    Entry& down_overlap_tall(int i, int j) { return at(down_tall_, i, j); }
    Entry& corner_overlap_tall(int i, int j) { return at(corner_tall_, i, j); }
    Entry& corner_overlap_wide_tall(int i, int j) { return at(corner_wide_tall_, i, j); }
    const Entry& patch(int i, int j) const { return at(patch_, i, j); }
    const Entry& right_overlap(int i, int j) const { return at(right_, i, j); }
    const Entry& down_overlap(int i, int j) const { return at(down_, i, j); }
    const Entry& corner_overlap(int i, int j) const { return at(corner_, i, j); }
    const Entry& right_overlap_wide(int i, int j) const { return at(right_wide_, i, j); }
    const Entry& corner_overlap_wide(int i, int j) const { return at(corner_wide_, i, j); }
    const Entry& down_overlap_tall(int i, int j) const { return at(down_tall_, i, j); }
    const Entry& corner_overlap_tall(int i, int j) const { return at(corner_tall_, i, j); }
    const Entry& corner_overlap_wide_tall(int i, int j) const { return at(corner_wide_tall_, i, j); }

    template <typename F>
    void for_each_present(F&& f) const {
        const struct { const char* name; const std::vector<Entry>* fam; } families[] = {
            {"patch", &patch_}, {"right_overlap", &right_}, {"down_overlap", &down_},
            {"corner_overlap", &corner_}, {"right_overlap_wide", &right_wide_},
            {"corner_overlap_wide", &corner_wide_}, {"down_overlap_tall", &down_tall_},
            {"corner_overlap_tall", &corner_tall_}, {"corner_overlap_wide_tall", &corner_wide_tall_}};
        for (const auto& fm : families)
            for (int j = 0; j < l_; ++j)
                for (int i = 0; i < m_; ++i) {
                    const Entry& e = at(*fm.fam, i, j);
                    if (e.present) f(fm.name, i, j, e);
                }
    }

    std::size_t largest_domain_cells() const {
        std::size_t best = 0;
        for_each_present([&](const char*, int, int, const Entry& e) {
            std::size_t n = static_cast<std::size_t>(2 * e.domain.width() - 1) *
                            static_cast<std::size_t>(2 * e.domain.height() - 1);
            best = std::max(best, n);
        });
        return best;
    }

private:
    Entry& at(std::vector<Entry>& fam, int i, int j) {
        return fam[static_cast<std::size_t>(j) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(i)];
    }
    const Entry& at(const std::vector<Entry>& fam, int i, int j) const {
        return fam[static_cast<std::size_t>(j) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(i)];
    }

    int m_, l_;
    std::vector<Entry> patch_, right_, down_, corner_, right_wide_, corner_wide_,
        down_tall_, corner_tall_, corner_wide_tall_;
};

namespace detail {

/// Domains of the nine ledger families, all plain rectangle arithmetic.
struct LedgerDomains {
    const PatchGrid* grid;
    const AmbientComplex* amb;

    PixelRect patch(int i, int j) const { return grid->enlarged(i, j); }
    PixelRect patch_star(int i, int j) const {
        PixelRect p = patch(i, j);
        return {0, p.y0, p.x1, p.y1};
    }
    PixelRect right(int i, int j) const { return patch(i, j).intersect(patch(i + 1, j)); }
    PixelRect down(int i, int j) const { return patch(i, j).intersect(patch(i, j + 1)); }
    PixelRect down_star(int i, int j) const {
        PixelRect p = down(i, j);
        return {0, p.y0, p.x1, p.y1};
    }
    PixelRect corner(int i, int j) const { return down(i, j).intersect(down(i + 1, j)); }
    PixelRect right_wide(int i, int j) const {
        return patch_star(i, j).grown(1, 0, *amb).intersect(patch(i + 1, j).grown(1, 0, *amb));
    }
    PixelRect corner_wide(int i, int j) const {
        return down_star(i, j).grown(1, 0, *amb).intersect(down(i + 1, j).grown(1, 0, *amb));
    }
    PixelRect down_tall(int i, int j) const {
        return patch(i, j).grown(0, 1, *amb).intersect(patch(i, j + 1).grown(0, 1, *amb));
    }
    PixelRect down_tall_star(int i, int j) const {
        PixelRect p = down_tall(i, j);
        return {0, p.y0, p.x1, p.y1};
    }
    PixelRect corner_tall(int i, int j) const {
        return down_tall(i, j).intersect(down_tall(i + 1, j));
    }
    PixelRect corner_wide_tall(int i, int j) const {
        return down_tall_star(i, j).grown(1, 0, *amb).intersect(down_tall(i + 1, j).grown(1, 0, *amb));
    }
};

} // namespace detail

/// Runs the generator on every ledger domain.  Domains are independent, so
/// rows are dispatched concurrently when asked to.
inline FieldLedger precompute_ledger(const FieldGenerator& gen, const PatchGrid& grid,
                                     const GrayscaleData& g, bool parallel = true) {
    const AmbientComplex& amb = grid.image();
    const int m = grid.columns(), l = grid.rows();
    FieldLedger led(m, l);
    detail::LedgerDomains dom{&grid, &amb};

    auto fill = [&](FieldLedger::Entry& e, PixelRect r) {
        Subcomplex S = rect_subcomplex(amb, r);
        e.domain = r;
        e.field = gen.run(S, g.restricted_to(S)).field;
        e.present = true;
    };
    auto do_row = [&](int j) {
        for (int i = 0; i < m; ++i) {
            fill(led.patch(i, j), dom.patch(i, j));
            if (i + 1 < m) {
                fill(led.right_overlap(i, j), dom.right(i, j));
                fill(led.right_overlap_wide(i, j), dom.right_wide(i, j));
            }
            if (j + 1 < l) {
                fill(led.down_overlap(i, j), dom.down(i, j));
                fill(led.down_overlap_tall(i, j), dom.down_tall(i, j));
            }
            if (i + 1 < m && j + 1 < l) {
                fill(led.corner_overlap(i, j), dom.corner(i, j));
                fill(led.corner_overlap_wide(i, j), dom.corner_wide(i, j));
                fill(led.corner_overlap_tall(i, j), dom.corner_tall(i, j));
                fill(led.corner_overlap_wide_tall(i, j), dom.corner_wide_tall(i, j));
            }
        }
    };

    if (parallel && l > 1) {
        std::vector<std::future<void>> jobs;
        jobs.reserve(static_cast<std::size_t>(l));
        for (int j = 0; j < l; ++j)
            jobs.push_back(std::async(std::launch::async, do_row, j));
        for (auto& jb : jobs) jb.get();
    } else {
        for (int j = 0; j < l; ++j) do_row(j);
    }
    return led;
}

struct SweepStep {
    std::string name;
    std::size_t field_pairs;
};

struct DistributedResult {
    VectorField field;
    CriticalSet critical;
    std::size_t peak_invocation_cells = 0;   ///< largest subcomplex any run saw
    std::size_t largest_ledger_cells = 0;    ///< largest named ledger domain
    std::size_t generator_runs = 0;
    std::vector<SweepStep> steps;
};

/// The full patch pipeline: precompute the ledger, then stitch strips left
/// to right, stitch the strip overlaps (plain and vertically enlarged) the
/// same way, and finally stitch the strips top to bottom.  Every update is
/// the lean strip merge (union minus the seam correction) on fields that
/// were computed purely per-patch.
inline DistributedResult run_distributed(const AmbientComplex& image, int m, int l,
                                         const FieldGenerator& gen, const GrayscaleData& g,
                                         bool parallel = true) {
    PatchGrid grid = PatchGrid::partition(image, m, l);
    InstrumentedGenerator counted(gen);
    FieldLedger led = precompute_ledger(counted, grid, g, parallel);

    DistributedResult out;
    auto note = [&](std::string name, const VectorField& v) {
        out.steps.push_back({std::move(name), v.size()});
    };
    auto checked_update = [&](const char* what, int i, int j, VectorField next) {
        if (auto dup = next.matching_violation())
            throw std::logic_error(std::string("distributed: matching violated after ") + what +
                                   "[" + std::to_string(i) + "," + std::to_string(j) + "] at cell " +
                                   to_string(*dup));
        return next;
    };

    // strips, left to right
    std::vector<VectorField> strip(static_cast<std::size_t>(l));
    for (int j = 0; j < l; ++j) {
        VectorField acc = led.patch(0, j).field;
        for (int i = 0; i + 1 < m; ++i)
            acc = checked_update("strip", i, j,
                merge_2d(acc, led.patch(i + 1, j).field,
                         led.right_overlap(i, j).field, led.right_overlap_wide(i, j).field));
        note("strip[" + std::to_string(j) + "]", acc);
        strip[static_cast<std::size_t>(j)] = std::move(acc);
    }

    // strip overlaps, left to right
    std::vector<VectorField> band(l > 0 ? static_cast<std::size_t>(l - 1) : 0);
    std::vector<VectorField> band_tall(band.size());
    for (int j = 0; j + 1 < l; ++j) {
        VectorField acc = led.down_overlap(0, j).field;
        VectorField acc_tall = led.down_overlap_tall(0, j).field;
        for (int i = 0; i + 1 < m; ++i) {
            acc = checked_update("band", i, j,
                merge_2d(acc, led.down_overlap(i + 1, j).field,
                         led.corner_overlap(i, j).field, led.corner_overlap_wide(i, j).field));
            acc_tall = checked_update("band_tall", i, j,
                merge_2d(acc_tall, led.down_overlap_tall(i + 1, j).field,
                         led.corner_overlap_tall(i, j).field,
                         led.corner_overlap_wide_tall(i, j).field));
        }
        note("band[" + std::to_string(j) + "]", acc);
        note("band_tall[" + std::to_string(j) + "]", acc_tall);
        band[static_cast<std::size_t>(j)] = std::move(acc);
        band_tall[static_cast<std::size_t>(j)] = std::move(acc_tall);
    }

    // strips, top to bottom
    VectorField total = strip[0];
    for (int j = 0; j + 1 < l; ++j)
        total = checked_update("vertical", 0, j,
            merge_2d(total, strip[static_cast<std::size_t>(j + 1)],
                     band[static_cast<std::size_t>(j)], band_tall[static_cast<std::size_t>(j)]));
    note("total", total);

    Subcomplex K = Subcomplex::full(image);
    out.critical = recover_critical(K, total);
    out.field = std::move(total);
    out.peak_invocation_cells = counted.peak_cells();
    out.largest_ledger_cells = led.largest_domain_cells();
    out.generator_runs = counted.run_count();
    return out;
}

} // namespace dmt
