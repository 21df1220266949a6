// Acceptance suite: end-to-end checks of the merging machinery against the
// whole-complex run.  Prints one PASS/FAIL line per criterion and exits
// nonzero when anything fails.

#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "dmt/distributed.hpp"
#include "dmt/merge.hpp"
#include "dmt/trees.hpp"

using namespace dmt;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

/// Every field produced anywhere in the suite funnels through here, so the
/// matching/partition discipline is audited globally (criterion 9).
struct Audit {
    long long fields = 0;
    std::vector<std::string> violations;

    void field(const Subcomplex& S, const VectorField& V, const CriticalSet& C) {
        ++fields;
        if (auto why = partition_violation(S, V, C)) {
            if (violations.size() < 8) violations.push_back(*why);
        }
    }

    void field_only(const Subcomplex& S, const VectorField& V) {
        try {
            field(S, V, recover_critical(S, V));
        } catch (const std::exception& e) {
            ++fields;
            if (violations.size() < 8) violations.push_back(e.what());
        }
    }
} audit;

int failures = 0;

void report(int idx, bool pass, const std::string& label, double ms) {
    std::printf("[%s] criterion %d: %s (%.1f ms)\n", pass ? "PASS" : "FAIL", idx, label.c_str(), ms);
    if (!pass) ++failures;
}

GrayscaleData random_image(const AmbientComplex& amb, std::mt19937& rng) {
    std::uniform_int_distribution<int> val(0, 4095);
    std::vector<double> v(static_cast<std::size_t>(amb.vertex_count()));
    for (double& x : v) x = val(rng);
    return uniquify(GrayscaleData(amb, std::move(v)));
}

Subcomplex vstrip(const AmbientComplex& amb, int c0, int c1) {
    return rect_subcomplex(amb, {c0, 0, c1, amb.height() - 1});
}

Subcomplex hstrip(const AmbientComplex& amb, int r0, int r1) {
    return rect_subcomplex(amb, {0, r0, amb.width() - 1, r1});
}

SimplicialTree binary_tree(int depth) {
    std::vector<std::pair<int, int>> e;
    int n = (1 << (depth + 1)) - 1;
    for (int v = 1; v < n; ++v) e.emplace_back((v - 1) / 2, v);
    return SimplicialTree(0, std::move(e));
}

SimplicialTree random_tree(std::mt19937& rng, int n, int max_valence) {
    std::vector<std::pair<int, int>> e;
    std::vector<int> deg(static_cast<std::size_t>(n), 0);
    for (int v = 1; v < n; ++v) {
        std::uniform_int_distribution<int> pick(0, v - 1);
        int p = pick(rng);
        for (int k = 0; deg[static_cast<std::size_t>(p)] >= max_valence && k < 500; ++k)
            p = pick(rng);
        e.emplace_back(p, v);
        deg[static_cast<std::size_t>(p)]++;
        deg[static_cast<std::size_t>(v)]++;
    }
    return SimplicialTree(0, std::move(e));
}

GrayscaleData random_tree_values(const SimplicialTree& T, std::mt19937& rng) {
    std::uniform_int_distribution<int> val(0, 1 << 20);
    std::vector<double> v(static_cast<std::size_t>(T.vertex_count()));
    for (double& x : v) x = val(rng);
    return uniquify(GrayscaleData(T.complex(), std::move(v)));
}

// 1. The four-vertex ramp 1,3,4,2 split into overlapping halves: the exact
//    fields of the whole path and of both patches, and the failure of the
//    plain union, pinned cell by cell.
void criterion1() {
    auto t0 = Clock::now();
    AmbientComplex amb = AmbientComplex::path(4);
    GrayscaleData g(amb, {1, 3, 4, 2});
    Subcomplex K = Subcomplex::full(amb);
    Subcomplex U(amb, {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}});
    Subcomplex W(amb, {{2, 0}, {3, 0}, {4, 0}, {5, 0}, {6, 0}});
    // warm one run so the timed section measures the algorithm, not first-touch
    (void)process_lower_stars(K, g);

    auto timed = Clock::now();
    FieldResult rk = process_lower_stars(K, g);
    FieldResult ru = process_lower_stars(U, g);
    FieldResult rw = process_lower_stars(W, g);
    NaiveMergeResult naive = naive_merge(ru.field, rw.field);
    double core_ms = ms_since(timed);

    bool ok = true;
    ok &= rk.field.pairs() == std::vector<CellPair>{{{2, 0}, {1, 0}}, {{4, 0}, {5, 0}}};
    ok &= ru.field.pairs() == std::vector<CellPair>{{{2, 0}, {1, 0}}, {{4, 0}, {3, 0}}};
    ok &= rw.field.pairs() == std::vector<CellPair>{{{4, 0}, {5, 0}}};
    ok &= naive.field != rk.field;
    ok &= !naive.valid_matching;
    ok &= field_difference(naive.field, rk.field).pairs() ==
          std::vector<CellPair>{{{4, 0}, {3, 0}}};
    ok &= core_ms < 1.0;
    audit.field(K, rk.field, rk.critical);
    audit.field(U, ru.field, ru.critical);
    audit.field(W, rw.field, rw.critical);
    report(1, ok, "pinned counterexample on the 1-3-4-2 path, core in " +
                      std::to_string(core_ms) + " ms", ms_since(t0));
}

// 2. The general, intersection and antithetic merge formulas reproduce the
//    whole-image field on randomized strip covers, k = 1.
void criterion2() {
    auto t0 = Clock::now();
    std::mt19937 rng(20260807);
    ProcessLowerStars gen;
    int trials = 510, ok_count = 0;
    for (int t = 0; t < trials; ++t) {
        std::uniform_int_distribution<int> wd(4, 32), hd(4, 32);
        AmbientComplex amb = AmbientComplex::grid2d(wd(rng), hd(rng));
        GrayscaleData g = random_image(amb, rng);
        Subcomplex K = Subcomplex::full(amb);
        bool horizontal = (t % 5 == 0);
        int extent = horizontal ? amb.height() : amb.width();
        int c = std::uniform_int_distribution<int>(1, extent - 1)(rng);
        int b = std::uniform_int_distribution<int>(1, c)(rng);
        Subcomplex U = horizontal ? hstrip(amb, 0, c) : vstrip(amb, 0, c);
        Subcomplex W = horizontal ? hstrip(amb, b, amb.height() - 1)
                                  : vstrip(amb, b, amb.width() - 1);
        if (t % 23 == 0) U = K; // degenerate rectangle cover
        VectorField truth = gen.run(K, g).field;
        VectorField merged;
        switch (t % 3) {
            case 0: merged = merge_general(gen, K, U, W, g); break;
            case 1: merged = merge_intersection(gen, K, U, W, g); break;
            default: merged = merge_antithetic(gen, K, U, W, g); break;
        }
        if (merged == truth) ++ok_count;
        audit.field_only(K, merged);
    }
    double ms = ms_since(t0);
    report(2, ok_count == trials && ms < 60000.0,
           "two-set merges equal the whole-image field in " + std::to_string(ok_count) + "/" +
               std::to_string(trials) + " trials", ms);
}

// 3. The lean strip formula (no patch enlargement) on randomized vertical
//    splits whose overlap contains a 2-cell.  A failure here would be a
//    finding against the formula and is printed, not absorbed.
void criterion3() {
    auto t0 = Clock::now();
    std::mt19937 rng(977);
    ProcessLowerStars gen;
    int trials = 510, ok_count = 0;
    for (int t = 0; t < trials; ++t) {
        std::uniform_int_distribution<int> wd(5, 32), hd(2, 32);
        int w = wd(rng), h = hd(rng);
        AmbientComplex amb = AmbientComplex::grid2d(w, h);
        GrayscaleData g = random_image(amb, rng);
        Subcomplex K = Subcomplex::full(amb);
        // columns a < b < c < d with at least two shared columns
        int c = std::uniform_int_distribution<int>(2, w - 2)(rng);
        int b = std::uniform_int_distribution<int>(1, c - 1)(rng);
        Subcomplex U = vstrip(amb, 0, c);
        Subcomplex W = vstrip(amb, b, w - 1);
        VectorField truth = gen.run(K, g).field;
        VectorField merged = merge_2d_checked(gen, K, U, W, g);
        if (merged == truth) {
            ++ok_count;
        } else {
            std::printf("  finding: lean strip merge differs from the oracle on a %dx%d image, "
                        "split b=%d c=%d seed-trial %d\n", w, h, b, c, t);
        }
        audit.field_only(K, merged);
    }
    report(3, ok_count == trials,
           "lean strip merge exact in " + std::to_string(ok_count) + "/" +
               std::to_string(trials) + " vertical splits", ms_since(t0));
}

// 4. The full patch pipeline on images up to 64x64 across the named patch
//    grids, with the per-invocation memory bound honored.
void criterion4() {
    auto t0 = Clock::now();
    std::mt19937 rng(64064);
    ProcessLowerStars gen;
    bool all_ok = true;
    for (std::pair<int, int> size : {std::pair<int, int>{64, 64}, {57, 49}}) {
        AmbientComplex amb = AmbientComplex::grid2d(size.first, size.second);
        GrayscaleData g = random_image(amb, rng);
        FieldResult oracle = gen.run(Subcomplex::full(amb), g);
        for (std::pair<int, int> grid : {std::pair<int, int>{1, 1}, {2, 2}, {3, 3}, {4, 4}, {2, 5}}) {
            DistributedResult d = run_distributed(amb, grid.first, grid.second, gen, g);
            bool ok = d.field == oracle.field && d.critical == oracle.critical &&
                      d.peak_invocation_cells <= d.largest_ledger_cells;
            if (!ok)
                std::printf("  mismatch: %dx%d image, %dx%d patches\n", size.first, size.second,
                            grid.first, grid.second);
            all_ok &= ok;
            audit.field(Subcomplex::full(amb), d.field, d.critical);
        }
    }
    double ms = ms_since(t0);
    report(4, all_ok && ms < 120000.0,
           "patch pipeline equals the whole-image run on all grids", ms);
}

// 5. Fields of disjoint unions are the unions of the component fields.
void criterion5() {
    auto t0 = Clock::now();
    std::mt19937 rng(255);
    ProcessLowerStars gen;
    int trials = 100, ok_count = 0;
    for (int t = 0; t < trials; ++t) {
        AmbientComplex amb = AmbientComplex::grid2d(42, 7);
        GrayscaleData g = random_image(amb, rng);
        int parts = std::uniform_int_distribution<int>(2, 5)(rng);
        std::vector<Subcomplex> comps;
        Subcomplex whole(amb, {});
        int at = 0;
        for (int p = 0; p < parts; ++p) {
            int width = std::uniform_int_distribution<int>(2, 5)(rng);
            int gap = std::uniform_int_distribution<int>(1, 3)(rng);
            if (at + width > amb.width()) break;
            Subcomplex comp = vstrip(amb, at, at + width - 1);
            comps.push_back(comp);
            whole = set_union(whole, comp);
            at += width + gap;
        }
        if (comps.size() < 2) { ++ok_count; continue; }
        VectorField stitched;
        for (const Subcomplex& c : comps)
            stitched = field_union(stitched, gen.run(c, g).field);
        FieldResult direct = gen.run(whole, g);
        if (direct.field == stitched) ++ok_count;
        audit.field(whole, direct.field, direct.critical);
    }
    report(5, ok_count == trials,
           "disjoint unions split the field exactly in " + std::to_string(ok_count) + "/" +
               std::to_string(trials) + " trials", ms_since(t0));
}

// 6. The antithetic test accepts overlapping strips out to the stabilization
//    bound and rejects the diagonal corner-touch with a witness.
void criterion6() {
    auto t0 = Clock::now();
    bool ok = true;
    for (std::pair<int, int> size : {std::pair<int, int>{16, 10}, {9, 9}, {24, 5}}) {
        AmbientComplex amb = AmbientComplex::grid2d(size.first, size.second);
        Subcomplex U = vstrip(amb, 0, (2 * size.first) / 3);
        Subcomplex W = vstrip(amb, size.first / 3, size.first - 1);
        AntitheticCheck chk =
            check_antithetic(U, W, Subcomplex::full(amb), amb.stabilization_bound());
        ok &= chk.antithetic;
    }
    AmbientComplex amb3 = AmbientComplex::grid2d(3, 3);
    Subcomplex A(amb3, {{0, 0}});
    Subcomplex B(amb3, {{2, 2}});
    AntitheticCheck diag = check_antithetic(A, B, Subcomplex::full(amb3));
    ok &= !diag.antithetic && diag.failing_n == 1;
    report(6, ok,
           "strips antithetic to stabilization; diagonal pixels rejected with witness n=" +
               std::to_string(diag.failing_n), ms_since(t0));
}

// 7. Jet covers of random low-valence trees: covering, diameter <= 6r, and
//    the nerve unchanged by the r-enlargement.
void criterion7() {
    auto t0 = Clock::now();
    std::mt19937 rng(777);
    int checked = 0, good = 0;
    for (int t = 0; t < 50; ++t) {
        int n = std::uniform_int_distribution<int>(1, 2000)(rng);
        SimplicialTree T = random_tree(rng, n, 4);
        for (int r : {2, 3, 5}) {
            JetCover cov = build_jet_cover(T, r);
            ++checked;
            bool ok = cov.props.covers_all_cells && cov.props.diameter_ok &&
                      cov.props.max_set_diameter <= 6 * r && cov.props.margin_ok;
            if (ok) ++good;
            else
                std::printf("  cover failure: n=%d r=%d covers=%d diam=%d margin=%d\n", n, r,
                            cov.props.covers_all_cells ? 1 : 0, cov.props.max_set_diameter,
                            cov.props.margin_ok ? 1 : 0);
        }
    }
    double ms = ms_since(t0);
    report(7, good == checked && ms < 60000.0,
           "jet-cover properties hold for " + std::to_string(good) + "/" +
               std::to_string(checked) + " (tree, radius) cases", ms);
}

// 8. Merging along the cover of a depth-10 binary tree, r = 3: the answer
//    is exact and the overlaps stay far below the patch sizes (the ratio is
//    evidence, not the gate).
void criterion8() {
    auto t0 = Clock::now();
    std::mt19937 rng(31337);
    ProcessLowerStars gen;
    SimplicialTree T = binary_tree(10);
    GrayscaleData g = random_tree_values(T, rng);
    JetCover cover = build_jet_cover(T, 3);
    TreeMergeResult res = merge_on_tree(gen, T, cover, g);
    FieldResult oracle = gen.run(Subcomplex::full(T.complex()), g);
    bool equal = res.result == oracle;
    audit.field(Subcomplex::full(T.complex()), res.result.field, res.result.critical);
    double worst = 0.0;
    bool ratio_ok = true;
    for (const TreeMergeStep& s : res.steps) {
        double ratio = static_cast<double>(s.overlap_cells) /
                       static_cast<double>(std::min(s.accumulated_cells, s.new_patch_cells));
        worst = std::max(worst, ratio);
        if (!(ratio < 0.25)) ratio_ok = false;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "tree merge exact over %zu cover sets; max overlap/patch ratio %.3f %s 1/4",
                  cover.sets.size(), worst, ratio_ok ? "<" : ">=");
    report(8, equal, buf, ms_since(t0));
}

// 9. Global audit: every field produced above satisfies the face-coface and
//    matching/partition discipline.
void criterion9() {
    auto t0 = Clock::now();
    bool ok = audit.violations.empty() && audit.fields > 1000;
    for (const std::string& v : audit.violations) std::printf("  violation: %s\n", v.c_str());
    report(9, ok,
           "matching/partition invariants hold on all " + std::to_string(audit.fields) +
               " audited fields", ms_since(t0));
}

} // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    if (failures == 0) std::printf("all acceptance criteria passed\n");
    else std::printf("%d acceptance criteria FAILED\n", failures);
    return failures == 0 ? 0 : 1;
}
