#pragma once

#include <chrono>
#include <cstdio>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>

#include "dmt/distributed.hpp"
#include "dmt/merge.hpp"
#include "dmt/pgm.hpp"
#include "dmt/report.hpp"
#include "dmt/trees.hpp"

namespace dmt::cli {

struct RunConfig {
    std::string mode; ///< oracle | naive | merge-general | merge-intersection |
                      ///< merge-antithetic | merge-2d | distributed | tree
    std::string input;
    std::string random_size; ///< "WxH": generate an image instead of reading one
    unsigned seed = 1;
    std::string patches;     ///< "MxL"
    int k = 0;               ///< 0: use the generator's locality
    int radius = 2;          ///< jet cover radius for tree mode
    bool verify = false;
    std::string report_path;
    std::string bench_path;
};

struct Outcome {
    FieldReport report;
    int exit_code = 0;
    std::string bench_csv;
};

namespace detail {

inline std::pair<int, int> parse_dims(const std::string& s, const char* what) {
    std::size_t x = s.find('x');
    if (x == std::string::npos || x == 0 || x + 1 >= s.size())
        throw std::invalid_argument(std::string(what) + ": expected MxL, got '" + s + "'");
    try {
        return {std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1))};
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string(what) + ": expected MxL, got '" + s + "'");
    }
}

inline LoadedImage obtain_image(const RunConfig& cfg) {
    if (!cfg.input.empty() && !cfg.random_size.empty())
        throw std::invalid_argument("give either --input or --random, not both");
    if (!cfg.input.empty()) return load_image(cfg.input);
    if (cfg.random_size.empty())
        throw std::invalid_argument("mode '" + cfg.mode + "' needs --input FILE or --random WxH");
    auto [w, h] = parse_dims(cfg.random_size, "--random");
    if (w < 1 || h < 1) throw std::invalid_argument("--random: empty image");
    PgmImage img;
    img.width = w;
    img.height = h;
    img.maxval = 65535;
    std::mt19937 rng(cfg.seed);
    std::uniform_int_distribution<int> val(0, img.maxval);
    img.pixels.resize(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
    for (int& p : img.pixels) p = val(rng);
    return lift_image(std::move(img));
}

struct TwoSetSplit {
    Subcomplex U, W;
};

/// Deterministic two-strip cover for two-set modes: split at the middle
/// with `overlap` shared pixel columns (or rows for 1x2).
inline TwoSetSplit two_set_split(const AmbientComplex& amb, const std::string& patches,
                                 int overlap, bool allow_horizontal) {
    auto [m, l] = patches.empty() ? std::pair<int, int>(2, 1) : parse_dims(patches, "--patches");
    if (!((m == 2 && l == 1) || (m == 1 && l == 2)))
        throw std::invalid_argument("two-set modes need --patches 2x1 or 1x2");
    const bool vertical = (m == 2);
    if (!vertical && !allow_horizontal)
        throw std::invalid_argument("this mode splits vertically; use --patches 2x1 "
                                    "(transpose the image for a horizontal split)");
    int extent = vertical ? amb.width() : amb.height();
    int mid = extent / 2;
    if (mid + 1 - overlap < 1 || mid >= extent - 1)
        throw std::invalid_argument("image too small to split with the requested overlap");
    PixelRect u = vertical ? PixelRect{0, 0, mid, amb.height() - 1}
                           : PixelRect{0, 0, amb.width() - 1, mid};
    PixelRect w = vertical ? PixelRect{mid + 1 - overlap, 0, amb.width() - 1, amb.height() - 1}
                           : PixelRect{0, mid + 1 - overlap, amb.width() - 1, amb.height() - 1};
    return {rect_subcomplex(amb, u), rect_subcomplex(amb, w)};
}

class Stopwatch {
public:
    long long lap() {
        auto now = std::chrono::steady_clock::now();
        auto us = std::chrono::duration_cast<std::chrono::microseconds>(now - last_).count();
        last_ = now;
        return us;
    }

private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

} // namespace detail

/// Runs one configured computation and assembles the report.  Timings go
/// only to the bench CSV so the report stays byte-stable across runs.
inline Outcome execute(const RunConfig& cfg) {
    Outcome out;
    ProcessLowerStars gen;
    detail::Stopwatch watch;
    auto bench = [&](const std::string& label, long long n, long long micros) {
        out.bench_csv += label + "," + std::to_string(n) + "," + std::to_string(micros) + "\n";
    };

    FieldReport& rep = out.report;
    rep.mode = cfg.mode;
    rep.k = cfg.k == 0 ? gen.locality() : cfg.k;

    FieldResult oracle;
    bool have_oracle = false;

    if (cfg.mode == "tree") {
        if (cfg.input.empty()) throw std::invalid_argument("tree mode needs --input FILE");
        SimplicialTree tree = load_tree(cfg.input);
        rep.ambient = ambient_description(tree.complex());
        std::mt19937 rng(cfg.seed);
        std::uniform_int_distribution<int> val(0, 1000000);
        std::vector<double> vals(static_cast<std::size_t>(tree.vertex_count()));
        for (double& v : vals) v = val(rng);
        GrayscaleData g = uniquify(GrayscaleData(tree.complex(), std::move(vals)));
        watch.lap();
        JetCover cover = build_jet_cover(tree, cfg.radius);
        bench("jet_cover", static_cast<long long>(cover.sets.size()), watch.lap());
        TreeMergeResult merged = merge_on_tree(gen, tree, cover, g);
        bench("merge_on_tree", static_cast<long long>(merged.result.field.size()), watch.lap());
        rep.field = merged.result.field;
        rep.critical = merged.result.critical;
        rep.metrics.emplace_back("cover_sets", static_cast<long long>(cover.sets.size()));
        rep.metrics.emplace_back("cover_radius", cfg.radius);
        rep.metrics.emplace_back("covers_all_cells", cover.props.covers_all_cells ? 1 : 0);
        rep.metrics.emplace_back("max_set_diameter", cover.props.max_set_diameter);
        rep.metrics.emplace_back("margin_ok", cover.props.margin_ok ? 1 : 0);
        rep.metrics.emplace_back("nerve_edges", static_cast<long long>(cover.props.nerve_edge_count));
        rep.metrics.emplace_back("fallback_merges", merged.fallback_count);
        std::size_t max_overlap = 0;
        for (const TreeMergeStep& s : merged.steps) {
            rep.metrics.emplace_back("step_" + std::to_string(s.set_index) + "_overlap_cells",
                                     static_cast<long long>(s.overlap_cells));
            max_overlap = std::max(max_overlap, s.overlap_cells);
        }
        rep.metrics.emplace_back("max_overlap_cells", static_cast<long long>(max_overlap));
        if (cfg.verify) {
            watch.lap();
            oracle = gen.run(Subcomplex::full(tree.complex()), g);
            bench("oracle", static_cast<long long>(oracle.field.size()), watch.lap());
            have_oracle = true;
        }
    } else {
        LoadedImage img = detail::obtain_image(cfg);
        const AmbientComplex& amb = *img.complex;
        rep.ambient = ambient_description(amb);
        Subcomplex K = Subcomplex::full(amb);
        const GrayscaleData& g = img.values;
        rep.metrics.emplace_back("complex_cells", static_cast<long long>(K.size()));

        auto compute_oracle = [&] {
            if (have_oracle) return;
            watch.lap();
            oracle = gen.run(K, g);
            bench("oracle", static_cast<long long>(oracle.field.size()), watch.lap());
            have_oracle = true;
        };

        if (cfg.mode == "oracle") {
            compute_oracle();
            rep.field = oracle.field;
            rep.critical = oracle.critical;
        } else if (cfg.mode == "naive") {
            auto [U, W] = detail::two_set_split(amb, cfg.patches, 1, true);
            watch.lap();
            NaiveMergeResult naive = naive_merge(gen.run(U, g).field, gen.run(W, g).field);
            bench("naive", static_cast<long long>(naive.field.size()), watch.lap());
            rep.field = naive.field;
            rep.metrics.emplace_back("valid_matching", naive.valid_matching ? 1 : 0);
            rep.metrics.emplace_back("doubly_matched_cells",
                                     static_cast<long long>(naive.doubly_matched.size()));
            if (naive.valid_matching) rep.critical = recover_critical(K, naive.field);
        } else if (cfg.mode == "merge-general" || cfg.mode == "merge-intersection" ||
                   cfg.mode == "merge-antithetic") {
            auto [U, W] = detail::two_set_split(amb, cfg.patches, 1, true);
            rep.metrics.emplace_back("patch_u_cells", static_cast<long long>(U.size()));
            rep.metrics.emplace_back("patch_w_cells", static_cast<long long>(W.size()));
            rep.metrics.emplace_back("overlap_cells",
                                     static_cast<long long>(set_intersection(U, W).size()));
            if (cfg.mode == "merge-antithetic") {
                // record the finite certificate the antithetic test produced
                AntitheticCheck chk = check_antithetic(U, W, K);
                rep.metrics.emplace_back("antithetic_certified_n", chk.certified_n);
                rep.metrics.emplace_back("antithetic_stabilized", chk.stabilized ? 1 : 0);
            }
            watch.lap();
            VectorField merged;
            if (cfg.mode == "merge-general")
                merged = merge_general(gen, K, U, W, g, cfg.k);
            else if (cfg.mode == "merge-intersection")
                merged = merge_intersection(gen, K, U, W, g, cfg.k);
            else
                merged = merge_antithetic(gen, K, U, W, g, cfg.k);
            bench(cfg.mode, static_cast<long long>(merged.size()), watch.lap());
            rep.field = merged;
            rep.critical = recover_critical(K, merged);
        } else if (cfg.mode == "merge-2d") {
            auto [U, W] = detail::two_set_split(amb, cfg.patches, 2, false);
            watch.lap();
            VectorField merged = merge_2d_checked(gen, K, U, W, g);
            bench("merge-2d", static_cast<long long>(merged.size()), watch.lap());
            rep.field = merged;
            rep.critical = recover_critical(K, merged);
            rep.k = 1;
        } else if (cfg.mode == "distributed") {
            auto [m, l] = cfg.patches.empty() ? std::pair<int, int>(2, 2)
                                              : detail::parse_dims(cfg.patches, "--patches");
            watch.lap();
            DistributedResult d = run_distributed(amb, m, l, gen, g);
            bench("distributed", static_cast<long long>(d.field.size()), watch.lap());
            rep.field = d.field;
            rep.critical = d.critical;
            rep.metrics.emplace_back("patches_m", m);
            rep.metrics.emplace_back("patches_l", l);
            rep.metrics.emplace_back("generator_runs", static_cast<long long>(d.generator_runs));
            rep.metrics.emplace_back("peak_invocation_cells",
                                     static_cast<long long>(d.peak_invocation_cells));
            rep.metrics.emplace_back("largest_ledger_cells",
                                     static_cast<long long>(d.largest_ledger_cells));
            for (const SweepStep& s : d.steps)
                rep.metrics.emplace_back("sweep_" + s.name + "_pairs",
                                         static_cast<long long>(s.field_pairs));
        } else {
            throw std::invalid_argument("unknown mode '" + cfg.mode + "'");
        }

        if (cfg.verify && cfg.mode != "oracle") compute_oracle();
    }

    rep.metrics.emplace_back("pairs", static_cast<long long>(rep.field.size()));
    rep.metrics.emplace_back("critical_cells", static_cast<long long>(rep.critical.size()));

    if (cfg.verify && have_oracle && cfg.mode != "oracle") {
        FieldReport mine;
        mine.ambient = rep.ambient;
        mine.field = rep.field;
        mine.critical = rep.critical; // naive without a valid matching leaves this empty
        FieldReport truth;
        truth.ambient = rep.ambient;
        truth.field = oracle.field;
        truth.critical = oracle.critical;
        Verdict v = verify_reports(mine, truth);
        rep.verdict = v.exact_equal ? "exact-equal" : "differs";
        rep.diffs = v.diffs;
        if (!v.exact_equal) out.exit_code = 2;
    } else if (cfg.verify && cfg.mode == "oracle") {
        rep.verdict = "exact-equal";
    }
    return out;
}

} // namespace dmt::cli
