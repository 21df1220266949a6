#pragma once

#include <future>
#include <stdexcept>
#include <string>

#include "dmt/field.hpp"
#include "dmt/pls.hpp"

namespace dmt {

/// Thrown when a merge that assumes antithetic position is handed a pair
/// for which (U∩W)[n] != U[n]∩W[n]; carries the first failing n.
class AntitheticError : public std::runtime_error {
public:
    explicit AntitheticError(int n)
        : std::runtime_error("subcomplexes are not in antithetic position; "
                             "neighborhood equality fails at n=" + std::to_string(n)),
          failing_n(n) {}
    int failing_n;
};

namespace detail {

inline int effective_k(const FieldGenerator& gen, int k) {
    if (k == 0) return gen.locality();
    if (k < gen.locality())
        throw std::invalid_argument("merge: k override below the generator's locality");
    return k;
}

inline void require_cover(const Subcomplex& K, const Subcomplex& U, const Subcomplex& W) {
    if (!(set_union(U, W) == K))
        throw std::invalid_argument("merge: U and W do not cover the complex");
}

} // namespace detail

/// Two-set merge for any uniformly k-local generator.  The whole-complex
/// field is contained in V(U[k]) ∪ V(W[k]); the pairs each enlarged patch
/// gets wrong sit near its border and are exactly the pairs missing from
/// the field of the next enlargement, so they can be crossed out:
///
///   (V(U[k]) ∪ V(W[k])) \ (V(U[k]) \ V(U[2k+1])) \ (V(W[k]) \ V(W[2k+1]))
inline VectorField merge_general(const FieldGenerator& gen, const Subcomplex& K,
                                 const Subcomplex& U, const Subcomplex& W,
                                 const GrayscaleData& g, int k = 0) {
    detail::require_cover(K, U, W);
    k = detail::effective_k(gen, k);
    Subcomplex Uk = neighborhood_within(U, k, K);
    Subcomplex Wk = neighborhood_within(W, k, K);
    Subcomplex U2k1 = neighborhood_within(Uk, k + 1, K);
    Subcomplex W2k1 = neighborhood_within(Wk, k + 1, K);
    VectorField VUk = gen.run(Uk, g).field;
    VectorField VWk = gen.run(Wk, g).field;
    VectorField VU2 = gen.run(U2k1, g).field;
    VectorField VW2 = gen.run(W2k1, g).field;
    VectorField merged = field_union(VUk, VWk);
    merged = field_difference(merged, field_difference(VUk, VU2));
    merged = field_difference(merged, field_difference(VWk, VW2));
    return merged;
}

/// Variant that corrects with fields of the enlarged intersections only:
///
///   (V(U[k]) ∪ V(W[k])) \ (V(U[k]∩W[k]) \ V(U[2k+1]∩W[2k+1]))
///
/// The borders of both patches, and hence all crossed-out pairs, live in
/// U[k]∩W[k].
inline VectorField merge_intersection(const FieldGenerator& gen, const Subcomplex& K,
                                      const Subcomplex& U, const Subcomplex& W,
                                      const GrayscaleData& g, int k = 0) {
    detail::require_cover(K, U, W);
    k = detail::effective_k(gen, k);
    Subcomplex Uk = neighborhood_within(U, k, K);
    Subcomplex Wk = neighborhood_within(W, k, K);
    Subcomplex U2k1 = neighborhood_within(Uk, k + 1, K);
    Subcomplex W2k1 = neighborhood_within(Wk, k + 1, K);
    VectorField VUk = gen.run(Uk, g).field;
    VectorField VWk = gen.run(Wk, g).field;
    VectorField Vcap = gen.run(set_intersection(Uk, Wk), g).field;
    VectorField Vcap2 = gen.run(set_intersection(U2k1, W2k1), g).field;
    return field_difference(field_union(VUk, VWk), field_difference(Vcap, Vcap2));
}

/// For patches in antithetic position the enlarged intersections coincide
/// with enlargements of the intersection, so a single enlarging procedure
/// on the (typically much smaller) overlap suffices:
///
///   (V(U[k]) ∪ V(W[k])) \ (V((U∩W)[k]) \ V((U∩W)[2k+1]))
///
/// Rejects pairs that fail the antithetic test, reporting the failing n.
inline VectorField merge_antithetic(const FieldGenerator& gen, const Subcomplex& K,
                                    const Subcomplex& U, const Subcomplex& W,
                                    const GrayscaleData& g, int k = 0, int n_max = -1) {
    AntitheticCheck chk = check_antithetic(U, W, K, n_max);
    if (!chk.antithetic) throw AntitheticError(chk.failing_n);
    detail::require_cover(K, U, W);
    k = detail::effective_k(gen, k);
    Subcomplex inter = set_intersection(U, W);
    Subcomplex interK = neighborhood_within(inter, k, K);
    Subcomplex inter2 = neighborhood_within(interK, k + 1, K);
    VectorField VUk = gen.run(neighborhood_within(U, k, K), g).field;
    VectorField VWk = gen.run(neighborhood_within(W, k, K), g).field;
    VectorField Vcap = gen.run(interK, g).field;
    VectorField Vcap2 = gen.run(inter2, g).field;
    return field_difference(field_union(VUk, VWk), field_difference(Vcap, Vcap2));
}

/// Lean merge for lower-star fields on two overlapping strips of a pixel
/// rectangle.  No enlargement of the patches themselves is consumed; the
/// wrong pairs of the plain union are exactly V(U∩W) \ V((U∩W)[1]):
///
///   (V(U) ∪ V(W)) \ (V(U∩W) \ V((U∩W)[1]))
inline VectorField merge_2d(const VectorField& VU, const VectorField& VW,
                            const VectorField& V_cap, const VectorField& V_cap1) {
    return field_difference(field_union(VU, VW), field_difference(V_cap, V_cap1));
}

enum class MergeVariant { naive, general, intersection, antithetic, two_dim };

/// A resolved two-set merge request.  validate() enforces the variant's
/// geometric preconditions against the target complex.
struct MergePlan {
    Subcomplex U;
    Subcomplex W;
    int k = 1;
    MergeVariant variant = MergeVariant::general;

    void validate(const Subcomplex& K) const {
        if (variant == MergeVariant::naive) return; // any pair, for demonstrations
        if (!(set_union(U, W) == K))
            throw std::invalid_argument("merge plan: U and W do not cover the complex");
        if (variant != MergeVariant::two_dim) return;
        const AmbientComplex& amb = K.ambient();
        if (!amb.cubical() || amb.kind() == AmbientComplex::Kind::path)
            throw std::invalid_argument("merge plan: strip merge needs a 2D grid");
        PixelRect rk, ru, rw;
        if (!as_pixel_rect(K, rk) || !as_pixel_rect(U, ru) || !as_pixel_rect(W, rw))
            throw std::invalid_argument("merge plan: strip merge needs rectangular patches");
        if (ru.y0 != rk.y0 || ru.y1 != rk.y1 || rw.y0 != rk.y0 || rw.y1 != rk.y1)
            throw std::invalid_argument("merge plan: patches must be vertical strips of the rectangle");
        if (!(ru.x0 < rw.x0 && rw.x0 < ru.x1 && ru.x1 < rw.x1))
            throw std::invalid_argument("merge plan: strip columns must nest as a < b < c < d");
        PixelRect overlap = ru.intersect(rw);
        if (overlap.width() < 2 || overlap.height() < 2)
            throw std::invalid_argument("merge plan: strip overlap must contain a 2-cell");
    }
};

/// Strip merge with preconditions checked and the four fields computed
/// from the plan's patches.
inline VectorField merge_2d_checked(const FieldGenerator& gen, const Subcomplex& K,
                                    const Subcomplex& U, const Subcomplex& W,
                                    const GrayscaleData& g) {
    MergePlan plan{U, W, 1, MergeVariant::two_dim};
    plan.validate(K);
    Subcomplex inter = set_intersection(U, W);
    Subcomplex inter1 = neighborhood_within(inter, 1, K);
    VectorField VU = gen.run(U, g).field;
    VectorField VW = gen.run(W, g).field;
    VectorField Vcap = gen.run(inter, g).field;
    VectorField Vcap1 = gen.run(inter1, g).field;
    return merge_2d(VU, VW, Vcap, Vcap1);
}

/// The whole two-set pipeline: build both enlargements, restrict the data,
/// evaluate the generator on the patches concurrently, correct the union
/// with the enlarged-intersection fields, and recover the critical cells
/// as the complement of the matched cells.
inline FieldResult merge_two_patches(const FieldGenerator& gen, const Subcomplex& K,
                                     const Subcomplex& U1, const Subcomplex& U2,
                                     const GrayscaleData& g, int k = 0) {
    detail::require_cover(K, U1, U2);
    k = detail::effective_k(gen, k);
    Subcomplex U1k = neighborhood_within(U1, k, K);
    Subcomplex U2k = neighborhood_within(U2, k, K);
    Subcomplex U1e = neighborhood_within(U1k, k + 1, K);
    Subcomplex U2e = neighborhood_within(U2k, k + 1, K);
    GrayscaleData g1 = g.restricted_to(U1k);
    GrayscaleData g2 = g.restricted_to(U2k);
    auto run1 = std::async(std::launch::async, [&] { return gen.run(U1k, g1).field; });
    auto run2 = std::async(std::launch::async, [&] { return gen.run(U2k, g2).field; });
    VectorField A1 = run1.get();
    VectorField A2 = run2.get();
    VectorField V12 = field_union(A1, A2);
    Subcomplex inter_k = set_intersection(U1k, U2k);
    Subcomplex inter_e = set_intersection(U1e, U2e);
    VectorField Ak = gen.run(inter_k, g.restricted_to(inter_k)).field;
    VectorField Ae = gen.run(inter_e, g.restricted_to(inter_e)).field;
    VectorField V = field_difference(V12, field_difference(Ak, Ae));
    return {V, recover_critical(K, V)};
}

} // namespace dmt
