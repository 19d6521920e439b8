#pragma once

#include "saw/enumerate.hpp"
#include "saw/numeric.hpp"
#include "saw/walk.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace saw::mvm {

// An enumerable multi-valued map Phi from a finite domain into walks.
// Domain elements are tuples of walks (a single walk for plain maps, a pair
// for concatenation maps). Images are produced on demand.
struct MVMInstance {
    std::string name;
    std::vector<std::vector<Walk>> domain;
    std::function<std::vector<Walk>(const std::vector<Walk>&)> images;
    std::optional<BigInt> codomain_size;  // |B| when the codomain class is known
};

inline MVMInstance make_instance(std::string name, std::vector<Walk> domain,
                                 std::function<std::vector<Walk>(const Walk&)> images) {
    MVMInstance inst;
    inst.name = std::move(name);
    for (Walk& w : domain) inst.domain.push_back({std::move(w)});
    inst.images = [fn = std::move(images)](const std::vector<Walk>& a) { return fn(a.at(0)); };
    return inst;
}

// Exact audit of the counting identity |A| = sum_b Lambda_Phi(b) with
// Lambda_Phi(b) = sum_{a in Phi^-1(b)} 1/|Phi(a)|.
struct AuditReport {
    BigInt domain_size = 0;
    BigInt image_count = 0;  // number of distinct images
    std::optional<BigInt> codomain_size;
    Rational lambda_sum = 0;
    Rational lambda_max = 0;
    std::string argmax_image;           // key of a b attaining lambda_max
    BigInt max_preimage_count = 0;      // max_b |Phi^-1(b)|
    bool identity_holds = false;        // |A| == sum_b Lambda(b), exactly
    bool bound_holds = false;           // |A| <= |B| * max_b Lambda(b)
    bool image_size_constant_per_b = true;  // |Phi(a)| constant on each preimage set
};

inline AuditReport audit_identity(const MVMInstance& inst) {
    struct Cell {
        BigInt preimages = 0;
        Rational lambda = 0;
        std::size_t first_image_size = 0;
        bool constant = true;
    };
    std::map<std::string, Cell> by_image;
    AuditReport rep;
    rep.domain_size = inst.domain.size();
    rep.codomain_size = inst.codomain_size;
    for (const auto& a : inst.domain) {
        const std::vector<Walk> imgs = inst.images(a);
        if (imgs.empty()) throw std::logic_error("audit_identity: empty image set");
        const Rational weight(1, imgs.size());
        for (const Walk& b : imgs) {
            Cell& cell = by_image[walk_key(b)];
            if (cell.preimages == 0) cell.first_image_size = imgs.size();
            else if (cell.first_image_size != imgs.size()) cell.constant = false;
            cell.preimages += 1;
            cell.lambda += weight;
        }
    }
    rep.image_count = by_image.size();
    for (const auto& [key, cell] : by_image) {
        rep.lambda_sum += cell.lambda;
        if (cell.lambda > rep.lambda_max) {
            rep.lambda_max = cell.lambda;
            rep.argmax_image = key;
        }
        rep.max_preimage_count = std::max(rep.max_preimage_count, cell.preimages);
        rep.image_size_constant_per_b = rep.image_size_constant_per_b && cell.constant;
    }
    rep.identity_holds = rep.lambda_sum == Rational(rep.domain_size);
    const BigInt b_size = rep.codomain_size.value_or(rep.image_count);
    rep.bound_holds = Rational(rep.domain_size) <= Rational(b_size) * rep.lambda_max;
    if (rep.domain_size == 0) {
        rep.identity_holds = true;  // vacuous
        rep.bound_holds = true;
    }
    return rep;
}

namespace detail {

// Bridges collected once per length, shared by image generators.
struct BridgeCache {
    int dim = 2;
    ExecPolicy pol;
    std::map<std::size_t, std::vector<Walk>> by_len;

    const std::vector<Walk>& of(std::size_t len) {
        auto it = by_len.find(len);
        if (it == by_len.end()) {
            it = by_len
                     .emplace(len, collect_walks(EnumSpec{dim, static_cast<int>(len),
                                                          WalkClass::bridge, {}, {}, {}, {}},
                                                 pol))
                     .first;
        }
        return it->second;
    }
};

}  // namespace detail

// The bridge-concatenation map: (g1, g2) in SAB^M_{n-2j} x SAB_{2j-2}, for j
// in [1, j_max], maps to the single bridge g1 o (e_1, e_2) o g2 of length n.
// SAB^M_m is the set of bridges of length m with strictly fewer than M
// z-renewal times. The junction is one of the first M z-renewal times of the
// image, so |Phi^-1(b)| <= M.
struct InsertZResult {
    MVMInstance instance;
    int M = 0;
    AuditReport audit;
    bool images_are_bridges = true;
    bool preimage_bound_holds = false;
};

inline InsertZResult map_insert_z(int dim, int n, int M, int j_max = -1,
                                  const ExecPolicy& pol = {}) {
    if (n < 2) throw std::invalid_argument("map_insert_z requires n >= 2");
    if (M < 1) throw std::invalid_argument("map_insert_z requires M >= 1");
    if (j_max < 0) j_max = (n - 2) / 2;
    j_max = std::min(j_max, n / 2);

    InsertZResult res;
    res.M = M;
    res.instance.name = "insert_z(n=" + std::to_string(n) + ",M=" + std::to_string(M) + ")";
    for (int j = 1; j <= j_max; ++j) {
        const int m1 = n - 2 * j, m2 = 2 * j - 2;
        if (m1 < 0 || m2 < 0) continue;
        std::vector<Walk> left;
        for (Walk& w : collect_walks(EnumSpec{dim, m1, WalkClass::bridge, {}, {}, {}, {}}, pol))
            if (static_cast<int>(renewal_report(w).z_renewal_times.size()) < M)
                left.push_back(std::move(w));
        const std::vector<Walk> right =
            collect_walks(EnumSpec{dim, m2, WalkClass::bridge, {}, {}, {}, {}}, pol);
        for (const Walk& a : left)
            for (const Walk& b : right) res.instance.domain.push_back({a, b});
    }
    const Walk connector = Walk::at_origin(dim, {make_step(1, +1), make_step(2, +1)});
    auto flags = std::make_shared<bool>(true);
    res.instance.images = [n, connector, flags](const std::vector<Walk>& pair) {
        Walk b = concat(concat(pair.at(0), connector), pair.at(1));
        const ClassifyFlags f = classify(b);
        if (!(f.self_avoiding && f.bridge) || b.size() != static_cast<std::size_t>(n))
            *flags = false;
        return std::vector<Walk>{std::move(b)};
    };
    res.instance.codomain_size = count_class(dim, n, WalkClass::bridge, pol);
    res.audit = audit_identity(res.instance);
    res.images_are_bridges = *flags;
    res.preimage_bound_holds = res.audit.max_preimage_count <= M;
    return res;
}

// The unfold-and-replace map on half-space walks ending at x: gamma maps to
// every concatenation of a bridge of length ren with the tail of Unf(gamma)
// beyond its last renewal time ren. |Phi(gamma)| = |SAB_ren|, and |Phi^-1(b)|
// is bounded by the number of length-ren bridges whose endpoint has the
// prescribed hyperplane projection pi_1(x + b_ren - b_{n+1}).
struct UnfoldReplaceResult {
    MVMInstance instance;
    Point x;
    AuditReport audit;
    bool images_in_halfspace = true;
    bool image_sizes_match_bridge_counts = true;
    bool projection_bound_holds = true;
};

inline UnfoldReplaceResult map_unfold_replace(int dim, int n, const Point& x,
                                              const ExecPolicy& pol = {}) {
    if (x.dim() != dim) throw std::invalid_argument("map_unfold_replace: x dimension mismatch");
    UnfoldReplaceResult res;
    res.x = x;
    res.instance.name = "unfold_replace(n=" + std::to_string(n) + ",x=" + format_point(x) + ")";

    for (Walk& g : collect_walks(EnumSpec{dim, n, WalkClass::halfspace, {}, {}, x, {}}, pol))
        res.instance.domain.push_back({std::move(g)});

    auto cache = std::make_shared<detail::BridgeCache>(detail::BridgeCache{dim, pol, {}});
    struct Flags {
        bool halfspace_ok = true;
        bool sizes_ok = true;
    };
    auto flags = std::make_shared<Flags>();
    res.instance.images = [n, cache, flags](const std::vector<Walk>& tup) {
        const Walk& gamma = tup.at(0);
        const Walk u = unfold(gamma);
        const std::size_t ren = renewal_report(u).renewal_times.back();
        const Walk tail = segment(u, ren, u.size());
        const std::vector<Walk>& betas = cache->of(ren);
        std::vector<Walk> out;
        out.reserve(betas.size());
        for (const Walk& beta : betas) {
            Walk b = concat(beta, tail);
            const ClassifyFlags f = classify(b);
            if (!(f.self_avoiding && f.halfspace) || b.size() != static_cast<std::size_t>(n) + 1)
                flags->halfspace_ok = false;
            out.push_back(std::move(b));
        }
        if (out.size() != betas.size()) flags->sizes_ok = false;
        return out;
    };
    res.instance.codomain_size = count_class(dim, n + 1, WalkClass::halfspace, pol);
    res.audit = audit_identity(res.instance);
    res.images_in_halfspace = flags->halfspace_ok;
    res.image_sizes_match_bridge_counts = flags->sizes_ok;

    // Per-image preimage bound: |Phi^-1(b)| against the count of bridges with
    // the prescribed endpoint projection.
    std::map<std::string, BigInt> preimages;
    std::map<std::string, Walk> image_of;
    for (const auto& tup : res.instance.domain) {
        for (Walk& b : res.instance.images(tup)) {
            const std::string key = walk_key(b);
            preimages[key] += 1;
            image_of.emplace(key, std::move(b));
        }
    }
    for (const auto& [key, cnt] : preimages) {
        const Walk& b = image_of.at(key);
        const std::size_t ren = renewal_report(b).renewal_times.back();
        const Point target = project_h(x + b.vertex(ren) - b.endpoint());
        BigInt allowed = 0;
        for (const Walk& beta : cache->of(ren))
            if (project_h(beta.endpoint()) == target) allowed += 1;
        if (cnt > allowed) res.projection_bound_holds = false;
    }
    return res;
}

}  // namespace saw::mvm
