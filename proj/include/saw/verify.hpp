#pragma once

#include "saw/enumerate.hpp"
#include "saw/mvm.hpp"
#include "saw/patterns.hpp"

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace saw::verify {

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SuiteResult {
    std::string suite;
    std::vector<Check> checks;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

// Exact counting audits of the two concrete multi-valued maps.
inline SuiteResult suite_mvm(int dim = 2, int n_insert = 10, int M = 2, int n_unfold = 8,
                             const ExecPolicy& pol = {}) {
    SuiteResult r{"mvm", {}};
    const auto ins = mvm::map_insert_z(dim, n_insert, M, -1, pol);
    r.checks.push_back({"insert_z_identity", ins.audit.identity_holds,
                        "sum_b Lambda = " + to_string(ins.audit.lambda_sum) +
                            ", |A| = " + to_string(ins.audit.domain_size)});
    r.checks.push_back({"insert_z_images_are_bridges", ins.images_are_bridges, ""});
    r.checks.push_back({"insert_z_preimage_bound", ins.preimage_bound_holds,
                        "max |Phi^-1(b)| = " + to_string(ins.audit.max_preimage_count) +
                            " <= M = " + std::to_string(M)});
    r.checks.push_back({"insert_z_counting_bound", ins.audit.bound_holds, ""});

    // Run the unfold/replace audit for every reachable endpoint of a
    // half-space walk of length n_unfold.
    std::set<Point> xs;
    for (const Walk& g :
         collect_walks(EnumSpec{dim, n_unfold, WalkClass::halfspace, {}, {}, {}, {}}, pol))
        xs.insert(g.endpoint());
    bool identity = true, halfspace = true, sizes = true, bound = true;
    BigInt domain_total = 0;
    for (const Point& x : xs) {
        const auto rep = mvm::map_unfold_replace(dim, n_unfold, x, pol);
        identity = identity && rep.audit.identity_holds;
        halfspace = halfspace && rep.images_in_halfspace;
        sizes = sizes && rep.image_sizes_match_bridge_counts;
        bound = bound && rep.projection_bound_holds;
        domain_total += rep.audit.domain_size;
    }
    const BigInt all_halfspace = count_class(dim, n_unfold, WalkClass::halfspace, pol);
    r.checks.push_back({"unfold_replace_identity", identity,
                        std::to_string(xs.size()) + " endpoint classes"});
    r.checks.push_back({"unfold_replace_images_in_halfspace", halfspace, ""});
    r.checks.push_back({"unfold_replace_image_sizes", sizes, "|Phi(gamma)| = |SAB_ren|"});
    r.checks.push_back({"unfold_replace_projection_bound", bound, ""});
    r.checks.push_back({"unfold_replace_domain_cover", domain_total == all_halfspace,
                        "sum over x equals |SAHSW_n|"});
    return r;
}

// Unf maps into self-avoiding walks of length n+1 and is injective on each
// endpoint class of half-space walks.
inline SuiteResult suite_unfold(int dim = 2, int n_max = 8, const ExecPolicy& pol = {}) {
    SuiteResult r{"unfold", {}};
    for (int n = 1; n <= n_max; ++n) {
        bool lengths = true, injective = true;
        std::map<Point, std::set<std::string>> images;
        BigInt total = 0;
        for (const Walk& g :
             collect_walks(EnumSpec{dim, n, WalkClass::halfspace, {}, {}, {}, {}}, pol)) {
            const Walk u = unfold(g);  // throws if not self-avoiding
            if (u.size() != g.size() + 1) lengths = false;
            images[g.endpoint()].insert(walk_key(u));
            total += 1;
        }
        BigInt distinct = 0;
        for (const auto& [x, keys] : images) distinct += keys.size();
        injective = distinct == total;
        r.checks.push_back({"unfold_n" + std::to_string(n), lengths && injective,
                            "length+1 and injective per endpoint class"});
    }
    return r;
}

// Exact uniformity of the hanging time over closing walks, odd n <= n_max.
inline SuiteResult suite_hang(int dim = 2, int n_max = 13, const ExecPolicy& pol = {}) {
    SuiteResult r{"hang", {}};
    for (int n = 1; n <= n_max; n += 2) {
        const auto hist = hang_histogram_closing(dim, n, pol);
        const BigInt expected = hist.table.total / (n + 1);
        bool uniform = hist.table.total % (n + 1) == 0;
        for (int i = 0; i <= n && uniform; ++i) uniform = hist.table.count(i) == expected;
        r.checks.push_back({"hang_uniform_n" + std::to_string(n), uniform,
                            to_string(hist.table.total) + " closing walks"});
    }
    return r;
}

// Submultiplicativity, growth-constant fit, and bridge series trend.
inline SuiteResult suite_growth(int dim = 2, int n_max = 16, int j_max = 7,
                                const ExecPolicy& pol = {}) {
    SuiteResult r{"growth", {}};
    const auto g = growth_checks(dim, n_max, pol);
    r.checks.push_back({"submultiplicative", g.submultiplicative, g.first_violation});
    r.checks.push_back({"mu_hat_gt_one", g.params.mu_hat > 1.0,
                        "mu_hat = " + std::to_string(g.params.mu_hat)});
    r.checks.push_back({"c_hw_finite_nonnegative",
                        std::isfinite(g.params.c_hw_hat) && g.params.c_hw_hat >= 0,
                        "c_hw_hat = " + std::to_string(g.params.c_hw_hat)});
    const auto series = bridge_series(dim, g.params.mu_hat, j_max, pol);
    bool increasing = true;
    for (std::size_t j = 1; j < series.partial_sums.size(); ++j)
        increasing = increasing && series.partial_sums[j] > series.partial_sums[j - 1];
    r.checks.push_back({"bridge_series_strictly_increasing", increasing,
                        "through J = " + std::to_string(j_max)});
    return r;
}

// Exact normalization and unimodality of the allocation law, plus agreement
// with its Gaussian approximation at large m.
inline SuiteResult suite_hypergeom(int limit = 60, std::int64_t big_m = 10000,
                                   double sup_tol = 1e-2) {
    SuiteResult r{"hypergeom", {}};
    bool normalized = true;
    for (int s1 = 0; s1 <= limit && normalized; ++s1)
        for (int s2 = 0; s2 <= limit && normalized; ++s2)
            for (int t = 0; t <= std::min(limit, s1 + s2) && normalized; ++t) {
                Rational sum = 0;
                for (int k = std::max(0, t - s2); k <= std::min(s1, t); ++k)
                    sum += patterns::hypergeom_t1(s1, s2, t, k);
                normalized = sum == 1;
            }
    r.checks.push_back({"normalization_exact", normalized,
                        "s1, s2, tI <= " + std::to_string(limit)});

    bool unimodal = true;
    for (int s1 = 1; s1 <= 12 && unimodal; ++s1)
        for (int s2 = 1; s2 <= 12 && unimodal; ++s2)
            for (int t = 1; t < s1 + s2 && unimodal; ++t) {
                bool rising = true;
                Rational prev = -1;
                for (int k = std::max(0, t - s2); k <= std::min(s1, t); ++k) {
                    const Rational cur = patterns::hypergeom_t1(s1, s2, t, k);
                    if (cur < prev) rising = false;
                    else if (!rising && cur > prev) unimodal = false;
                    prev = cur;
                }
            }
    r.checks.push_back({"unimodal_in_k", unimodal, "s1, s2 <= 12"});

    // Sup error against the Gaussian at m = big_m, alpha = beta = 1/2. The
    // scan tracks C(s,k) incrementally; spot values are cross-checked
    // against hypergeom_t1 itself.
    const std::int64_t s = big_m / 2;
    const BigInt den = binomial(2 * s, s);
    BigInt b = 1;  // C(s, k)
    double sup_err = 0;
    bool spot_ok = true;
    for (std::int64_t k = 0; k <= s; ++k) {
        const BigInt num = b * b;  // C(s,k) C(s,s-k)
        if (k == 0 || k == s / 2 || k == s)
            spot_ok = spot_ok && Rational(num, den) == patterns::hypergeom_t1(s, s, s, k);
        const double h = to_double_ratio(num, den);
        const double g = patterns::gaussian_t1_approx(s, s, s, k);
        sup_err = std::max(sup_err, std::abs(h - g));
        if (k < s) {
            b *= s - k;
            b /= k + 1;
        }
    }
    r.checks.push_back({"gaussian_spot_values", spot_ok, "incremental scan matches hypergeom_t1"});
    r.checks.push_back({"gaussian_sup_error", sup_err < sup_tol,
                        "sup |h - g| = " + std::to_string(sup_err) + " at m = " +
                            std::to_string(big_m)});
    return r;
}

}  // namespace saw::verify
