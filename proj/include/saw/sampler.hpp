#pragma once

#include "saw/count_table.hpp"
#include "saw/walk.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

namespace saw::sampler {

// Portable bounded draw: rejection on the top range so the stream is
// identical on every platform for a given seed.
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t m) {
    if (m == 0) throw std::invalid_argument("bounded: empty range");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % m;
    for (;;) {
        const std::uint64_t x = rng();
        if (x < limit) return x % m;
    }
}

struct PivotConfig {
    int dim = 2;
    int n = 1;
    std::uint64_t seed = 1;
    std::int64_t warmup_pivots = -1;  // accepted pivots before sampling; -1: 10*n
    std::int64_t thinning = -1;       // proposals between samples; -1: max(1, n/10)
    std::int64_t samples = 1000;
};

namespace detail {

// Signed axis permutations of Z^d (the octahedral group); index 0 is the
// identity and is never proposed.
struct SymmetryGroup {
    int dim;
    std::vector<std::vector<int>> perms;

    explicit SymmetryGroup(int d) : dim(d) {
        std::vector<int> p(d);
        std::iota(p.begin(), p.end(), 0);
        do {
            perms.push_back(p);
        } while (std::next_permutation(p.begin(), p.end()));
        // perms[0] is the identity permutation
    }

    std::uint64_t size() const { return perms.size() << dim; }

    // image coordinates of v - pivot under element g, added back to pivot
    void apply(std::uint64_t g, const std::int32_t* pivot, const std::int32_t* v,
               std::int32_t* out) const {
        const std::vector<int>& perm = perms[g >> dim];
        const std::uint64_t signs = g & ((1ULL << dim) - 1);
        for (int j = 0; j < dim; ++j) {
            const std::int32_t rel = v[perm[j]] - pivot[perm[j]];
            out[j] = pivot[j] + (((signs >> j) & 1) ? -rel : rel);
        }
    }
};

// Occupancy check storage: dense epoch-stamped grid when the box fits in
// memory, exact packed-coordinate set otherwise.
struct Occupancy {
    bool dense = false;
    int dim = 1, n = 0;
    std::int64_t side = 0;
    int bits_per_coord = 0;
    std::vector<std::uint32_t> grid;
    std::uint32_t epoch = 0;
    std::unordered_set<std::uint64_t> set;

    Occupancy(int d, int nn) : dim(d), n(nn), side(2LL * nn + 1) {
        std::int64_t cells = 1;
        bool fits = true;
        for (int j = 0; j < d; ++j) {
            cells *= side;
            if (cells > (1LL << 26)) {
                fits = false;
                break;
            }
        }
        dense = fits;
        if (dense) {
            grid.assign(static_cast<std::size_t>(cells), 0);
        } else {
            bits_per_coord = 1;
            while ((1LL << bits_per_coord) < side) ++bits_per_coord;
            if (bits_per_coord * d > 64)
                throw std::invalid_argument("walk too long for exact packed occupancy");
        }
    }

    void begin() {
        if (dense) {
            if (++epoch == 0) {  // wrapped: clear and restart
                std::fill(grid.begin(), grid.end(), 0);
                epoch = 1;
            }
        } else {
            set.clear();
        }
    }

    // true if newly inserted, false if already present
    bool insert(const std::int32_t* v) {
        if (dense) {
            std::int64_t idx = 0;
            for (int j = 0; j < dim; ++j) idx = idx * side + (v[j] + n);
            if (grid[idx] == epoch) return false;
            grid[idx] = epoch;
            return true;
        }
        std::uint64_t key = 0;
        for (int j = 0; j < dim; ++j)
            key = (key << bits_per_coord) | static_cast<std::uint64_t>(v[j] + n);
        return set.insert(key).second;
    }
};

}  // namespace detail

// Markov chain on SAW_n: start from the straight walk, propose a pivot
// (site, lattice symmetry), accept iff the result is self-avoiding. The
// pivot site ranges over [0, n-1]; site 0 rotates the whole walk so the
// chain targets the full uniform law rather than the law conditioned on the
// first step.
class PivotChain {
public:
    explicit PivotChain(const PivotConfig& cfg)
        : cfg_(cfg), d_(cfg.dim), n_(cfg.n), rng_(cfg.seed), group_(cfg.dim), occ_(cfg.dim, cfg.n) {
        if (d_ < 2) throw std::invalid_argument("pivot chain requires dim >= 2");
        if (n_ < 1) throw std::invalid_argument("pivot chain requires n >= 1");
        if (cfg_.samples < 1) throw std::invalid_argument("pivot chain requires samples >= 1");
        coords_.assign(std::size_t(n_ + 1) * d_, 0);
        for (int i = 1; i <= n_; ++i) coords_[std::size_t(i) * d_] = i;  // straight e_1 walk
        scratch_.assign(coords_.size(), 0);
        warmup();
    }

    std::int64_t proposals() const { return proposals_; }
    std::int64_t accepted() const { return accepted_; }

    const std::int32_t* vertex(int i) const { return &coords_[std::size_t(i) * d_]; }

    Walk current() const {
        std::vector<Step> st(n_);
        for (int i = 0; i < n_; ++i) {
            for (int j = 0; j < d_; ++j) {
                const std::int32_t diff = vertex(i + 1)[j] - vertex(i)[j];
                if (diff != 0) {
                    st[i] = make_step(j + 1, diff > 0 ? +1 : -1);
                    break;
                }
            }
        }
        return Walk::at_origin(d_, std::move(st));
    }

    // Advances by `thinning` proposals and returns.
    void advance() {
        const std::int64_t thin = cfg_.thinning < 0 ? std::max<std::int64_t>(1, n_ / 10) : cfg_.thinning;
        for (std::int64_t t = 0; t < std::max<std::int64_t>(thin, 1); ++t) propose();
    }

private:
    PivotConfig cfg_;
    int d_, n_;
    std::mt19937_64 rng_;
    detail::SymmetryGroup group_;
    detail::Occupancy occ_;
    std::vector<std::int32_t> coords_, scratch_;
    std::int64_t proposals_ = 0, accepted_ = 0;

    void warmup() {
        if (n_ < 2) return;  // no non-trivial pivot exists at n = 1
        const std::int64_t target = cfg_.warmup_pivots < 0 ? 10LL * n_ : cfg_.warmup_pivots;
        std::int64_t done = 0;
        while (done < target)
            if (propose()) ++done;
        proposals_ = accepted_ = 0;
    }

    bool propose() {
        if (n_ < 2) return false;
        ++proposals_;
        const int site = static_cast<int>(bounded(rng_, static_cast<std::uint64_t>(n_)));  // [0, n-1]
        const std::uint64_t g = 1 + bounded(rng_, group_.size() - 1);                      // skip identity
        const std::int32_t* pivot = vertex(site);
        // TODO: the full-rebuild check is O(n) per proposal; switch to an
        // incremental intersection structure if chains beyond n ~ 1e5 are needed.
        occ_.begin();
        for (int i = 0; i <= site; ++i)
            if (!occ_.insert(vertex(i))) return false;  // cannot happen: state is self-avoiding
        for (int i = site + 1; i <= n_; ++i) {
            std::int32_t* out = &scratch_[std::size_t(i) * d_];
            group_.apply(g, pivot, vertex(i), out);
            if (!occ_.insert(out)) return false;
        }
        std::copy(scratch_.begin() + std::size_t(site + 1) * d_, scratch_.end(),
                  coords_.begin() + std::size_t(site + 1) * d_);
        ++accepted_;
        return true;
    }
};

// Seeded, reproducible sample stream: emits every thinning-th state after
// warmup. Emitted value is a positioned Walk starting at the origin.
template <class Emit>
void pivot_sample(const PivotConfig& cfg, Emit&& emit) {
    PivotChain chain(cfg);
    for (std::int64_t s = 0; s < cfg.samples; ++s) {
        chain.advance();
        emit(chain.current());
    }
}

struct LadderPointStats {
    int n = 0;
    std::int64_t samples = 0;
    double msd_mean = 0;          // E ||Gamma_n||^2 estimate
    double acceptance_rate = 0;   // post-warmup
    double probe_density = 0;     // probe motif occurrences per step
    double msd_lower_bound = 0;   // n^(4/(3d))
    bool msd_bound_ok = false;
    std::map<Point, std::uint64_t> endpoint_hist;  // kept while n <= 64
};

struct SampleStats {
    std::vector<LadderPointStats> ladder;
    double two_nu_hat = 0;
    double two_nu_stderr = 0;
    double mean_probe_density = 0;
    bool all_msd_bounds_ok = true;
    bool fit_valid = false;  // at least two ladder points
};

struct ExponentConfig {
    int dim = 2;
    std::vector<int> ladder{200, 400, 800, 1600};
    std::int64_t samples_per_n = 10000;
    std::uint64_t seed = 1;
    int chains = 4;
    std::int64_t warmup_pivots = -1;
    std::int64_t thinning = -1;
    int bootstrap = 200;
    unsigned threads = 0;  // 0: available parallelism
    // probe motif: two consecutive +e_1 steps
};

namespace detail {

struct ChainResult {
    std::vector<double> msd;  // per-sample squared endpoint norm
    double probe_sum = 0;     // per-sample densities, summed
    std::int64_t proposals = 0, accepted = 0;
    std::map<Point, std::uint64_t> endpoint_hist;
};

inline ChainResult run_chain(const PivotConfig& cfg, bool keep_hist) {
    ChainResult r;
    r.msd.reserve(cfg.samples);
    PivotChain chain(cfg);
    const int n = cfg.n, d = cfg.dim;
    for (std::int64_t s = 0; s < cfg.samples; ++s) {
        chain.advance();
        double sq = 0;
        const std::int32_t* end = chain.vertex(n);
        for (int j = 0; j < d; ++j) sq += double(end[j]) * end[j];
        r.msd.push_back(sq);
        if (n >= 2) {
            // density of the ++e_1 motif: positions k with steps k, k+1 both +e_1
            int hits = 0;
            for (int k = 0; k + 2 <= n; ++k) {
                const std::int32_t d0 = chain.vertex(k + 1)[0] - chain.vertex(k)[0];
                const std::int32_t d1 = chain.vertex(k + 2)[0] - chain.vertex(k + 1)[0];
                bool pure0 = true, pure1 = true;
                for (int j = 1; j < d; ++j) {
                    pure0 = pure0 && chain.vertex(k + 1)[j] == chain.vertex(k)[j];
                    pure1 = pure1 && chain.vertex(k + 2)[j] == chain.vertex(k + 1)[j];
                }
                if (d0 == 1 && d1 == 1 && pure0 && pure1) ++hits;
            }
            r.probe_sum += double(hits) / double(n - 1);
        }
        if (keep_hist) {
            Point p = Point::zero(d);
            for (int j = 0; j < d; ++j) p.c[j] = end[j];
            ++r.endpoint_hist[p];
        }
    }
    r.proposals = chain.proposals();
    r.accepted = chain.accepted();
    return r;
}

inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t m = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace detail

// Fits log E||Gamma_n||^2 against log n over the ladder and reports 2*nu_hat
// with a bootstrap standard error, the per-point lower bound check
// E||Gamma_n||^2 >= n^(4/(3d)), and the probe-motif density.
inline SampleStats estimate_exponents(const ExponentConfig& cfg) {
    if (cfg.ladder.empty()) throw std::invalid_argument("estimate_exponents: empty ladder");
    if (cfg.chains < 1) throw std::invalid_argument("estimate_exponents: chains >= 1 required");

    struct Job {
        std::size_t ladder_idx;
        PivotConfig pc;
        bool keep_hist;
        detail::ChainResult result;
    };
    std::vector<Job> jobs;
    for (std::size_t li = 0; li < cfg.ladder.size(); ++li) {
        const int n = cfg.ladder[li];
        const std::int64_t per = (cfg.samples_per_n + cfg.chains - 1) / cfg.chains;
        for (int c = 0; c < cfg.chains; ++c) {
            PivotConfig pc;
            pc.dim = cfg.dim;
            pc.n = n;
            pc.seed = cfg.seed + 1000003ULL * (li * cfg.chains + c) + 17;
            pc.warmup_pivots = cfg.warmup_pivots;
            pc.thinning = cfg.thinning;
            pc.samples = per;
            jobs.push_back({li, pc, n <= 64, {}});
        }
    }

    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const unsigned threads = std::min<std::size_t>(cfg.threads ? cfg.threads : hw, jobs.size());
    if (threads <= 1) {
        for (Job& j : jobs) j.result = detail::run_chain(j.pc, j.keep_hist);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= jobs.size()) break;
                    jobs[i].result = detail::run_chain(jobs[i].pc, jobs[i].keep_hist);
                }
            });
        for (auto& th : pool) th.join();
    }

    SampleStats stats;
    std::vector<std::vector<double>> msd_by_n(cfg.ladder.size());
    for (std::size_t li = 0; li < cfg.ladder.size(); ++li) {
        LadderPointStats lp;
        lp.n = cfg.ladder[li];
        double probe = 0;
        std::int64_t props = 0, acc = 0;
        for (const Job& j : jobs) {
            if (j.ladder_idx != li) continue;
            auto& bucket = msd_by_n[li];
            bucket.insert(bucket.end(), j.result.msd.begin(), j.result.msd.end());
            probe += j.result.probe_sum;
            props += j.result.proposals;
            acc += j.result.accepted;
            for (const auto& [p, c] : j.result.endpoint_hist) lp.endpoint_hist[p] += c;
        }
        lp.samples = static_cast<std::int64_t>(msd_by_n[li].size());
        double sum = 0;
        for (double v : msd_by_n[li]) sum += v;
        lp.msd_mean = sum / double(lp.samples);
        lp.acceptance_rate = props > 0 ? double(acc) / double(props) : 0.0;
        lp.probe_density = lp.samples > 0 ? probe / double(lp.samples) : 0.0;
        lp.msd_lower_bound = std::pow(double(lp.n), 4.0 / (3.0 * cfg.dim));
        lp.msd_bound_ok = lp.msd_mean >= lp.msd_lower_bound;
        stats.all_msd_bounds_ok = stats.all_msd_bounds_ok && lp.msd_bound_ok;
        stats.mean_probe_density += lp.probe_density;
        stats.ladder.push_back(std::move(lp));
    }
    stats.mean_probe_density /= double(cfg.ladder.size());

    if (cfg.ladder.size() >= 2) {
        stats.fit_valid = true;
        std::vector<double> lx, ly;
        for (const auto& lp : stats.ladder) {
            lx.push_back(std::log(double(lp.n)));
            ly.push_back(std::log(lp.msd_mean));
        }
        stats.two_nu_hat = detail::fit_slope(lx, ly);

        std::mt19937_64 boot_rng(cfg.seed ^ 0xB00757A9ULL);
        std::vector<double> slopes;
        slopes.reserve(cfg.bootstrap);
        for (int b = 0; b < cfg.bootstrap; ++b) {
            std::vector<double> by(cfg.ladder.size());
            for (std::size_t li = 0; li < cfg.ladder.size(); ++li) {
                const auto& bucket = msd_by_n[li];
                double sum = 0;
                for (std::size_t s = 0; s < bucket.size(); ++s)
                    sum += bucket[bounded(boot_rng, bucket.size())];
                by[li] = std::log(sum / double(bucket.size()));
            }
            slopes.push_back(detail::fit_slope(lx, by));
        }
        double mean = 0;
        for (double s : slopes) mean += s;
        mean /= double(slopes.size());
        double var = 0;
        for (double s : slopes) var += (s - mean) * (s - mean);
        stats.two_nu_stderr = std::sqrt(var / double(slopes.size()));
    }
    return stats;
}

// Total-variation distance between the empirical endpoint law and an exact
// law given as a Distribution over points.
inline double total_variation(const Distribution<Point>& exact,
                              const std::map<Point, std::uint64_t>& empirical,
                              std::uint64_t samples) {
    double tv = 0;
    for (const auto& [p, c] : exact.table.entries) {
        const double pe = to_double(Rational(c, exact.table.total));
        auto it = empirical.find(p);
        const double ph = it == empirical.end() ? 0.0 : double(it->second) / double(samples);
        tv += std::abs(pe - ph);
    }
    for (const auto& [p, c] : empirical)
        if (exact.table.entries.find(p) == exact.table.entries.end())
            tv += double(c) / double(samples);
    return tv / 2.0;
}

}  // namespace saw::sampler
