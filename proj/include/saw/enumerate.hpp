#pragma once

#include "saw/count_table.hpp"
#include "saw/numeric.hpp"
#include "saw/walk.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace saw {

enum class WalkClass { walk, bridge, halfspace, closing };

inline std::string to_string(WalkClass c) {
    switch (c) {
        case WalkClass::walk: return "walk";
        case WalkClass::bridge: return "bridge";
        case WalkClass::halfspace: return "halfspace";
        case WalkClass::closing: return "closing";
    }
    return "?";
}

inline WalkClass walk_class_from_string(const std::string& s) {
    if (s == "walk") return WalkClass::walk;
    if (s == "bridge") return WalkClass::bridge;
    if (s == "halfspace") return WalkClass::halfspace;
    if (s == "closing") return WalkClass::closing;
    throw std::invalid_argument("unknown walk class: " + s);
}

// What to enumerate: all self-avoiding walks of length n from the origin in
// the given class, optionally constrained by a fixed prefix, a required
// hanging time, a required endpoint, and a minimum z-renewal count.
struct EnumSpec {
    int dim = 2;
    int n = 0;
    WalkClass cls = WalkClass::walk;
    std::optional<Walk> prefix;
    std::optional<std::size_t> required_hang;
    std::optional<Point> endpoint;
    std::optional<int> min_z_renewals;
};

struct ExecPolicy {
    unsigned threads = 0;  // 0: use available parallelism
    int split_depth = 6;   // subtree roots are this many steps beyond the fixed prefix
};

// Leaf-time view of the current walk. Valid only inside the callback.
class WalkView {
public:
    WalkView(int dim, int n, const std::int32_t* verts, const std::int8_t* dirs)
        : d_(dim), n_(n), verts_(verts), dirs_(dirs) {}

    int dim() const { return d_; }
    int size() const { return n_; }
    std::int32_t coord(int vertex, int axis0) const { return verts_[vertex * d_ + axis0]; }
    std::int32_t height(int vertex) const { return verts_[vertex * d_]; }
    Step step(int i) const { return step_from_code(dirs_[i]); }

    Point vertex(int i) const {
        Point p = Point::zero(d_);
        for (int j = 0; j < d_; ++j) p.c[j] = coord(i, j);
        return p;
    }
    Point endpoint() const { return vertex(n_); }

    Walk to_walk() const {
        std::vector<Step> st(n_);
        for (int i = 0; i < n_; ++i) st[i] = step(i);
        return Walk(d_, Point::zero(d_), std::move(st));
    }

private:
    int d_, n_;
    const std::int32_t* verts_;
    const std::int8_t* dirs_;
};

namespace detail {

struct CompiledSpec {
    int dim = 2;
    int n = 0;
    WalkClass cls = WalkClass::walk;
    std::vector<Step> prefix_steps;
    std::optional<std::size_t> required_hang;
    std::optional<Point> endpoint;
    std::optional<int> min_z;
};

inline CompiledSpec compile_spec(const EnumSpec& spec) {
    if (spec.dim < 2) throw std::invalid_argument("enumeration requires dim >= 2");
    if (spec.n < 0) throw std::invalid_argument("enumeration requires n >= 0");
    CompiledSpec c;
    c.dim = spec.dim;
    c.n = spec.n;
    c.cls = spec.cls;
    if (spec.prefix) {
        const Walk& p = *spec.prefix;
        if (p.dim != spec.dim) throw std::invalid_argument("prefix dimension mismatch");
        if (p.size() > static_cast<std::size_t>(spec.n))
            throw std::invalid_argument("prefix longer than n");
        if (!is_self_avoiding(p)) throw std::invalid_argument("prefix not self-avoiding");
        c.prefix_steps = p.steps;
    }
    if (spec.required_hang) {
        const Walk p = Walk::at_origin(spec.dim, c.prefix_steps);
        if (*spec.required_hang > p.size() || hang_time(p) != *spec.required_hang)
            throw std::invalid_argument("hang constraint inconsistent with prefix");
        c.required_hang = spec.required_hang;
    }
    if (spec.endpoint) {
        if (spec.endpoint->dim() != spec.dim) throw std::invalid_argument("endpoint dimension mismatch");
        c.endpoint = spec.endpoint;
    }
    if (spec.min_z_renewals) {
        if (*spec.min_z_renewals < 0) throw std::invalid_argument("min_z_renewals must be >= 0");
        c.min_z = spec.min_z_renewals;
    }
    return c;
}

// Backtracking engine over the box [-n, n]^d with a dense occupancy grid.
// One instance per worker thread; not thread-safe.
class Searcher {
public:
    explicit Searcher(const CompiledSpec& cs) : cs_(cs) { init(); }

    bool feasible() const { return feasible_; }

    // Subtree roots `split` steps beyond the fixed prefix, in search order.
    std::vector<std::vector<std::int8_t>> make_tasks(int split) {
        std::vector<std::vector<std::int8_t>> out;
        if (!feasible_) return out;
        const int target = std::min(p_ + std::max(split, 0), n_);
        if (target == p_) {
            out.emplace_back();
            return out;
        }
        collect(p_, pflat_, prunmax_, pl1o_, pl1e_, target, out);
        return out;
    }

    template <class Leaf>
    std::uint64_t run_task(const std::vector<std::int8_t>& task, Leaf&& leaf) {
        if (!feasible_) return 0;
        int depth = p_;
        std::int64_t flat = pflat_;
        std::int32_t runmax = prunmax_;
        std::int64_t l1o = pl1o_, l1e = pl1e_;
        for (const std::int8_t dir : task) {
            const int ax = dir >> 1;
            const std::int32_t delta = (dir & 1) ? -1 : +1;
            const std::int32_t* row = &verts_[depth * d_];
            std::int32_t* nrow = &verts_[(depth + 1) * d_];
            for (int j = 0; j < d_; ++j) nrow[j] = row[j];
            nrow[ax] = row[ax] + delta;
            if (cls_closing_) l1o += std::abs(nrow[ax]) - std::abs(row[ax]);
            if (has_end_) l1e += std::abs(nrow[ax] - endv_[ax]) - std::abs(row[ax] - endv_[ax]);
            if (nrow[0] > runmax) runmax = nrow[0];
            flat += dir_delta_[dir];
            occ_[flat] = 1;
            dirs_[depth] = dir;
            ++depth;
        }
        std::uint64_t count = 0;
        rec(depth, flat, runmax, l1o, l1e, leaf, count);
        // unwind task marks
        std::int64_t f = flat;
        for (std::size_t i = task.size(); i-- > 0;) {
            occ_[f] = 0;
            f -= dir_delta_[task[i]];
        }
        return count;
    }

private:
    CompiledSpec cs_;
    int d_ = 2, n_ = 0, twod_ = 4, p_ = 0;
    bool feasible_ = true;
    bool pos_height_ = false, cls_bridge_ = false, cls_closing_ = false;
    bool has_end_ = false, has_hang_ = false, has_zmin_ = false;
    int zmin_ = 0;

    std::vector<std::int64_t> stride_;
    std::vector<std::int64_t> dir_delta_;
    std::vector<std::uint8_t> occ_;
    std::vector<std::int32_t> verts_;
    std::vector<std::int8_t> dirs_;
    std::vector<std::int32_t> hangv_, endv_;
    mutable std::vector<std::int32_t> zsufmin_;

    std::int64_t pflat_ = 0;
    std::int32_t prunmax_ = 0;
    std::int64_t pl1o_ = 0, pl1e_ = 0;

    void init() {
        d_ = cs_.dim;
        n_ = cs_.n;
        twod_ = 2 * d_;
        p_ = static_cast<int>(cs_.prefix_steps.size());
        pos_height_ = cs_.cls == WalkClass::bridge || cs_.cls == WalkClass::halfspace;
        cls_bridge_ = cs_.cls == WalkClass::bridge;
        cls_closing_ = cs_.cls == WalkClass::closing;
        has_end_ = cs_.endpoint.has_value();
        has_hang_ = cs_.required_hang.has_value();
        has_zmin_ = cs_.min_z.has_value();
        zmin_ = cs_.min_z.value_or(0);

        const std::int64_t side = 2LL * n_ + 3;  // one cell of padding each side
        std::int64_t cells = 1;
        stride_.assign(d_, 0);
        for (int j = 0; j < d_; ++j) {
            stride_[j] = cells;
            cells *= side;
            if (cells > (1LL << 31)) throw std::invalid_argument("enumeration box too large");
        }
        occ_.assign(static_cast<std::size_t>(cells), 0);
        dir_delta_.assign(twod_, 0);
        for (int dir = 0; dir < twod_; ++dir)
            dir_delta_[dir] = (dir & 1) ? -stride_[dir >> 1] : stride_[dir >> 1];

        verts_.assign(static_cast<std::size_t>(n_ + 1) * d_, 0);
        dirs_.assign(std::max(n_, 1), 0);
        zsufmin_.assign(n_ + 2, 0);

        std::int64_t origin = 0;
        for (int j = 0; j < d_; ++j) origin += (n_ + 1) * stride_[j];
        occ_[origin] = 1;

        if (has_hang_) {
            const Walk pw = Walk::at_origin(d_, cs_.prefix_steps);
            const Point hv = pw.vertex(*cs_.required_hang);
            hangv_.assign(hv.c.begin(), hv.c.end());
        }
        if (has_end_) endv_.assign(cs_.endpoint->c.begin(), cs_.endpoint->c.end());

        // Place the fixed prefix and fold it through the same pruning rules;
        // a prefix that violates them matches nothing.
        std::int64_t flat = origin;
        std::int32_t runmax = 0;
        std::int64_t l1o = 0;
        std::int64_t l1e = 0;
        if (has_end_)
            for (int j = 0; j < d_; ++j) l1e += std::abs(endv_[j]);
        for (int i = 0; i < p_; ++i) {
            const Step s = cs_.prefix_steps[i];
            const int ax = s.axis - 1;
            const std::int32_t* row = &verts_[i * d_];
            std::int32_t* nrow = &verts_[(i + 1) * d_];
            for (int j = 0; j < d_; ++j) nrow[j] = row[j];
            nrow[ax] = row[ax] + s.sign;
            flat += s.sign > 0 ? stride_[ax] : -stride_[ax];
            occ_[flat] = 1;
            dirs_[i] = static_cast<std::int8_t>(dir_code(s));
            const int rem = n_ - i - 1;
            if (pos_height_ && nrow[0] < 1) feasible_ = false;
            if (nrow[0] > runmax) runmax = nrow[0];
            if (cls_bridge_ && runmax - nrow[0] > rem) feasible_ = false;
            if (cls_closing_) {
                l1o += std::abs(nrow[ax]) - std::abs(row[ax]);
                if (l1o > rem + 1) feasible_ = false;
            }
            if (has_end_) {
                l1e += std::abs(nrow[ax] - endv_[ax]) - std::abs(row[ax] - endv_[ax]);
                if (l1e > rem) feasible_ = false;
            }
        }
        pflat_ = flat;
        prunmax_ = runmax;
        pl1o_ = l1o;
        pl1e_ = l1e;
    }

    // z-renewal count of the complete walk on the stack, capped at `cap`.
    int count_z_capped(int cap) const {
        if (n_ < 2 || cap <= 0) return 0;
        auto h = [&](int i) { return verts_[i * d_]; };
        zsufmin_[n_ + 1] = INT32_MAX;
        for (int i = n_; i >= 0; --i) zsufmin_[i] = std::min(h(i), zsufmin_[i + 1]);
        int count = 0;
        std::int32_t pm = h(0);
        for (int k = 0; k + 2 <= n_; ++k) {
            if (k > 0) pm = std::max(pm, h(k));
            if (pm < h(k + 1) && h(k + 1) == h(k + 2) && zsufmin_[std::min(k + 3, n_ + 1)] > h(k + 1)) {
                if (++count >= cap) return count;
            }
        }
        return count;
    }

    template <class Leaf>
    void rec(int depth, std::int64_t flat, std::int32_t runmax, std::int64_t l1o, std::int64_t l1e,
             Leaf& leaf, std::uint64_t& count) {
        if (depth == n_) {
            if (cls_bridge_ && verts_[std::size_t(depth) * d_] != runmax) return;
            if (cls_closing_ && l1o != 1) return;
            if (has_end_ && l1e != 0) return;
            if (has_zmin_ && count_z_capped(zmin_) < zmin_) return;
            ++count;
            leaf(WalkView(d_, n_, verts_.data(), dirs_.data()));
            return;
        }
        const std::int32_t* row = &verts_[std::size_t(depth) * d_];
        std::int32_t* nrow = &verts_[std::size_t(depth + 1) * d_];
        const int rem = n_ - depth - 1;
        for (int dir = 0; dir < twod_; ++dir) {
            const std::int64_t nf = flat + dir_delta_[dir];
            if (occ_[nf]) continue;
            const int ax = dir >> 1;
            const std::int32_t delta = (dir & 1) ? -1 : +1;
            const std::int32_t oc = row[ax];
            const std::int32_t nc = oc + delta;
            const std::int32_t nh = ax == 0 ? nc : row[0];
            if (pos_height_ && nh < 1) continue;
            std::int32_t nrunmax = runmax;
            if (nh > nrunmax) nrunmax = nh;
            if (cls_bridge_ && nrunmax - nh > rem) continue;
            std::int64_t nl1o = l1o;
            if (cls_closing_) {
                nl1o += std::abs(nc) - std::abs(oc);
                if (nl1o > rem + 1) continue;
            }
            std::int64_t nl1e = l1e;
            if (has_end_) {
                nl1e += std::abs(nc - endv_[ax]) - std::abs(oc - endv_[ax]);
                if (nl1e > rem) continue;
            }
            if (has_hang_) {
                bool below = false;
                for (int j = 0; j < d_; ++j) {
                    const std::int32_t vj = j == ax ? nc : row[j];
                    if (vj != hangv_[j]) {
                        below = vj < hangv_[j];
                        break;
                    }
                }
                if (!below) continue;
            }
            for (int j = 0; j < d_; ++j) nrow[j] = row[j];
            nrow[ax] = nc;
            dirs_[depth] = static_cast<std::int8_t>(dir);
            occ_[nf] = 1;
            rec(depth + 1, nf, nrunmax, nl1o, nl1e, leaf, count);
            occ_[nf] = 0;
        }
    }

    void collect(int depth, std::int64_t flat, std::int32_t runmax, std::int64_t l1o, std::int64_t l1e,
                 int target, std::vector<std::vector<std::int8_t>>& out) {
        if (depth == target) {
            out.emplace_back(dirs_.begin() + p_, dirs_.begin() + depth);
            return;
        }
        const std::int32_t* row = &verts_[std::size_t(depth) * d_];
        std::int32_t* nrow = &verts_[std::size_t(depth + 1) * d_];
        const int rem = n_ - depth - 1;
        for (int dir = 0; dir < twod_; ++dir) {
            const std::int64_t nf = flat + dir_delta_[dir];
            if (occ_[nf]) continue;
            const int ax = dir >> 1;
            const std::int32_t delta = (dir & 1) ? -1 : +1;
            const std::int32_t oc = row[ax];
            const std::int32_t nc = oc + delta;
            const std::int32_t nh = ax == 0 ? nc : row[0];
            if (pos_height_ && nh < 1) continue;
            std::int32_t nrunmax = runmax;
            if (nh > nrunmax) nrunmax = nh;
            if (cls_bridge_ && nrunmax - nh > rem) continue;
            std::int64_t nl1o = l1o;
            if (cls_closing_) {
                nl1o += std::abs(nc) - std::abs(oc);
                if (nl1o > rem + 1) continue;
            }
            std::int64_t nl1e = l1e;
            if (has_end_) {
                nl1e += std::abs(nc - endv_[ax]) - std::abs(oc - endv_[ax]);
                if (nl1e > rem) continue;
            }
            if (has_hang_) {
                bool below = false;
                for (int j = 0; j < d_; ++j) {
                    const std::int32_t vj = j == ax ? nc : row[j];
                    if (vj != hangv_[j]) {
                        below = vj < hangv_[j];
                        break;
                    }
                }
                if (!below) continue;
            }
            for (int j = 0; j < d_; ++j) nrow[j] = row[j];
            nrow[ax] = nc;
            dirs_[depth] = static_cast<std::int8_t>(dir);
            occ_[nf] = 1;
            collect(depth + 1, nf, nrunmax, nl1o, nl1e, target, out);
            occ_[nf] = 0;
        }
    }
};

}  // namespace detail

// Parallel reduction over all matching walks. `leaf(state, view)` runs once
// per walk on a worker-local copy of `init`; locals are merged with `merge`.
// All counts are exact, so results do not depend on thread count or split
// depth. Returns the number of matching walks.
template <class State, class Leaf, class Merge>
BigInt enumerate_reduce(const EnumSpec& spec, const ExecPolicy& pol, const State& init, Leaf leaf,
                        Merge merge, State& out) {
    const detail::CompiledSpec cs = detail::compile_spec(spec);
    out = init;
    detail::Searcher root(cs);
    const auto tasks = root.make_tasks(pol.split_depth);
    if (tasks.empty()) return 0;

    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    unsigned threads = pol.threads ? pol.threads : hw;
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, tasks.size()));

    std::vector<std::uint64_t> per_task(tasks.size(), 0);
    if (threads <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i)
            per_task[i] = root.run_task(tasks[i], [&](const WalkView& v) { leaf(out, v); });
    } else {
        // Static interleaved partition: task assignment and per-worker visit
        // order are fixed by the worker index, so results are reproducible
        // for any fixed thread count. Locals are merged in worker order.
        std::vector<State> locals(threads, init);
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                detail::Searcher local_search(cs);
                State& local = locals[t];
                for (std::size_t i = t; i < tasks.size(); i += threads)
                    per_task[i] =
                        local_search.run_task(tasks[i], [&](const WalkView& v) { leaf(local, v); });
            });
        }
        for (auto& th : pool) th.join();
        for (State& local : locals) merge(out, local);
    }
    BigInt total = 0;
    for (const std::uint64_t c : per_task) total += c;
    return total;
}

// Invokes `visitor(view)` once per matching walk. With more than one thread
// the visitor must be safe for concurrent invocation; pass threads = 1 for a
// deterministic single-threaded visiting order.
template <class Visitor>
CountTable<std::string> run_enumeration(const EnumSpec& spec, Visitor&& visitor,
                                        const ExecPolicy& pol = {}) {
    struct Nil {};
    Nil nil;
    const BigInt total = enumerate_reduce(
        spec, pol, Nil{}, [&](Nil&, const WalkView& v) { visitor(v); }, [](Nil&, const Nil&) {}, nil);
    CountTable<std::string> t;
    t.add(to_string(spec.cls), total);
    return t;
}

inline BigInt count_matching(const EnumSpec& spec, const ExecPolicy& pol = {}) {
    struct Nil {};
    Nil nil;
    return enumerate_reduce(
        spec, pol, Nil{}, [](Nil&, const WalkView&) {}, [](Nil&, const Nil&) {}, nil);
}

inline BigInt count_class(int dim, int n, WalkClass cls, const ExecPolicy& pol = {}) {
    return count_matching(EnumSpec{dim, n, cls, {}, {}, {}, {}}, pol);
}

// Collects matching walks as positioned Walk values, in deterministic search
// order. Intended for audit-scale enumerations.
inline std::vector<Walk> collect_walks(const EnumSpec& spec, const ExecPolicy& pol = {}) {
    std::vector<Walk> out;
    run_enumeration(spec, [&](const WalkView& v) { out.push_back(v.to_walk()); },
                    ExecPolicy{1, pol.split_depth});
    return out;
}

namespace detail {

// Dense endpoint/vertex tally over the box [-n, n]^d.
struct BoxTally {
    int dim = 0, n = 0;
    std::vector<std::uint64_t> cells;

    BoxTally() = default;
    BoxTally(int d, int nn) : dim(d), n(nn) {
        std::int64_t c = 1;
        for (int j = 0; j < d; ++j) {
            c *= 2LL * n + 1;
            if (c > (1LL << 31)) throw std::invalid_argument("tally box too large");
        }
        cells.assign(static_cast<std::size_t>(c), 0);
    }

    std::size_t index_of(const WalkView& v, int vertex) const {
        std::size_t idx = 0;
        std::size_t mul = 1;
        for (int j = 0; j < dim; ++j) {
            idx += mul * static_cast<std::size_t>(v.coord(vertex, j) + n);
            mul *= 2 * n + 1;
        }
        return idx;
    }

    Point point_of(std::size_t idx) const {
        Point p = Point::zero(dim);
        const std::size_t side = 2 * std::size_t(n) + 1;
        for (int j = 0; j < dim; ++j) {
            p.c[j] = static_cast<std::int32_t>(idx % side) - n;
            idx /= side;
        }
        return p;
    }

    void merge(const BoxTally& o) {
        for (std::size_t i = 0; i < cells.size(); ++i) cells[i] += o.cells[i];
    }
};

inline Distribution<Point> vertex_distribution(int dim, int n, int vertex_index,
                                               const ExecPolicy& pol) {
    BoxTally out;
    const BigInt total = enumerate_reduce(
        EnumSpec{dim, n, WalkClass::walk, {}, {}, {}, {}}, pol, BoxTally(dim, n),
        [vertex_index](BoxTally& t, const WalkView& v) { ++t.cells[t.index_of(v, vertex_index)]; },
        [](BoxTally& a, const BoxTally& b) { a.merge(b); }, out);
    Distribution<Point> dist;
    for (std::size_t i = 0; i < out.cells.size(); ++i)
        if (out.cells[i]) dist.table.add(out.point_of(i), out.cells[i]);
    if (dist.table.total != total) throw std::logic_error("tally mismatch");
    return dist;
}

}  // namespace detail

// Exact law of Gamma_n under the uniform measure on SAW_n.
inline Distribution<Point> endpoint_distribution(int dim, int n, const ExecPolicy& pol = {}) {
    if (n < 1) throw std::invalid_argument("endpoint_distribution requires n >= 1");
    return detail::vertex_distribution(dim, n, n, pol);
}

// Exact law of Gamma_{floor(n/2)} under the uniform measure on SAW_n.
inline Distribution<Point> midpoint_distribution(int dim, int n, const ExecPolicy& pol = {}) {
    if (n < 2) throw std::invalid_argument("midpoint_distribution requires n >= 2");
    return detail::vertex_distribution(dim, n, n / 2, pol);
}

// P_SAW_n(Gamma closes) = (#closing walks)/c_n; zero for even n on Z^d.
inline Rational closing_probability(int dim, int n, const ExecPolicy& pol = {}) {
    if (n < 1) throw std::invalid_argument("closing_probability requires n >= 1");
    if (n % 2 == 0) return Rational(0);
    const BigInt closing = count_class(dim, n, WalkClass::closing, pol);
    const BigInt all = count_class(dim, n, WalkClass::walk, pol);
    return Rational(closing, all);
}

// Counts closing walks and distinct oriented polygons (translation classes of
// closing walks modulo cyclic shift) and reports the multiplicity relating
// them. Each oriented polygon of length n+1 yields exactly n+1 rooted closing
// walks, so the expected multiplicity is n+1.
struct PolygonIdentityReport {
    int dim = 2;
    int n = 0;
    BigInt closing_count = 0;
    BigInt polygon_key_count = 0;
    std::optional<BigInt> multiplicity;  // closing/keys when exact
    bool matches_n_plus_1 = false;
};

inline PolygonIdentityReport polygon_identity_check(int dim, int n, const ExecPolicy& pol = {}) {
    PolygonIdentityReport rep;
    rep.dim = dim;
    rep.n = n;
    if (n < 1 || n % 2 == 0) return rep;  // no closing walks at even length
    std::set<std::string> keys;
    rep.closing_count = enumerate_reduce(
        EnumSpec{dim, n, WalkClass::closing, {}, {}, {}, {}}, pol, std::set<std::string>{},
        [](std::set<std::string>& s, const WalkView& v) { s.insert(polygon_key(v.to_walk())); },
        [](std::set<std::string>& a, const std::set<std::string>& b) { a.insert(b.begin(), b.end()); },
        keys);
    rep.polygon_key_count = static_cast<std::uint64_t>(keys.size());
    if (rep.polygon_key_count > 0 && rep.closing_count % rep.polygon_key_count == 0) {
        rep.multiplicity = rep.closing_count / rep.polygon_key_count;
        rep.matches_n_plus_1 = *rep.multiplicity == n + 1;
    }
    return rep;
}

// Law of the hanging time over closing walks of length n; exact uniformity
// across indices 0..n is the polygonal-invariance property.
inline Distribution<std::int64_t> hang_histogram_closing(int dim, int n, const ExecPolicy& pol = {}) {
    if (n < 1) throw std::invalid_argument("hang_histogram_closing requires n >= 1");
    std::vector<std::uint64_t> hist;
    enumerate_reduce(
        EnumSpec{dim, n, WalkClass::closing, {}, {}, {}, {}}, pol,
        std::vector<std::uint64_t>(n + 1, 0),
        [](std::vector<std::uint64_t>& h, const WalkView& v) {
            int best = 0;
            for (int i = 1; i <= v.size(); ++i) {
                for (int j = 0; j < v.dim(); ++j) {
                    const std::int32_t a = v.coord(i, j), b = v.coord(best, j);
                    if (a != b) {
                        if (a > b) best = i;
                        break;
                    }
                }
            }
            ++h[best];
        },
        [](std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
            for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
        },
        hist);
    Distribution<std::int64_t> dist;
    for (int i = 0; i <= n; ++i) dist.table.add(i, hist[i]);
    return dist;
}

struct AsymptoticParams {
    double mu_hat = 0;        // connective-constant estimate, c_nmax^(1/nmax)
    double c_hw_hat = 0;      // fitted square-root correction constant
    double probe_density = 0; // filled by the Monte Carlo probe, when run
};

struct GrowthReport {
    int dim = 2;
    int n_max = 0;
    std::vector<BigInt> counts;  // counts[k] = c_k, k = 0..n_max
    bool submultiplicative = true;
    std::string first_violation;
    AsymptoticParams params;
};

// Verifies c_{n+m} <= c_n c_m exactly for all n+m <= n_max and fits the
// growth parameters: mu_hat = c_nmax^(1/nmax) (an upper bound on the growth
// constant, approached from above) and c_hw_hat = max_n log(c_n/mu_hat^n)/sqrt(n).
inline GrowthReport growth_checks(int dim, int n_max, const ExecPolicy& pol = {}) {
    if (n_max < 2) throw std::invalid_argument("growth_checks requires n_max >= 2");
    GrowthReport rep;
    rep.dim = dim;
    rep.n_max = n_max;
    rep.counts.resize(n_max + 1);
    for (int k = 0; k <= n_max; ++k) rep.counts[k] = count_class(dim, k, WalkClass::walk, pol);
    for (int a = 1; a < n_max && rep.submultiplicative; ++a) {
        for (int b = a; a + b <= n_max; ++b) {
            if (rep.counts[a + b] > rep.counts[a] * rep.counts[b]) {
                rep.submultiplicative = false;
                rep.first_violation = "c_" + std::to_string(a + b) + " > c_" + std::to_string(a) +
                                      " * c_" + std::to_string(b);
                break;
            }
        }
    }
    const double log_cn = std::log(to_double(rep.counts[n_max]));
    rep.params.mu_hat = std::exp(log_cn / n_max);
    double chw = 0;
    for (int k = 1; k <= n_max; ++k) {
        const double excess =
            (std::log(to_double(rep.counts[k])) - k * std::log(rep.params.mu_hat)) / std::sqrt(double(k));
        chw = std::max(chw, excess);
    }
    rep.params.c_hw_hat = chw;
    return rep;
}

struct BridgeSeriesReport {
    int dim = 2;
    double mu = 0;
    std::vector<BigInt> bridge_counts;  // |SAB_{2j}|, j = 1..j_max
    std::vector<double> partial_sums;   // sum_{j<=J} |SAB_{2j}| mu^{-2j}
};

// Partial sums of the bridge generating series at 1/mu; nondecreasing in J,
// divergent at the true growth constant.
inline BridgeSeriesReport bridge_series(int dim, double mu, int j_max, const ExecPolicy& pol = {}) {
    if (mu <= 0) throw std::invalid_argument("bridge_series requires mu > 0");
    BridgeSeriesReport rep;
    rep.dim = dim;
    rep.mu = mu;
    double sum = 0;
    for (int j = 1; j <= j_max; ++j) {
        const BigInt b = count_class(dim, 2 * j, WalkClass::bridge, pol);
        rep.bridge_counts.push_back(b);
        sum += to_double(b) * std::pow(mu, -2.0 * j);
        rep.partial_sums.push_back(sum);
    }
    return rep;
}

// P_SAB_n(|zR_Gamma| < M), exact.
inline Rational z_renewal_deficit(int dim, int n, int M, const ExecPolicy& pol = {}) {
    if (n < 1) throw std::invalid_argument("z_renewal_deficit requires n >= 1");
    if (M < 0) throw std::invalid_argument("z_renewal_deficit requires M >= 0");
    if (M == 0) return Rational(0);
    std::uint64_t deficient = 0;
    const BigInt total = enumerate_reduce(
        EnumSpec{dim, n, WalkClass::bridge, {}, {}, {}, {}}, pol, std::uint64_t{0},
        [M](std::uint64_t& c, const WalkView& v) {
            // count z-renewal times, stopping at M
            const int n = v.size();
            int count = 0;
            std::int32_t pm = v.height(0);
            for (int k = 0; k + 2 <= n && count < M; ++k) {
                if (k > 0) pm = std::max(pm, v.height(k));
                if (pm >= v.height(k + 1) || v.height(k + 1) != v.height(k + 2)) continue;
                bool above = true;
                for (int i = k + 3; i <= n && above; ++i) above = v.height(i) > v.height(k + 1);
                if (above) ++count;
            }
            if (count < M) ++c;
        },
        [](std::uint64_t& a, const std::uint64_t& b) { a += b; }, deficient);
    if (total == 0) throw std::logic_error("no bridges of requested length");
    return Rational(BigInt(deficient), total);
}

// P_SAW_{n_total}(Gamma closes | Gamma^1 = gamma), where the conditioning
// requires Gamma[0,|gamma|] = gamma and hang(Gamma) = |gamma|. Empty optional
// when no completion exists.
inline std::optional<Rational> closing_score(const Walk& gamma, int n_total,
                                             const ExecPolicy& pol = {}) {
    if (!is_self_avoiding(gamma)) throw std::invalid_argument("closing_score: gamma must be self-avoiding");
    if (hang_time(gamma) != gamma.size())
        throw std::invalid_argument("closing_score: gamma must end at its hanging point");
    if (gamma.size() > static_cast<std::size_t>(n_total))
        throw std::invalid_argument("closing_score: |gamma| exceeds n_total");
    EnumSpec spec{gamma.dim, n_total, WalkClass::walk, translated_to_origin(gamma), gamma.size(), {}, {}};
    std::uint64_t closing = 0;
    const BigInt total = enumerate_reduce(
        spec, pol, std::uint64_t{0},
        [](std::uint64_t& c, const WalkView& v) {
            std::int64_t l1 = 0;
            for (int j = 0; j < v.dim(); ++j) l1 += std::abs(v.coord(v.size(), j));
            if (l1 == 1) ++c;
        },
        [](std::uint64_t& a, const std::uint64_t& b) { a += b; }, closing);
    if (total == 0) return std::nullopt;
    return Rational(BigInt(closing), total);
}

// Indices l whose cyclic segment gamma[hang-l, hang] scores at least
// `threshold` as the start of a length-n_ref walk. Segments may traverse the
// closing edge; they are realized by a cyclic shift followed by extraction.
inline std::vector<std::size_t> ticked_indices(const Walk& w, int n_ref, const Rational& threshold,
                                               const ExecPolicy& pol = {}) {
    if (!classify(w).closing) throw std::invalid_argument("ticked_indices requires a closing walk");
    const std::int64_t m = static_cast<std::int64_t>(w.size()) + 1;
    const std::int64_t hang = static_cast<std::int64_t>(hang_time(w));
    std::vector<std::size_t> out;
    const std::size_t l_max = std::min<std::size_t>(w.size(), static_cast<std::size_t>(n_ref));
    for (std::size_t l = 0; l <= l_max; ++l) {
        const Walk shifted = cyclic_shift(w, (hang - std::int64_t(l)) % m);
        const Walk seg = segment(shifted, 0, l);
        const auto score = closing_score(translated_to_origin(seg), n_ref, pol);
        if (score && *score >= threshold) out.push_back(l);
    }
    return out;
}

}  // namespace saw
