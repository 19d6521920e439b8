#pragma once

#include "saw/numeric.hpp"
#include "saw/walk.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace saw::patterns {

enum class PatternType { I, II };

// The fixed pair (chi_I, chi_II): self-avoiding walks inside [0, side]^d,
// both from (side, 1, ..., 1) to (side, 2, 1, ..., 1), both covering every
// boundary vertex of the cube, with |chi_II| = |chi_I| + 2.
struct PatternPair {
    int dim = 2;
    int cube_side = 3;
    Walk chi_i;
    Walk chi_ii;

    const Walk& pattern(PatternType t) const { return t == PatternType::I ? chi_i : chi_ii; }
};

inline Point pattern_start(int dim, int side) {
    Point p(std::vector<std::int32_t>(dim, 1));
    p.c[0] = side;
    return p;
}

inline Point pattern_end(int dim, int side) {
    Point p = pattern_start(dim, side);
    p.c[1] = 2;
    return p;
}

struct CertificateClause {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct PatternCertificate {
    std::vector<CertificateClause> clauses;
    bool all_pass() const {
        for (const auto& c : clauses)
            if (!c.pass) return false;
        return true;
    }
};

namespace detail {

inline bool in_cube(const Point& p, int side) {
    for (auto v : p.c)
        if (v < 0 || v > side) return false;
    return true;
}

inline bool on_cube_boundary(const Point& p, int side) {
    if (!in_cube(p, side)) return false;
    for (auto v : p.c)
        if (v == 0 || v == side) return true;
    return false;
}

inline std::vector<Point> cube_boundary(int dim, int side) {
    std::vector<Point> out;
    Point p = Point::zero(dim);
    // odometer over [0, side]^d
    for (;;) {
        if (on_cube_boundary(p, side)) out.push_back(p);
        int j = 0;
        while (j < dim && p.c[j] == side) p.c[j++] = 0;
        if (j == dim) break;
        ++p.c[j];
    }
    return out;
}

}  // namespace detail

// Checks every defining clause; failures are reported, not thrown.
inline PatternCertificate validate_pattern_pair(const PatternPair& pp) {
    PatternCertificate cert;
    auto add = [&](std::string name, bool pass, std::string detail = "") {
        cert.clauses.push_back({std::move(name), pass, std::move(detail)});
    };
    add("dimension", pp.dim >= 2 && pp.chi_i.dim == pp.dim && pp.chi_ii.dim == pp.dim);
    add("self_avoiding_I", is_self_avoiding(pp.chi_i));
    add("self_avoiding_II", is_self_avoiding(pp.chi_ii));

    const Point start = pattern_start(pp.dim, pp.cube_side);
    const Point end = pattern_end(pp.dim, pp.cube_side);
    add("starts_I", pp.chi_i.origin == start, "expected " + format_point(start));
    add("starts_II", pp.chi_ii.origin == start, "expected " + format_point(start));
    add("ends_I", pp.chi_i.endpoint() == end, "expected " + format_point(end));
    add("ends_II", pp.chi_ii.endpoint() == end, "expected " + format_point(end));

    auto contained = [&](const Walk& w) {
        for (const Point& v : w.vertices())
            if (!detail::in_cube(v, pp.cube_side)) return false;
        return true;
    };
    add("contained_I", contained(pp.chi_i));
    add("contained_II", contained(pp.chi_ii));

    const std::vector<Point> boundary = detail::cube_boundary(pp.dim, pp.cube_side);
    auto covers_boundary = [&](const Walk& w) {
        std::vector<Point> vs = w.vertices();
        std::sort(vs.begin(), vs.end());
        for (const Point& b : boundary)
            if (!std::binary_search(vs.begin(), vs.end(), b)) return false;
        return true;
    };
    add("boundary_I", covers_boundary(pp.chi_i));
    add("boundary_II", covers_boundary(pp.chi_ii));
    add("length_relation", pp.chi_ii.size() == pp.chi_i.size() + 2,
        "|chi_II| = " + std::to_string(pp.chi_ii.size()) + ", |chi_I| = " +
            std::to_string(pp.chi_i.size()));
    return cert;
}

// The concrete d=2 pair shipped with the library (also available as a data
// file): chi_I walks the boundary ring of [0,3]^2, chi_II detours through
// (1,2) and (2,2). Machine-verified by validate_pattern_pair.
inline PatternPair default_pattern_pair(int dim) {
    if (dim != 2) throw std::invalid_argument("default_pattern_pair: only d = 2 is shipped");
    PatternPair pp;
    pp.dim = 2;
    pp.cube_side = 3;
    pp.chi_i = parse_walk("@(3,1);-2,-1,-1,-1,+2,+2,+2,+1,+1,+1,-2", 2);
    pp.chi_ii = parse_walk("@(3,1);-2,-1,-1,-1,+2,+2,+2,+1,-2,+1,+2,+1,-2", 2);
    return pp;
}

struct Occurrence {
    std::size_t step_index = 0;  // pattern occupies steps [step_index, step_index + len)
    PatternType type = PatternType::I;
    Point cube_base;  // base of the translate of [0, side]^d hosting it

    std::size_t length(const PatternPair& pp) const { return pp.pattern(type).size(); }
};

// All step indices where a translate of chi_I or chi_II occurs. Occurrences
// of a valid pair are necessarily disjoint; this is checked, not assumed.
inline std::vector<Occurrence> find_occurrences(const Walk& w, const PatternPair& pp) {
    if (w.dim != pp.dim) throw std::invalid_argument("find_occurrences: dimension mismatch");
    const std::vector<Point> vs = w.vertices();
    std::vector<Occurrence> out;
    auto match = [&](std::size_t k, const Walk& chi) {
        if (k + chi.size() > w.size()) return false;
        for (std::size_t i = 0; i < chi.size(); ++i)
            if (!(w.steps[k + i] == chi.steps[i])) return false;
        return true;
    };
    for (std::size_t k = 0; k <= w.size(); ++k) {
        for (const PatternType t : {PatternType::I, PatternType::II}) {
            const Walk& chi = pp.pattern(t);
            if (match(k, chi)) {
                out.push_back({k, t, vs[k] - pp.pattern(t).origin});
                break;
            }
        }
    }
    for (std::size_t i = 1; i < out.size(); ++i) {
        if (out[i].step_index < out[i - 1].step_index + out[i - 1].length(pp))
            throw std::logic_error("overlapping pattern occurrences: invalid pattern pair");
    }
    return out;
}

// A slot of the shell: position in the skeleton plus the hosting cube base
// (coordinates relative to the walk translated to start at 0).
struct Slot {
    std::size_t skeleton_pos = 0;  // number of skeleton steps before this slot
    Point cube_base;

    bool operator==(const Slot&) const = default;
};

// Equivalence-class representative: the walk with every occurrence excised.
// Two walks related by pattern swaps (and translation) share a Shell.
struct Shell {
    int dim = 2;
    std::vector<Step> skeleton_steps;
    std::vector<Slot> slots;

    bool operator==(const Shell&) const = default;

    std::size_t slot_count() const { return slots.size(); }
    std::size_t skeleton_length() const { return skeleton_steps.size(); }

    // (T_I, T_II) for members of the given total length, if any.
    std::optional<std::pair<int, int>> counts_for_length(std::size_t total_len,
                                                         const PatternPair& pp) const {
        const std::size_t base = skeleton_length() + slot_count() * pp.chi_i.size();
        if (total_len < base) return std::nullopt;
        const std::size_t extra = total_len - base;
        if (extra % 2) return std::nullopt;
        const std::size_t t2 = extra / 2;
        if (t2 > slot_count()) return std::nullopt;
        return std::make_pair(static_cast<int>(slot_count() - t2), static_cast<int>(t2));
    }

    // Rebuilds the member walk with the given per-slot pattern assignment.
    Walk member(const std::vector<PatternType>& assignment, const PatternPair& pp) const {
        if (assignment.size() != slots.size())
            throw std::invalid_argument("shell member: assignment size mismatch");
        std::vector<Step> steps;
        std::size_t pos = 0;
        for (std::size_t i = 0; i < slots.size(); ++i) {
            for (; pos < slots[i].skeleton_pos; ++pos) steps.push_back(skeleton_steps[pos]);
            const Walk& chi = pp.pattern(assignment[i]);
            steps.insert(steps.end(), chi.steps.begin(), chi.steps.end());
        }
        for (; pos < skeleton_steps.size(); ++pos) steps.push_back(skeleton_steps[pos]);
        return Walk(dim, Point::zero(dim), std::move(steps));
    }
};

// Canonical shell of a walk: occurrences excised, everything translated so
// the walk starts at 0. A pattern-free walk is its own skeleton.
inline Shell shell_of(const Walk& w, const PatternPair& pp) {
    const std::vector<Occurrence> occ = find_occurrences(translated_to_origin(w), pp);
    Shell sh;
    sh.dim = w.dim;
    std::size_t pos = 0;
    for (const Occurrence& o : occ) {
        for (; pos < o.step_index; ++pos) sh.skeleton_steps.push_back(w.steps[pos]);
        sh.slots.push_back({sh.skeleton_steps.size(), o.cube_base});
        pos += o.length(pp);
    }
    for (; pos < w.size(); ++pos) sh.skeleton_steps.push_back(w.steps[pos]);
    return sh;
}

inline int count_type(const std::vector<Occurrence>& occ, PatternType t) {
    int c = 0;
    for (const auto& o : occ)
        if (o.type == t) ++c;
    return c;
}

// Replaces the occupant of slot i by the other pattern type. Both patterns
// share their endpoint displacement, so the walk outside the slot cube is
// unchanged as a point set; the length changes by exactly +-2.
inline Walk swap_pattern(const Walk& w, std::size_t slot_index, const PatternPair& pp) {
    const std::vector<Occurrence> occ = find_occurrences(w, pp);
    if (slot_index >= occ.size()) throw std::invalid_argument("swap_pattern: slot index out of range");
    const Occurrence& o = occ[slot_index];
    const Walk& from = pp.pattern(o.type);
    const Walk& to = pp.pattern(o.type == PatternType::I ? PatternType::II : PatternType::I);
    std::vector<Step> steps;
    steps.reserve(w.size() + to.size() - from.size());
    steps.insert(steps.end(), w.steps.begin(), w.steps.begin() + o.step_index);
    steps.insert(steps.end(), to.steps.begin(), to.steps.end());
    steps.insert(steps.end(), w.steps.begin() + o.step_index + from.size(), w.steps.end());
    Walk out(w.dim, w.origin, std::move(steps));
    if (!is_self_avoiding(out)) throw std::logic_error("swap_pattern produced a self-intersection");
    return out;
}

// Partition of the slots at the hanging point: S1 before, S2 after. Rejects
// walks whose hanging point lies inside a pattern occurrence, which valid
// pairs are expected to avoid in the walks under study.
struct SlotPartition {
    std::vector<std::size_t> s1, s2;  // slot indices
    int t1_i = 0, t1_ii = 0;          // type counts within S1
    int t2_i = 0, t2_ii = 0;
};

inline SlotPartition split_slots_at_hang(const Walk& w, const PatternPair& pp) {
    const std::size_t hang = hang_time(w);
    const std::vector<Occurrence> occ = find_occurrences(w, pp);
    SlotPartition part;
    for (std::size_t i = 0; i < occ.size(); ++i) {
        const std::size_t lo = occ[i].step_index, hi = lo + occ[i].length(pp);
        if (hang >= lo && hang <= hi)
            throw std::logic_error("hanging point lies inside a pattern occurrence");
        if (hi < hang) {
            part.s1.push_back(i);
            (occ[i].type == PatternType::I ? part.t1_i : part.t1_ii)++;
        } else {
            part.s2.push_back(i);
            (occ[i].type == PatternType::I ? part.t2_i : part.t2_ii)++;
        }
    }
    return part;
}

// P(T_I^1 = k) = C(s1, k) C(s2, tI - k) / C(s1 + s2, tI), the exact law of
// the number of type-I patterns landing in a part of size s1 when tI of them
// are allocated uniformly into s1 + s2 slots. Out-of-range k gives 0.
inline Rational hypergeom_t1(std::int64_t s1, std::int64_t s2, std::int64_t t_i, std::int64_t k) {
    if (s1 < 0 || s2 < 0 || t_i < 0 || t_i > s1 + s2)
        throw std::invalid_argument("hypergeom_t1: bad parameters");
    const BigInt den = binomial(s1 + s2, t_i);
    const BigInt num = binomial(s1, k) * binomial(s2, t_i - k);
    return Rational(num, den);
}

// The Gaussian approximation of the same law, evaluated at
// z = k/(alpha beta m) - 1 with m = s1 + s2, alpha = s1/m, beta = tI/m:
//   exp(-alpha beta m z^2 / (2 (1-alpha)(1-beta))) /
//   sqrt(2 pi alpha beta (1-alpha)(1-beta) m).
inline double gaussian_t1_approx(std::int64_t s1, std::int64_t s2, std::int64_t t_i, std::int64_t k) {
    const double m = double(s1) + double(s2);
    const double alpha = double(s1) / m;
    const double beta = double(t_i) / m;
    if (!(alpha > 0 && alpha < 1 && beta > 0 && beta < 1))
        throw std::invalid_argument("gaussian_t1_approx: alpha, beta must lie in (0,1)");
    const double z = double(k) / (alpha * beta * m) - 1.0;
    const double var = alpha * beta * (1 - alpha) * (1 - beta) * m;
    const double expo = -(alpha * beta) / (2 * (1 - alpha) * (1 - beta)) * m * z * z;
    return std::exp(expo) / std::sqrt(2 * std::numbers::pi * var);
}

// P(|T_I^1 - tI s1/(s1+s2)| >= t), exact sum of hypergeometric tails.
inline Rational allocation_tail(std::int64_t s1, std::int64_t s2, std::int64_t t_i,
                                const Rational& t) {
    if (t <= 0) return Rational(1);
    const Rational mean(BigInt(t_i) * s1, BigInt(s1) + s2);
    const BigInt den = binomial(s1 + s2, t_i);
    BigInt num = 0;
    const std::int64_t klo = std::max<std::int64_t>(0, t_i - s2);
    const std::int64_t khi = std::min(s1, t_i);
    for (std::int64_t k = klo; k <= khi; ++k) {
        const Rational dev = Rational(k) - mean;
        if ((dev < 0 ? -dev : dev) >= t) num += binomial(s1, k) * binomial(s2, t_i - k);
    }
    return Rational(num, den);
}

// The ratio check used when resampling between nearby allocation counts:
// exact hypergeometric ratio P(T_I^1 = k1)/P(T_I^1 = k2) next to its
// Gaussian prediction.
struct ResampleRatio {
    Rational exact;
    double gaussian = 0;
};

inline ResampleRatio resample_ratio(std::int64_t s1, std::int64_t s2, std::int64_t t_i,
                                    std::int64_t k1, std::int64_t k2) {
    const Rational p1 = hypergeom_t1(s1, s2, t_i, k1);
    const Rational p2 = hypergeom_t1(s1, s2, t_i, k2);
    if (p2 == 0) throw std::invalid_argument("resample_ratio: P(k2) = 0");
    return {p1 / p2, gaussian_t1_approx(s1, s2, t_i, k1) / gaussian_t1_approx(s1, s2, t_i, k2)};
}

}  // namespace saw::patterns
