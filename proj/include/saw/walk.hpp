#pragma once

#include "saw/lattice.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace saw {

// A lattice path: origin plus ordered step list. Vertices are the prefix
// sums; consecutive vertices are adjacent by construction. Equality is
// positioned (same dim, origin and steps); see shape_equal for the
// up-to-translation notion.
struct Walk {
    int dim = 2;
    Point origin = Point::zero(2);
    std::vector<Step> steps;

    Walk() = default;
    Walk(int d, Point o, std::vector<Step> s) : dim(d), origin(std::move(o)), steps(std::move(s)) {
        if (dim < 2) throw std::invalid_argument("walk dimension must be >= 2");
        if (origin.dim() != dim) throw std::invalid_argument("origin dimension mismatch");
        for (const Step& st : steps) check_step(st, dim);
    }

    static Walk at_origin(int d, std::vector<Step> s) { return Walk(d, Point::zero(d), std::move(s)); }

    std::size_t size() const { return steps.size(); }

    std::vector<Point> vertices() const {
        std::vector<Point> v;
        v.reserve(steps.size() + 1);
        v.push_back(origin);
        Point cur = origin;
        for (const Step& s : steps) {
            cur.c[s.axis - 1] += s.sign;
            v.push_back(cur);
        }
        return v;
    }

    Point vertex(std::size_t i) const {
        if (i > steps.size()) throw std::out_of_range("vertex index");
        Point cur = origin;
        for (std::size_t k = 0; k < i; ++k) cur.c[steps[k].axis - 1] += steps[k].sign;
        return cur;
    }

    Point endpoint() const { return vertex(steps.size()); }

    bool operator==(const Walk&) const = default;
};

inline bool shape_equal(const Walk& a, const Walk& b) {
    return a.dim == b.dim && a.steps == b.steps;
}

inline Walk translate(const Walk& w, const Point& by) {
    Walk r = w;
    r.origin = r.origin + by;
    return r;
}

inline Walk translated_to_origin(const Walk& w) {
    Walk r = w;
    r.origin = Point::zero(w.dim);
    return r;
}

// gamma[i,j], positioned at vertex i.
inline Walk segment(const Walk& w, std::size_t i, std::size_t j) {
    if (i > j || j > w.size()) throw std::out_of_range("segment range");
    return Walk(w.dim, w.vertex(i),
                std::vector<Step>(w.steps.begin() + i, w.steps.begin() + j));
}

inline Walk reverse(const Walk& w) {
    std::vector<Step> st(w.steps.rbegin(), w.steps.rend());
    for (Step& s : st) s.sign = -s.sign;
    return Walk(w.dim, w.endpoint(), std::move(st));
}

inline bool is_self_avoiding(const Walk& w) {
    std::vector<Point> v = w.vertices();
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) == v.end();
}

// gamma o gamma~: w2 translated so its start matches w1's end. The result is
// not guaranteed self-avoiding.
inline Walk concat(const Walk& w1, const Walk& w2) {
    if (w1.dim != w2.dim) throw std::invalid_argument("concat dimension mismatch");
    std::vector<Step> st = w1.steps;
    st.insert(st.end(), w2.steps.begin(), w2.steps.end());
    return Walk(w1.dim, w1.origin, std::move(st));
}

// Index of the lexicographically maximal vertex. Unique under injectivity;
// 0 for the empty walk.
inline std::size_t hang_time(const Walk& w) {
    if (!is_self_avoiding(w)) throw std::invalid_argument("hang_time requires a self-avoiding walk");
    std::size_t best = 0;
    Point cur = w.origin, bestp = w.origin;
    for (std::size_t k = 0; k < w.size(); ++k) {
        cur.c[w.steps[k].axis - 1] += w.steps[k].sign;
        if (lex_less(bestp, cur)) {
            bestp = cur;
            best = k + 1;
        }
    }
    return best;
}

inline Walk hang_prefix(const Walk& w) { return segment(w, 0, hang_time(w)); }
inline Walk hang_suffix(const Walk& w) { return segment(w, hang_time(w), w.size()); }

// Unf(gamma): gamma^1, then the edge e_1, then the reflection of gamma^2
// across the hang level (translated by e_1). Always self-avoiding, length n+1.
inline Walk unfold(const Walk& w) {
    const std::size_t h = hang_time(w);  // validates self-avoidance
    std::vector<Step> st;
    st.reserve(w.size() + 1);
    st.insert(st.end(), w.steps.begin(), w.steps.begin() + h);
    st.push_back(make_step(1, +1));
    for (std::size_t k = h; k < w.size(); ++k) {
        Step s = w.steps[k];
        if (s.axis == 1) s.sign = -s.sign;
        st.push_back(s);
    }
    Walk out(w.dim, w.origin, std::move(st));
    if (!is_self_avoiding(out)) throw std::logic_error("unfold produced a self-intersection");
    return out;
}

struct ClassifyFlags {
    bool self_avoiding = false;
    bool bridge = false;
    bool halfspace = false;
    bool closing = false;
};

// bridge:    <g_0|e_1> < <g_k|e_1> <= <g_n|e_1> for 0 < k <= n
// halfspace: <g_k - g_0|e_1> > 0 for 1 <= k <= n
// closing:   self-avoiding and ||g_n - g_0|| = 1
// Heights are taken relative to the start so the flags are translation
// invariant. Bridges and half-space walks are self-avoiding by definition.
inline ClassifyFlags classify(const Walk& w) {
    ClassifyFlags f;
    f.self_avoiding = is_self_avoiding(w);
    const std::int32_t h0 = w.origin.height();
    std::int32_t h = h0, hmax = h0;
    bool above = true;
    Point cur = w.origin;
    for (const Step& s : w.steps) {
        cur.c[s.axis - 1] += s.sign;
        h = cur.height();
        if (h <= h0) above = false;
        hmax = std::max(hmax, h);
    }
    const bool ends_on_top = w.size() == 0 || (above && h == hmax);
    f.bridge = f.self_avoiding && ends_on_top;
    f.halfspace = f.self_avoiding && above;
    f.closing = f.self_avoiding && l1_norm(cur - w.origin) == 1;
    return f;
}

struct RenewalReport {
    std::vector<std::size_t> renewal_times;
    std::vector<std::size_t> z_renewal_times;  // the set zR_gamma
};

// Renewal time k: past heights <= h_k, future heights > h_k.
// z-renewal time k in [0, n-2]: heights before k+1 strictly below h_{k+1},
// h_{k+1} == h_{k+2}, and heights after k+2 strictly above h_{k+1}.
inline RenewalReport renewal_report(const Walk& w) {
    if (!is_self_avoiding(w)) throw std::invalid_argument("renewal_report requires a self-avoiding walk");
    const std::size_t n = w.size();
    std::vector<std::int32_t> h(n + 1);
    {
        Point cur = w.origin;
        h[0] = cur.height();
        for (std::size_t k = 0; k < n; ++k) {
            cur.c[w.steps[k].axis - 1] += w.steps[k].sign;
            h[k + 1] = cur.height();
        }
    }
    std::vector<std::int32_t> sufmin(n + 2, INT32_MAX);
    for (std::size_t i = n + 1; i-- > 0;) sufmin[i] = std::min(h[i], sufmin[i + 1]);

    RenewalReport rep;
    std::int32_t prefmax = INT32_MIN;
    for (std::size_t k = 0; k <= n; ++k) {
        const bool past_ok = prefmax <= h[k];
        const bool future_ok = k == n || sufmin[k + 1] > h[k];
        if (past_ok && future_ok) rep.renewal_times.push_back(k);
        if (k + 2 <= n) {
            const std::int32_t pm = std::max(prefmax, h[k]);  // max over 0..k
            if (pm < h[k + 1] && h[k + 1] == h[k + 2] && sufmin[std::min(k + 3, n + 1)] > h[k + 1])
                rep.z_renewal_times.push_back(k);
        }
        prefmax = std::max(prefmax, h[k]);
    }
    return rep;
}

// Replaces the lateral step (g_{k+1}, g_{k+2}) at a z-renewal time k by
// +-e_axis, axis >= 2, translating the suffix. Stays self-avoiding and
// preserves the endpoint height.
inline Walk edge_swap_at_z_renewal(const Walk& w, std::size_t k, int axis, int sign) {
    if (axis < 2 || axis > w.dim || (sign != 1 && sign != -1))
        throw std::invalid_argument("edge_swap: lateral axis required");
    const RenewalReport rep = renewal_report(w);
    if (!std::binary_search(rep.z_renewal_times.begin(), rep.z_renewal_times.end(), k))
        throw std::invalid_argument("edge_swap: k is not a z-renewal time");
    const Step cur = w.steps[k + 1];
    const Step repl = make_step(axis, sign);
    if (cur == repl) throw std::invalid_argument("edge_swap: step already has that value");
    Walk out = w;
    out.steps[k + 1] = repl;
    if (!is_self_avoiding(out)) throw std::logic_error("edge_swap produced a self-intersection");
    if (out.endpoint().height() != w.endpoint().height())
        throw std::logic_error("edge_swap changed the endpoint height");
    return out;
}

namespace detail {
// The n+1 steps of the closed vertex cycle g_0..g_n, g_0.
inline std::vector<Step> closing_cycle_steps(const Walk& w) {
    std::vector<Step> cyc = w.steps;
    const Point back = w.origin - w.endpoint();
    for (int j = 0; j < w.dim; ++j) {
        if (back.c[j] != 0) {
            cyc.push_back(make_step(j + 1, back.c[j] > 0 ? +1 : -1));
            break;
        }
    }
    return cyc;
}
}  // namespace detail

// The closing walk whose vertex sequence is the cyclic shift by s,
// re-anchored at its own first vertex. Shift by 0 is the identity.
inline Walk cyclic_shift(const Walk& w, std::int64_t s) {
    if (!classify(w).closing) throw std::invalid_argument("cyclic_shift requires a closing walk");
    const std::int64_t m = static_cast<std::int64_t>(w.size()) + 1;
    s = ((s % m) + m) % m;
    if (s == 0) return w;
    const std::vector<Step> cyc = detail::closing_cycle_steps(w);
    std::vector<Step> st(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) st[i] = cyc[(s + std::int64_t(i)) % m];
    return Walk(w.dim, w.vertex(static_cast<std::size_t>(s)), std::move(st));
}

// Canonical key of the oriented polygon: the lexicographic minimum over the
// n+1 rotations of the step cycle. Translates of cyclic shifts share a key;
// orientation reversal does not.
inline std::string polygon_key(const Walk& w) {
    if (!classify(w).closing) throw std::invalid_argument("polygon_key requires a closing walk");
    const std::vector<Step> cyc = detail::closing_cycle_steps(w);
    const std::size_t m = cyc.size();
    std::string word(m, '\0');
    for (std::size_t i = 0; i < m; ++i) word[i] = static_cast<char>('a' + dir_code(cyc[i]));
    std::string best = word;
    for (std::size_t s = 1; s < m; ++s) {
        std::string rot = word.substr(s) + word.substr(0, s);
        if (rot < best) best = rot;
    }
    return best;
}

// g avoids chi: their vertex sets meet exactly in {g_0}. g must start at
// chi's endpoint.
inline bool avoids(const Walk& g, const Walk& chi) {
    if (g.dim != chi.dim) throw std::invalid_argument("avoids: dimension mismatch");
    if (!(g.origin == chi.endpoint())) throw std::invalid_argument("avoids: g must start at chi's endpoint");
    std::vector<Point> cv = chi.vertices();
    std::sort(cv.begin(), cv.end());
    const std::vector<Point> gv = g.vertices();
    for (std::size_t i = 1; i < gv.size(); ++i)
        if (std::binary_search(cv.begin(), cv.end(), gv[i])) return false;
    return true;
}

// g closes chi: g starts at chi's endpoint and ends adjacent to chi_0.
inline bool closes_ext(const Walk& g, const Walk& chi) {
    if (g.dim != chi.dim) throw std::invalid_argument("closes_ext: dimension mismatch");
    if (!(g.origin == chi.endpoint())) throw std::invalid_argument("closes_ext: g must start at chi's endpoint");
    return adjacent(g.endpoint(), chi.vertex(0));
}

// Textual form: comma-separated signed axis indices, e.g. "+1,+2,-1";
// origin defaults to 0 unless prefixed "@(x,y,...);".
inline std::string format_walk(const Walk& w) {
    std::string out;
    if (!(w.origin == Point::zero(w.dim))) out += "@" + format_point(w.origin) + ";";
    for (std::size_t i = 0; i < w.steps.size(); ++i) {
        if (i) out += ",";
        out += w.steps[i].sign > 0 ? "+" : "-";
        out += std::to_string(int(w.steps[i].axis));
    }
    return out;
}

inline Walk parse_walk(const std::string& text, int dim) {
    std::string s = text;
    Point origin = Point::zero(dim);
    if (!s.empty() && s.front() == '@') {
        const std::size_t semi = s.find(';');
        if (semi == std::string::npos) throw std::invalid_argument("bad walk: missing ';' after origin");
        origin = parse_point(s.substr(1, semi - 1));
        if (origin.dim() != dim) throw std::invalid_argument("bad walk: origin dimension mismatch");
        s = s.substr(semi + 1);
    }
    std::vector<Step> steps;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t next = s.find(',', pos);
        if (next == std::string::npos) next = s.size();
        std::string tok = s.substr(pos, next - pos);
        while (!tok.empty() && tok.front() == ' ') tok.erase(tok.begin());
        while (!tok.empty() && tok.back() == ' ') tok.pop_back();
        if (tok.empty()) throw std::invalid_argument("bad walk: empty step token");
        int sign = +1;
        std::size_t off = 0;
        if (tok[0] == '+' || tok[0] == '-') {
            sign = tok[0] == '-' ? -1 : +1;
            off = 1;
        }
        std::size_t used = 0;
        const int axis = std::stoi(tok.substr(off), &used);
        if (used != tok.size() - off || axis < 1 || axis > dim)
            throw std::invalid_argument("bad walk: step token '" + tok + "'");
        steps.push_back(make_step(axis, sign));
        pos = next + 1;
    }
    return Walk(dim, std::move(origin), std::move(steps));
}

// Serialization of a positioned walk, usable as an exact identity key.
inline std::string walk_key(const Walk& w) {
    std::string k = std::to_string(w.dim) + "|" + format_point(w.origin) + "|";
    for (const Step& s : w.steps) k += static_cast<char>('a' + dir_code(s));
    return k;
}

}  // namespace saw
