#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace saw {

enum class Ordering { LT, EQ, GT };

// A point of Z^d. Coordinate 0 is the vertical (e_1) direction; axes are
// 1-based in the public interface to match the usual e_1..e_d naming.
struct Point {
    std::vector<std::int32_t> c;

    Point() = default;
    explicit Point(std::vector<std::int32_t> coords) : c(std::move(coords)) {}

    int dim() const { return static_cast<int>(c.size()); }
    std::int32_t height() const { return c[0]; }  // <x|e_1>

    static Point zero(int d) { return Point(std::vector<std::int32_t>(d, 0)); }
    static Point unit(int d, int axis, std::int32_t sign = 1) {
        Point p = zero(d);
        p.c[axis - 1] = sign;
        return p;
    }

    bool operator==(const Point&) const = default;
    // Ordering for use as a map key: dimension first, then lexicographic.
    bool operator<(const Point& o) const {
        if (c.size() != o.c.size()) return c.size() < o.c.size();
        return c < o.c;
    }
};

inline void require_same_dim(const Point& p, const Point& q) {
    if (p.dim() != q.dim()) throw std::invalid_argument("point dimension mismatch");
}

inline Point operator+(const Point& p, const Point& q) {
    require_same_dim(p, q);
    Point r = p;
    for (int i = 0; i < p.dim(); ++i) r.c[i] += q.c[i];
    return r;
}

inline Point operator-(const Point& p, const Point& q) {
    require_same_dim(p, q);
    Point r = p;
    for (int i = 0; i < p.dim(); ++i) r.c[i] -= q.c[i];
    return r;
}

inline std::int64_t l1_norm(const Point& p) {
    std::int64_t s = 0;
    for (auto v : p.c) s += std::abs(v);
    return s;
}

inline std::int64_t squared_norm(const Point& p) {
    std::int64_t s = 0;
    for (auto v : p.c) s += std::int64_t(v) * v;
    return s;
}

inline bool adjacent(const Point& p, const Point& q) { return l1_norm(p - q) == 1; }

inline Ordering lex_compare(const Point& p, const Point& q) {
    require_same_dim(p, q);
    for (int i = 0; i < p.dim(); ++i) {
        if (p.c[i] < q.c[i]) return Ordering::LT;
        if (p.c[i] > q.c[i]) return Ordering::GT;
    }
    return Ordering::EQ;
}

inline bool lex_less(const Point& p, const Point& q) { return lex_compare(p, q) == Ordering::LT; }

// R_z(x) = x + 2<z-x|e_1> e_1: reflection across the hyperplane through z
// orthogonal to e_1.
inline Point reflect_e1(const Point& z, const Point& x) {
    require_same_dim(z, x);
    Point r = x;
    r.c[0] = 2 * z.c[0] - x.c[0];
    return r;
}

// pi_1(x) = x - <x|e_1> e_1: orthogonal projection onto the hyperplane H.
inline Point project_h(Point x) {
    x.c[0] = 0;
    return x;
}

// A unit step +-e_axis. Axis is 1-based and must lie in [1, d].
struct Step {
    std::int8_t axis;  // in [1, d]
    std::int8_t sign;  // +1 or -1

    bool operator==(const Step&) const = default;
};

inline Step make_step(int axis, int sign) {
    if (axis < 1 || axis > 127 || (sign != 1 && sign != -1))
        throw std::invalid_argument("bad step");
    return Step{static_cast<std::int8_t>(axis), static_cast<std::int8_t>(sign)};
}

inline void check_step(const Step& s, int dim) {
    if (s.axis < 1 || s.axis > dim || (s.sign != 1 && s.sign != -1))
        throw std::invalid_argument("step axis/sign out of range");
}

// Dense direction codes 0..2d-1: code = 2*(axis-1) + (sign < 0).
inline int dir_code(const Step& s) { return 2 * (s.axis - 1) + (s.sign < 0 ? 1 : 0); }
inline Step step_from_code(int code) {
    return Step{static_cast<std::int8_t>(code / 2 + 1), static_cast<std::int8_t>(code % 2 ? -1 : +1)};
}

inline Point step_offset(const Step& s, int dim) {
    check_step(s, dim);
    return Point::unit(dim, s.axis, s.sign);
}

// Textual form: "(1,-2)".
inline std::string format_point(const Point& p) {
    std::string out = "(";
    for (int i = 0; i < p.dim(); ++i) {
        if (i) out += ",";
        out += std::to_string(p.c[i]);
    }
    return out + ")";
}

inline Point parse_point(const std::string& s) {
    if (s.size() < 2 || s.front() != '(' || s.back() != ')')
        throw std::invalid_argument("bad point: " + s);
    Point p;
    std::size_t pos = 1;
    const std::size_t end = s.size() - 1;
    while (pos < end) {
        std::size_t next = s.find(',', pos);
        if (next == std::string::npos || next > end) next = end;
        std::size_t used = 0;
        const std::string tok = s.substr(pos, next - pos);
        const long v = std::stol(tok, &used);
        if (used != tok.size()) throw std::invalid_argument("bad point: " + s);
        p.c.push_back(static_cast<std::int32_t>(v));
        pos = next + 1;
    }
    if (p.dim() == 0) throw std::invalid_argument("bad point: " + s);
    return p;
}

}  // namespace saw
