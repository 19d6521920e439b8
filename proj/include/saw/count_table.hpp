#pragma once

#include "saw/lattice.hpp"
#include "saw/numeric.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace saw {

inline std::string key_to_string(const Point& p) { return format_point(p); }
inline std::string key_to_string(std::int64_t k) { return std::to_string(k); }
inline std::string key_to_string(const std::string& k) { return k; }

// Exact counts keyed by class, endpoint, or index. total is maintained as
// the sum of all entries.
template <class Key>
struct CountTable {
    std::map<Key, BigInt> entries;
    BigInt total = 0;

    void add(const Key& k, const BigInt& c = 1) {
        if (c < 0) throw std::invalid_argument("counts are nonnegative");
        entries[k] += c;
        total += c;
    }

    void merge(const CountTable& other) {
        for (const auto& [k, c] : other.entries) {
            entries[k] += c;
            total += c;
        }
    }

    const BigInt& count(const Key& k) const {
        static const BigInt zero = 0;
        auto it = entries.find(k);
        return it == entries.end() ? zero : it->second;
    }

    bool consistent() const {
        BigInt s = 0;
        for (const auto& [k, c] : entries) {
            if (c < 0) return false;
            s += c;
        }
        return s == total;
    }
};

// A count table read as an exact probability law: P(k) = entries[k]/total.
template <class Key>
struct Distribution {
    CountTable<Key> table;

    Rational prob(const Key& k) const {
        if (table.total == 0) throw std::logic_error("distribution over empty set");
        return Rational(table.count(k), table.total);
    }

    // Largest atom; ties resolved toward the smallest key.
    std::pair<Key, Rational> sup() const {
        if (table.total == 0) throw std::logic_error("distribution over empty set");
        const Key* arg = nullptr;
        const BigInt* best = nullptr;
        for (const auto& [k, c] : table.entries) {
            if (!best || c > *best) {
                best = &c;
                arg = &k;
            }
        }
        return {*arg, Rational(*best, table.total)};
    }

    bool sums_to_one() const {
        return table.total > 0 && table.consistent();
    }
};

}  // namespace saw
