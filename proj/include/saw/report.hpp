#pragma once

#include "saw/count_table.hpp"
#include "saw/enumerate.hpp"
#include "saw/numeric.hpp"
#include "saw/patterns.hpp"
#include "saw/sampler.hpp"

#include <json.hpp>

#include <string>

namespace saw::report {

using nlohmann::json;

// Counts are serialized as decimal strings so reports stay exact.
template <class Key>
json to_json(const CountTable<Key>& t) {
    json entries = json::array();
    for (const auto& [k, c] : t.entries)
        entries.push_back({{"key", key_to_string(k)}, {"count", saw::to_string(c)}});
    return json{{"total", saw::to_string(t.total)}, {"entries", entries}};
}

template <class Key>
json to_json(const Distribution<Key>& d) {
    json j = to_json(d.table);
    if (d.table.total > 0) {
        const auto [key, prob] = d.sup();
        j["sup"] = {{"key", key_to_string(key)},
                    {"count", saw::to_string(d.table.count(key))},
                    {"prob", saw::to_string(prob)}};
    }
    return j;
}

inline json to_json(const PolygonIdentityReport& r) {
    json j{{"dim", r.dim},
           {"n", r.n},
           {"closing_count", saw::to_string(r.closing_count)},
           {"polygon_key_count", saw::to_string(r.polygon_key_count)},
           {"matches_n_plus_1", r.matches_n_plus_1}};
    if (r.multiplicity) j["multiplicity"] = saw::to_string(*r.multiplicity);
    return j;
}

inline json to_json(const GrowthReport& r) {
    json counts = json::array();
    for (const auto& c : r.counts) counts.push_back(saw::to_string(c));
    return json{{"dim", r.dim},
                {"n_max", r.n_max},
                {"counts", counts},
                {"submultiplicative", r.submultiplicative},
                {"first_violation", r.first_violation},
                {"mu_hat", r.params.mu_hat},
                {"c_hw_hat", r.params.c_hw_hat}};
}

inline json to_json(const BridgeSeriesReport& r) {
    json counts = json::array();
    for (const auto& c : r.bridge_counts) counts.push_back(saw::to_string(c));
    return json{{"dim", r.dim}, {"mu", r.mu}, {"bridge_counts", counts},
                {"partial_sums", r.partial_sums}};
}

inline json to_json(const sampler::SampleStats& s) {
    json ladder = json::array();
    for (const auto& lp : s.ladder) {
        json e{{"n", lp.n},
               {"samples", lp.samples},
               {"msd_mean", lp.msd_mean},
               {"acceptance_rate", lp.acceptance_rate},
               {"probe_density", lp.probe_density},
               {"msd_lower_bound", lp.msd_lower_bound},
               {"msd_bound_ok", lp.msd_bound_ok}};
        if (!lp.endpoint_hist.empty()) {
            json hist = json::array();
            for (const auto& [p, c] : lp.endpoint_hist)
                hist.push_back({{"key", format_point(p)}, {"count", std::to_string(c)}});
            e["endpoint_hist"] = hist;
        }
        ladder.push_back(e);
    }
    json j{{"ladder", ladder},
           {"mean_probe_density", s.mean_probe_density},
           {"all_msd_bounds_ok", s.all_msd_bounds_ok}};
    if (s.fit_valid) {
        j["two_nu_hat"] = s.two_nu_hat;
        j["two_nu_stderr"] = s.two_nu_stderr;
    }
    return j;
}

// CSV mirror of a count table: config echoed as a leading comment, then
// key,count rows.
template <class Key>
std::string to_csv(const CountTable<Key>& t, const std::string& config_line) {
    std::string out = "# config: " + config_line + "\n";
    out += "key,count\n";
    for (const auto& [k, c] : t.entries) {
        std::string key = key_to_string(k);
        // keys may contain commas: quote them
        out += "\"" + key + "\"," + saw::to_string(c) + "\n";
    }
    return out;
}

inline json pattern_pair_to_json(const patterns::PatternPair& pp) {
    return json{{"dim", pp.dim},
                {"cube_side", pp.cube_side},
                {"chi_i", format_walk(pp.chi_i)},
                {"chi_ii", format_walk(pp.chi_ii)}};
}

inline patterns::PatternPair pattern_pair_from_json(const json& j) {
    patterns::PatternPair pp;
    pp.dim = j.at("dim").get<int>();
    pp.cube_side = j.at("cube_side").get<int>();
    pp.chi_i = parse_walk(j.at("chi_i").get<std::string>(), pp.dim);
    pp.chi_ii = parse_walk(j.at("chi_ii").get<std::string>(), pp.dim);
    return pp;
}

}  // namespace saw::report
