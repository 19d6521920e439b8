// saw: command-line front end for the self-avoiding walk laboratory.
//
// Subcommands: enumerate, verify, sample, report. All output is JSON (or a
// CSV mirror) with the invoking configuration echoed into the file so every
// run is reproducible from its own output. Exit codes: 0 success,
// 1 verification failure, 2 usage error, 3 infeasible request.

#include "saw/report.hpp"
#include "saw/saw.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text << std::endl;
    } else {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open output file: " + path);
        out << text << "\n";
    }
}

void emit_json(const json& j, const std::string& path) { emit(j.dump(2), path); }

// Exact-enumeration feasibility table, per class; --force overrides.
int feasibility_limit(int dim, saw::WalkClass cls) {
    struct Row {
        int walk, halfspace, bridge, closing;
    };
    Row row{};
    if (dim == 2) row = {17, 18, 20, 21};
    else if (dim == 3) row = {11, 12, 13, 14};
    else row = {8, 9, 10, 10};
    switch (cls) {
        case saw::WalkClass::walk: return row.walk;
        case saw::WalkClass::halfspace: return row.halfspace;
        case saw::WalkClass::bridge: return row.bridge;
        case saw::WalkClass::closing: return row.closing;
    }
    return row.walk;
}

struct CommonFlags {
    int dim = 2;
    unsigned threads = 0;
    std::string format = "json";
    std::string output;
    bool force = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--dim", f.dim, "lattice dimension d >= 2")->check(CLI::Range(2, 6));
    cmd->add_option("--threads", f.threads, "worker threads (0 = all available)");
    cmd->add_option("--format", f.format, "output format")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("-o,--output", f.output, "output path (default: stdout)");
    cmd->add_flag("--force", f.force, "bypass the feasibility guard rails");
}

json config_echo(const std::string& subcommand, const json& flags) {
    json j{{"tool", "saw"}, {"subcommand", subcommand}, {"flags", flags}};
    return j;
}

int run_enumerate_cmd(const CommonFlags& common, int n, const std::string& cls_name,
                      const std::string& report, int j_max, double mu) {
    const saw::ExecPolicy pol{common.threads, 6};
    const saw::WalkClass cls =
        report == "hang" ? saw::WalkClass::closing : saw::walk_class_from_string(cls_name);
    if (n < 0) throw CLI::ValidationError("-n must be >= 0");
    const int limit = feasibility_limit(common.dim, cls);
    if (!common.force && n > limit) {
        std::cerr << "refusing n = " << n << " for class " << saw::to_string(cls) << " at d = "
                  << common.dim << " (limit " << limit << "); pass --force to override\n";
        return kExitInfeasible;
    }

    const json cfg = config_echo(
        "enumerate", json{{"dim", common.dim}, {"n", n}, {"class", saw::to_string(cls)},
                          {"report", report}, {"threads", common.threads}, {"j_max", j_max},
                          {"mu", mu}, {"format", common.format}});

    json body;
    std::optional<std::string> csv;
    if (report == "count") {
        saw::CountTable<std::string> t;
        t.add(saw::to_string(cls), saw::count_class(common.dim, n, cls, pol));
        body = saw::report::to_json(t);
        csv = saw::report::to_csv(t, cfg.dump());
    } else if (report == "endpoint" || report == "midpoint") {
        const auto dist = report == "endpoint" ? saw::endpoint_distribution(common.dim, n, pol)
                                               : saw::midpoint_distribution(common.dim, n, pol);
        body = saw::report::to_json(dist);
        csv = saw::report::to_csv(dist.table, cfg.dump());
    } else if (report == "hang") {
        const auto dist = saw::hang_histogram_closing(common.dim, n, pol);
        body = saw::report::to_json(dist);
        csv = saw::report::to_csv(dist.table, cfg.dump());
    } else if (report == "closing") {
        const saw::Rational p = saw::closing_probability(common.dim, n, pol);
        body = json{{"closing_probability", saw::to_string(p)},
                    {"value", saw::to_double(p)}};
        csv = "# config: " + cfg.dump() + "\nkey,value\nclosing_probability," +
              saw::to_string(p) + "\n";
    } else if (report == "series") {
        if (!common.force && 2 * j_max > feasibility_limit(common.dim, saw::WalkClass::bridge)) {
            std::cerr << "refusing bridge series through length " << 2 * j_max
                      << "; pass --force to override\n";
            return kExitInfeasible;
        }
        double mu_used = mu;
        if (mu_used <= 0)
            mu_used = saw::growth_checks(common.dim, std::min(n > 1 ? n : 16, limit), pol)
                          .params.mu_hat;
        const auto series = saw::bridge_series(common.dim, mu_used, j_max, pol);
        body = saw::report::to_json(series);
        std::string c = "# config: " + cfg.dump() + "\nj,bridge_count,partial_sum\n";
        for (std::size_t j = 0; j < series.bridge_counts.size(); ++j)
            c += std::to_string(j + 1) + "," + saw::to_string(series.bridge_counts[j]) + "," +
                 std::to_string(series.partial_sums[j]) + "\n";
        csv = c;
    } else {
        throw CLI::ValidationError("unknown --report kind: " + report);
    }

    if (common.format == "csv") {
        emit(*csv, common.output);
    } else {
        json out{{"config", cfg}, {"dim", common.dim}, {"n", n}, {"class", saw::to_string(cls)},
                 {"report", report}};
        out.update(body);
        emit_json(out, common.output);
    }
    return kExitOk;
}

int run_report_cmd(const CommonFlags& common, const std::string& kind, int n, int n_max, int M,
                   int j_max, const std::string& walk_text, int n_total, int n_ref,
                   const std::string& threshold) {
    const saw::ExecPolicy pol{common.threads, 6};
    const json cfg = config_echo(
        "report", json{{"kind", kind}, {"dim", common.dim}, {"n", n}, {"n_max", n_max}, {"M", M},
                       {"j_max", j_max}, {"walk", walk_text}, {"n_total", n_total},
                       {"n_ref", n_ref}, {"threshold", threshold}});
    const int walk_limit = feasibility_limit(common.dim, saw::WalkClass::walk);

    json body;
    if (kind == "growth") {
        if (!common.force && n_max > walk_limit) return kExitInfeasible;
        body = saw::report::to_json(saw::growth_checks(common.dim, n_max, pol));
    } else if (kind == "polygon") {
        if (!common.force && n > feasibility_limit(common.dim, saw::WalkClass::closing))
            return kExitInfeasible;
        body = saw::report::to_json(saw::polygon_identity_check(common.dim, n, pol));
    } else if (kind == "deficit") {
        if (!common.force && n > feasibility_limit(common.dim, saw::WalkClass::bridge))
            return kExitInfeasible;
        const saw::Rational d = saw::z_renewal_deficit(common.dim, n, M, pol);
        body = json{{"deficit", saw::to_string(d)}, {"value", saw::to_double(d)},
                    {"M", M}, {"n", n}};
    } else if (kind == "score") {
        if (!common.force && n_total > walk_limit) return kExitInfeasible;
        const saw::Walk gamma = saw::parse_walk(walk_text, common.dim);
        const auto s = saw::closing_score(gamma, n_total, pol);
        body = json{{"defined", s.has_value()}};
        if (s) {
            body["score"] = saw::to_string(*s);
            body["value"] = saw::to_double(*s);
        }
    } else if (kind == "ticked") {
        if (!common.force && n_ref > walk_limit) return kExitInfeasible;
        const saw::Walk w = saw::parse_walk(walk_text, common.dim);
        const auto idx = saw::ticked_indices(w, n_ref, saw::parse_rational(threshold), pol);
        body = json{{"ticked_indices", idx}};
    } else {
        throw CLI::ValidationError("unknown --kind: " + kind);
    }
    json out{{"config", cfg}};
    out.update(body);
    emit_json(out, common.output);
    return kExitOk;
}

int run_verify_cmd(const CommonFlags& common, std::vector<std::string> suites, int n_insert,
                   int M, int n_unfold, int n_hang, int n_max, int j_max, int limit,
                   std::int64_t big_m, bool inject_failure) {
    const saw::ExecPolicy pol{common.threads, 6};
    if (suites.empty()) suites = {"mvm", "unfold", "hang", "growth", "hypergeom"};
    std::vector<saw::verify::SuiteResult> results;
    for (const std::string& s : suites) {
        if (s == "mvm") results.push_back(saw::verify::suite_mvm(common.dim, n_insert, M, n_unfold, pol));
        else if (s == "unfold") results.push_back(saw::verify::suite_unfold(common.dim, n_unfold, pol));
        else if (s == "hang") results.push_back(saw::verify::suite_hang(common.dim, n_hang, pol));
        else if (s == "growth") results.push_back(saw::verify::suite_growth(common.dim, n_max, j_max, pol));
        else if (s == "hypergeom") results.push_back(saw::verify::suite_hypergeom(limit, big_m));
        else throw CLI::ValidationError("unknown suite: " + s);
    }
    if (inject_failure && !results.empty() && !results[0].checks.empty()) {
        results[0].checks[0].pass = false;
        results[0].checks[0].detail = "corrupted by --inject-failure";
    }
    bool all = true;
    json jsuites = json::array();
    for (const auto& r : results) {
        json checks = json::array();
        for (const auto& c : r.checks)
            checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        jsuites.push_back({{"suite", r.suite}, {"pass", r.all_pass()}, {"checks", checks}});
        all = all && r.all_pass();
    }
    const json cfg = config_echo(
        "verify", json{{"dim", common.dim}, {"suites", suites}, {"n_insert", n_insert}, {"M", M},
                       {"n_unfold", n_unfold}, {"n_hang", n_hang}, {"n_max", n_max},
                       {"j_max", j_max}, {"limit", limit}, {"big_m", big_m}});
    emit_json(json{{"config", cfg}, {"pass", all}, {"suites", jsuites}}, common.output);
    if (!all) {
        for (const auto& r : results)
            for (const auto& c : r.checks)
                if (!c.pass) std::cerr << "FAILED: " << r.suite << "/" << c.name << "\n";
    }
    return all ? kExitOk : kExitVerifyFailed;
}

int run_sample_cmd(const CommonFlags& common, std::vector<int> ladder, std::int64_t samples,
                   std::uint64_t seed, int chains, std::int64_t warmup, std::int64_t thinning,
                   int bootstrap, const std::string& dump_walks) {
    saw::sampler::ExponentConfig cfg;
    cfg.dim = common.dim;
    cfg.ladder = std::move(ladder);
    cfg.samples_per_n = samples;
    cfg.seed = seed;
    cfg.chains = chains;
    cfg.warmup_pivots = warmup;
    cfg.thinning = thinning;
    cfg.bootstrap = bootstrap;
    cfg.threads = common.threads;

    if (!dump_walks.empty()) {
        if (cfg.ladder.size() != 1)
            throw CLI::ValidationError("--dump-walks requires a single-entry --ladder");
        saw::sampler::PivotConfig pc;
        pc.dim = cfg.dim;
        pc.n = cfg.ladder[0];
        pc.seed = seed;
        pc.warmup_pivots = warmup;
        pc.thinning = thinning;
        pc.samples = samples;
        std::ofstream out(dump_walks, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open dump file: " + dump_walks);
        saw::sampler::pivot_sample(pc, [&](const saw::Walk& w) { out << format_walk(w) << "\n"; });
    }

    const saw::sampler::SampleStats stats = saw::sampler::estimate_exponents(cfg);
    const json cfgj = config_echo(
        "sample", json{{"dim", cfg.dim}, {"ladder", cfg.ladder}, {"samples", cfg.samples_per_n},
                       {"seed", cfg.seed}, {"chains", cfg.chains}, {"warmup", warmup},
                       {"thinning", thinning}, {"bootstrap", bootstrap}});
    json out{{"config", cfgj}};
    out.update(saw::report::to_json(stats));
    emit_json(out, common.output);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"self-avoiding walk laboratory"};
    app.require_subcommand(1);

    // enumerate
    CommonFlags ef;
    int e_n = 0, e_jmax = 7;
    double e_mu = 0;
    std::string e_class = "walk", e_report = "count";
    CLI::App* enumerate = app.add_subcommand("enumerate", "exact enumeration reports");
    add_common(enumerate, ef);
    enumerate->add_option("-n", e_n, "walk length")->required();
    enumerate->add_option("--class", e_class, "walk class")
        ->check(CLI::IsMember({"walk", "bridge", "halfspace", "closing"}));
    enumerate->add_option("--report", e_report, "report kind")
        ->check(CLI::IsMember({"count", "endpoint", "midpoint", "hang", "closing", "series"}));
    enumerate->add_option("--j-max", e_jmax, "series length for --report series");
    enumerate->add_option("--mu", e_mu, "growth constant for --report series (0: fit)");

    // report
    CommonFlags rf;
    std::string r_kind = "growth", r_walk, r_threshold = "0";
    int r_n = 5, r_nmax = 12, r_M = 1, r_jmax = 7, r_ntotal = 8, r_nref = 8;
    CLI::App* report = app.add_subcommand("report", "composite analysis reports");
    add_common(report, rf);
    report->add_option("--kind", r_kind, "report kind")
        ->check(CLI::IsMember({"growth", "polygon", "deficit", "score", "ticked"}));
    report->add_option("-n", r_n, "walk length (polygon, deficit)");
    report->add_option("--n-max", r_nmax, "sweep limit (growth)");
    report->add_option("-M", r_M, "z-renewal threshold (deficit)");
    report->add_option("--j-max", r_jmax, "series length");
    report->add_option("--walk", r_walk, "walk in textual form (score, ticked)");
    report->add_option("--n-total", r_ntotal, "ambient length (score)");
    report->add_option("--n-ref", r_nref, "reference length (ticked)");
    report->add_option("--threshold", r_threshold, "rational threshold p/q (ticked)");

    // verify
    CommonFlags vf;
    std::vector<std::string> v_suites;
    int v_ninsert = 10, v_M = 2, v_nunfold = 8, v_nhang = 13, v_nmax = 16, v_jmax = 7,
        v_limit = 60;
    std::int64_t v_bigm = 10000;
    bool v_inject = false;
    CLI::App* verify = app.add_subcommand("verify", "run verification suites");
    add_common(verify, vf);
    verify->add_option("--suite", v_suites, "suites to run (default: all)")
        ->check(CLI::IsMember({"mvm", "unfold", "hang", "growth", "hypergeom"}));
    verify->add_option("-n,--n-insert", v_ninsert, "length for the insert-z audit");
    verify->add_option("-M", v_M, "preimage bound for the insert-z audit");
    verify->add_option("--n-unfold", v_nunfold, "length for unfold checks");
    verify->add_option("--n-hang", v_nhang, "largest odd length for hang uniformity");
    verify->add_option("--n-max", v_nmax, "sweep limit for growth checks");
    verify->add_option("--j-max", v_jmax, "bridge series length");
    verify->add_option("--limit", v_limit, "hypergeometric normalization sweep limit");
    verify->add_option("--big-m", v_bigm, "m for the Gaussian comparison");
    verify->add_flag("--inject-failure", v_inject, "corrupt one check (harness test)")
        ->group("");  // hidden

    // sample
    CommonFlags sf;
    std::vector<int> s_ladder{200, 400, 800, 1600};
    std::int64_t s_samples = 10000, s_warmup = -1, s_thinning = -1;
    std::uint64_t s_seed = 1;
    int s_chains = 4, s_bootstrap = 200;
    std::string s_dump;
    CLI::App* sample = app.add_subcommand("sample", "pivot Monte Carlo estimates");
    add_common(sample, sf);
    sample->add_option("--ladder", s_ladder, "walk lengths to sample")->delimiter(',');
    sample->add_option("--samples", s_samples, "samples per ladder entry");
    sample->add_option("--seed", s_seed, "RNG seed (recorded in output)");
    sample->add_option("--chains", s_chains, "independent chains per ladder entry");
    sample->add_option("--warmup", s_warmup, "accepted pivots before sampling (-1: 10n)");
    sample->add_option("--thinning", s_thinning, "proposals between samples (-1: n/10)");
    sample->add_option("--bootstrap", s_bootstrap, "bootstrap resamples for the fit error");
    sample->add_option("--dump-walks", s_dump, "write sampled walks, one per line");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints help or error text
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*enumerate) return run_enumerate_cmd(ef, e_n, e_class, e_report, e_jmax, e_mu);
        if (*report)
            return run_report_cmd(rf, r_kind, r_n, r_nmax, r_M, r_jmax, r_walk, r_ntotal, r_nref,
                                  r_threshold);
        if (*verify)
            return run_verify_cmd(vf, v_suites, v_ninsert, v_M, v_nunfold, v_nhang, v_nmax,
                                  v_jmax, v_limit, v_bigm, v_inject);
        if (*sample)
            return run_sample_cmd(sf, s_ladder, s_samples, s_seed, s_chains, s_warmup, s_thinning,
                                  s_bootstrap, s_dump);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
