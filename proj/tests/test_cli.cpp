// End-to-end tests of the saw binary. The path to the built tool is supplied
// by the build system via the SAW_CLI environment variable.

#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

using nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const char* bin = std::getenv("SAW_CLI");
    REQUIRE(bin != nullptr);
    const std::string cmd = std::string(bin) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    std::array<char, 4096> buf{};
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("enumerate count matches the known value and echoes its config") {
    const auto r = run_cli("enumerate --dim 2 -n 4 --class walk --report count");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("total") == "100");
    CHECK(j.at("config").at("subcommand") == "enumerate");
    CHECK(j.at("config").at("flags").at("n") == 4);
    CHECK(j.at("class") == "walk");
}

TEST_CASE("enumerate hang report shows four entries of count 2 at n = 3") {
    const auto r = run_cli("enumerate --dim 2 -n 3 --class closing --report hang");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    REQUIRE(j.at("entries").size() == 4);
    for (const auto& e : j.at("entries")) CHECK(e.at("count") == "2");
}

TEST_CASE("closing probability report") {
    const auto r = run_cli("enumerate --dim 2 -n 3 --report closing");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("closing_probability") == "2/9");
}

TEST_CASE("csv format mirrors the json content") {
    const auto r = run_cli("enumerate --dim 2 -n 3 --class closing --report hang --format csv");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("# config:") == 0);
    CHECK(r.out.find("key,count") != std::string::npos);
    CHECK(r.out.find("\"0\",2") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
    CHECK(run_cli("enumerate --dim 2 -n -1 --report count").exit_code == 2);
    CHECK(run_cli("enumerate --dim 2 -n 3 --no-such-flag").exit_code == 2);
    CHECK(run_cli("enumerate --dim 2 -n 3 --report nonsense").exit_code == 2);
    CHECK(run_cli("nonsense").exit_code == 2);
}

TEST_CASE("infeasible sizes exit 3 unless forced") {
    CHECK(run_cli("enumerate --dim 2 -n 40 --report count").exit_code == 3);
    // forcing a modest overshoot still works
    const auto r = run_cli("enumerate --dim 2 -n 18 --class closing --report count --force");
    CHECK(r.exit_code == 0);
}

TEST_CASE("verify subcommand reports named checks and honors exit codes") {
    const auto ok = run_cli("verify --suite hypergeom --limit 12 --big-m 400");
    REQUIRE(ok.exit_code == 0);
    const json j = json::parse(ok.out);
    CHECK(j.at("pass") == true);
    CHECK(j.at("suites").at(0).at("suite") == "hypergeom");
    CHECK(j.at("suites").at(0).at("checks").size() >= 2);

    const auto bad = run_cli("verify --suite hypergeom --limit 12 --big-m 400 --inject-failure");
    REQUIRE(bad.exit_code == 1);
    const json jb = json::parse(bad.out);
    CHECK(jb.at("pass") == false);
    bool named = false;
    for (const auto& c : jb.at("suites").at(0).at("checks"))
        if (c.at("pass") == false) named = true;
    CHECK(named);
}

TEST_CASE("verify mvm suite runs the audits at reduced size") {
    const auto r = run_cli("verify --suite mvm -n 8 -M 2 --n-unfold 6");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("pass") == true);
}

TEST_CASE("verify runs every suite and exits 0 on a correct build") {
    // the default suite set, at reduced sizes to keep the test quick
    const auto r = run_cli(
        "verify --suite mvm --suite unfold --suite hang --suite growth --suite hypergeom "
        "-n 8 -M 2 --n-unfold 6 --n-hang 9 --n-max 12 --limit 16 --big-m 1000");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("pass") == true);
    CHECK(j.at("suites").size() == 5);
}

TEST_CASE("endpoint and midpoint reports carry the sup atom") {
    const auto e = run_cli("enumerate --dim 2 -n 2 --report endpoint");
    REQUIRE(e.exit_code == 0);
    const json je = json::parse(e.out);
    CHECK(je.at("sup").at("prob") == "1/6");
    CHECK(je.at("total") == "12");

    const auto m = run_cli("enumerate --dim 2 -n 3 --report midpoint");
    REQUIRE(m.exit_code == 0);
    const json jm = json::parse(m.out);
    CHECK(jm.at("sup").at("prob") == "1/4");

    const auto s = run_cli("enumerate --dim 2 -n 4 --report series --j-max 3 --mu 2.8");
    REQUIRE(s.exit_code == 0);
    const json js = json::parse(s.out);
    CHECK(js.at("bridge_counts").size() == 3);
    CHECK(js.at("bridge_counts").at(0) == "3");
}

TEST_CASE("sample runs are reproducible byte for byte") {
    const std::string f1 = "/tmp/saw_stats_a.json", f2 = "/tmp/saw_stats_b.json";
    const std::string args =
        "sample --ladder 32,64 --samples 400 --seed 9 --chains 2 --bootstrap 20 -o ";
    REQUIRE(run_cli(args + f1).exit_code == 0);
    REQUIRE(run_cli(args + f2).exit_code == 0);
    const std::string a = slurp(f1), b = slurp(f2);
    REQUIRE(!a.empty());
    CHECK(a == b);

    const json j = json::parse(a);
    CHECK(j.at("config").at("flags").at("seed") == 9);
    CHECK(j.at("ladder").size() == 2);
    for (const auto& e : j.at("ladder")) {
        CHECK(e.at("msd_mean").is_number());
        CHECK(e.at("msd_bound_ok") == true);
    }
    CHECK(j.contains("two_nu_hat"));
    std::remove(f1.c_str());
    std::remove(f2.c_str());
}

TEST_CASE("sample walk dump emits parsable walks") {
    const std::string dump = "/tmp/saw_dump.txt";
    const auto r = run_cli("sample --ladder 16 --samples 25 --seed 4 --chains 1 --bootstrap 5 "
                           "--dump-walks " + dump + " -o /tmp/saw_dump_stats.json");
    REQUIRE(r.exit_code == 0);
    std::ifstream in(dump);
    REQUIRE(in.good());
    std::string line;
    int count = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++count;
        CHECK(line.find('1') != std::string::npos);  // textual steps mention an axis
    }
    CHECK(count == 25);
    std::remove(dump.c_str());
    std::remove("/tmp/saw_dump_stats.json");
}

TEST_CASE("report growth and polygon kinds") {
    const auto g = run_cli("report --kind growth --n-max 10");
    REQUIRE(g.exit_code == 0);
    const json jg = json::parse(g.out);
    CHECK(jg.at("submultiplicative") == true);
    CHECK(jg.at("counts").at(4) == "100");

    const auto p = run_cli("report --kind polygon -n 5");
    REQUIRE(p.exit_code == 0);
    const json jp = json::parse(p.out);
    CHECK(jp.at("closing_count") == "24");
    CHECK(jp.at("multiplicity") == "6");

    const auto d = run_cli("report --kind deficit -n 1 -M 1");
    REQUIRE(d.exit_code == 0);
    CHECK(json::parse(d.out).at("deficit") == "1");

    const auto s = run_cli("report --kind score --walk +1 --n-total 3");
    REQUIRE(s.exit_code == 0);
    CHECK(json::parse(s.out).at("score") == "1/2");

    const auto t = run_cli("report --kind ticked --walk +1,+2,-1 --n-ref 3 --threshold 2/1");
    REQUIRE(t.exit_code == 0);
    CHECK(json::parse(t.out).at("ticked_indices").empty());
}
