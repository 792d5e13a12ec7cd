#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "json.hpp"

#include "blockadelab/core.hpp"

using nlohmann::json;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
};

// runs the CLI binary with stderr silenced; stdout captured
CliResult run_cli(const std::string& args, const std::string& stdin_file = "") {
    std::string cmd = std::string(BLOCKADELAB_CLI_PATH) + " " + args;
    if (!stdin_file.empty()) cmd += " < " + stdin_file;
    cmd += " 2>/dev/null";
    CliResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf;
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) res.out.append(buf.data(), got);
    int status = pclose(pipe);
    res.exit_code = WEXITSTATUS(status);
    return res;
}

std::string temp_file(const std::string& name, const std::string& content) {
    std::string path = std::string("/tmp/blockadelab_test_") + name;
    std::ofstream out(path);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("cli: catalog piped into mwis reproduces the NOR language file") {
    auto cat = run_cli("catalog nor");
    REQUIRE(cat.exit_code == 0);
    auto path = temp_file("nor.json", cat.out);
    auto mw = run_cli("mwis -", path);
    CHECK(mw.exit_code == 0);
    CHECK(mw.out == "00100\n01001\n10010\n11000\n");
}

TEST_CASE("cli: or gate language") {
    auto cat = run_cli("catalog or");
    auto path = temp_file("or.json", cat.out);
    auto mw = run_cli("mwis " + path);
    CHECK(mw.exit_code == 0);
    CHECK(mw.out == "001000\n010011\n100101\n110001\n");
    // the port projection is checked through the fullsym report below
    auto fs = run_cli("fullsym " + path);
    json j = json::parse(fs.out);
    CHECK(j.at("port_language") == json::array({"000", "011", "101", "111"}));
}

TEST_CASE("cli: fullsym verdicts") {
    auto icrs = run_cli("catalog icrs");
    auto p1 = temp_file("icrs.json", icrs.out);
    auto v1 = run_cli("fullsym " + p1);
    REQUIRE(v1.exit_code == 0);
    json j1 = json::parse(v1.out);
    CHECK(j1.at("fully_symmetric") == true);
    CHECK(j1.at("orbit_count") == 1);

    auto nor = run_cli("catalog nor");
    auto p2 = temp_file("nor2.json", nor.out);
    auto v2 = run_cli("fullsym " + p2);
    json j2 = json::parse(v2.out);
    CHECK(j2.at("fully_symmetric") == false);
    CHECK(j2.at("orbit_count") == 3);
    CHECK(j2.at("aut_order") == 2);
}

TEST_CASE("cli: aut on a single vertex and error paths") {
    auto p = temp_file("one.json", R"({"n":1,"edges":[],"weights":[1]})");
    auto v = run_cli("aut " + p);
    REQUIRE(v.exit_code == 0);
    CHECK(json::parse(v.out).at("order") == 1);

    // unknown subcommand: usage error
    CHECK(run_cli("frobnicate").exit_code == 1);
    // malformed document: validation error
    auto bad = temp_file("bad.json", "{\"nonsense\":true}");
    CHECK(run_cli("mwis " + bad).exit_code == 1);
    // resource-cap refusal is a distinct exit code
    json big;
    big["n"] = 70;
    big["edges"] = json::array();
    big["weights"] = std::vector<int>(70, 1);
    auto too_big = temp_file("big.json", big.dump());
    CHECK(run_cli("mwis " + too_big).exit_code == 2);
}

TEST_CASE("cli: deterministic byte-identical outputs") {
    for (const std::string args : {"catalog fsu", "tessellate loop --nx 2 --ny 2 --plaquettes",
                                   "tessellate zeng --nx 2 --ny 2"}) {
        auto a = run_cli(args);
        auto b = run_cli(args);
        CHECK(a.exit_code == 0);
        CHECK(a.out == b.out);
    }
}

TEST_CASE("cli: spectrum CSV format") {
    auto cat = run_cli("catalog icrs");
    auto p = temp_file("icrs_sp.json", cat.out);
    auto sp = run_cli("spectrum " + p + " --omega 0.1 --levels 5");
    REQUIRE(sp.exit_code == 0);
    CHECK(sp.out.rfind("level,energy,degeneracy", 0) == 0);
    int lines = 0;
    for (char c : sp.out) lines += (c == '\n');
    CHECK(lines == 6);  // header + 5 levels
    // 17 significant digits survive a JSON round-trip of the report
    auto rep_path = std::string("/tmp/blockadelab_test_icrs_rep.json");
    auto sp2 = run_cli("spectrum " + p + " --omega 0.1 --levels 5 --report " + rep_path);
    REQUIRE(sp2.exit_code == 0);
    std::ifstream in(rep_path);
    json rep = json::parse(in);
    CHECK(rep.at("equal_weight") == true);
    CHECK(rep.at("unique_ground") == true);
}

TEST_CASE("cli: quotient and embed-check") {
    auto z = run_cli("tessellate zeng --nx 3 --ny 3");
    auto p = temp_file("zeng.json", z.out);
    auto q = run_cli("quotient " + p + " --check-aut");
    REQUIRE(q.exit_code == 0);
    json j = json::parse(q.out);
    CHECK(j.at("aut_preserved") == true);
    CHECK(j.at("quotient").at("n") == 27);

    auto e = run_cli("embed-check all");
    REQUIRE(e.exit_code == 0);
    for (const auto& r : json::parse(e.out)) CHECK(r.at("margin_ok") == true);
}

TEST_CASE("cli: effective hamiltonian report") {
    auto cat = run_cli("catalog nor");
    auto p = temp_file("nor_eff.json", cat.out);
    auto eff = run_cli("effective " + p + " --omega 0.03 --order 2");
    REQUIRE(eff.exit_code == 0);
    json j = json::parse(eff.out);
    CHECK(j.at("order") == 2);
    CHECK(j.at("basis").size() == 4);
    CHECK(j.at("matrix").size() == 4);
}
