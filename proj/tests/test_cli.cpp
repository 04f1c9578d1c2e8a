#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "elemrank/cli.hpp"

using namespace elemrank;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("ord subcommands") {
    CliRun r = cli({"ord", "eval", "w*2 + (2+w)"});
    CHECK(r.code == 0);
    CHECK(r.out == "w*3\n");
    CHECK(cli({"ord", "cmp", "w+2", "w*2"}).out == "LT\n");
    CHECK(cli({"ord", "cmp", "w^2", "w*2"}).out == "GT\n");
    CHECK(cli({"ord", "cmp", "1+w", "w"}).out == "EQ\n");
}

TEST_CASE("rank subcommands") {
    CHECK(cli({"rank", "eval", "EX(Seed(g))"}).out == "w + 2\n");
    CliRun traced = cli({"rank", "eval", "F(1,g)", "--trace"});
    CHECK(traced.code == 0);
    CHECK(traced.out.find("w + 2") != std::string::npos);
    CHECK(traced.out.find("tree-extension") != std::string::npos);

    CliRun built = cli({"rank", "build", "w^2+w+4", "--verify"});
    CHECK(built.code == 0);
    CHECK(built.out.find("verified") != std::string::npos);

    CliRun interval = cli({"rank", "eval", "Ext(Profinite(p),Discrete(d))"});
    CHECK(interval.out == "[2, 3]\n");
}

TEST_CASE("chain, mono and tree subcommands") {
    CliRun chain = cli({"chain", "F(1,g)"});
    CHECK(chain.code == 0);
    CHECK(chain.out.find("order type: w + 1") != std::string::npos);

    CHECK(cli({"mono", "EX(F(1,g))"}).out == "w^2 + 1\n");

    CliRun apply = cli({"tree", "apply", "t^1 ; { }", "(0,\"\")"});
    CHECK(apply.code == 0);
    CHECK(apply.out == "(1,\"\")\n");

    CliRun selftest = cli({"tree", "selftest", "--cases", "30", "--seed", "9"});
    CHECK(selftest.code == 0);
    CHECK(Json::parse(selftest.out).is_array());
}

TEST_CASE("orbit subcommand reads a generator file") {
    std::string path = "cli_orbit_gens.txt";
    {
        std::ofstream f(path);
        f << "t^1 ; { }\n";
        f << "# a comment line\n";
        f << "t^0 ; { (0,\"\"): (1 0 2) }\n";
        f << "t^0 ; { (0,\"\"): (1 2 0) }\n";
    }
    CliRun r = cli({"tree", "orbit", path, "(0,\"\")", "--eta-min", "-1", "--eta-max", "1",
                    "--wmax", "1"});
    std::remove(path.c_str());
    CHECK(r.code == 0);
    Json j = Json::parse(r.out);
    REQUIRE(j.is_array());
    CHECK(j.size() == 3 + 2 * 3); // three line vertices, two levels of two branches... see below
}

TEST_CASE("json output is valid json for every subcommand") {
    std::vector<std::vector<std::string>> cases = {
        {"ord", "eval", "w+1", "--json"},
        {"ord", "cmp", "w", "w^2", "--json"},
        {"rank", "eval", "Wr(F(1,g),F(1,g))", "--json"},
        {"rank", "build", "w*2+2", "--verify", "--json"},
        {"chain", "Pow(Seed(g),3)", "--json"},
        {"mono", "EX(Seed(g))", "--json"},
        {"tree", "selftest", "--cases", "10", "--json"},
        {"tree", "apply", "t^2 ; { }", "(1,\"2\")", "--json"},
    };
    for (const auto& argv : cases) {
        CliRun r = cli(argv);
        INFO(argv[0] + " " + argv[1]);
        CHECK(r.code == 0);
        CHECK_NOTHROW(Json::parse(r.out));
    }
    // schema of rank eval
    Json j = Json::parse(cli({"rank", "eval", "EX(Seed(g))", "--json"}).out);
    CHECK(j.at("kind") == "exact");
    CHECK(j.at("value") == "w + 2");
    REQUIRE(j.at("trace").is_array());
    for (const auto& s : j.at("trace")) {
        CHECK(s.contains("rule"));
        CHECK(s.contains("cite"));
        CHECK(s.contains("value"));
    }
    Json iv = Json::parse(cli({"rank", "eval", "Ext(Profinite(p),Discrete(d))", "--json"}).out);
    CHECK(iv.at("kind") == "interval");
    CHECK(iv.at("lo") == "2");
    CHECK(iv.at("hi") == "3");
}

TEST_CASE("exit codes classify failures") {
    CHECK(cli({"ord", "eval", "w++"}).code == 1);          // parse error
    CHECK(cli({"rank", "eval", "Frob(x)"}).code == 1);     // parse error
    CHECK(cli({"rank", "eval", "EX(Trivial)"}).code == 2); // ill-formed
    CHECK(cli({"rank", "build", "w"}).code == 2);          // hypothesis violation
    CHECK(cli({"mono", "F(1,g)"}).code == 2);              // hypothesis violation
    CHECK(cli({"chain", "Profinite(p)"}).code == 2);       // no chain available
    CHECK(cli({"ord", "eval", "w^w^w^w^w^w^w^w^w^w^w^w^w^w^w^w^w^w^w^w^w^w^w^w^w^w^w^w^w^w^w^w^w^w"}).code
          == 3); // depth overflow
    CHECK(cli({"nonsense"}).code == 1);
    CliRun bad = cli({"rank", "eval", "EX(Trivial)"});
    CHECK(bad.out.empty());
    CHECK(bad.err.find("EX requires") != std::string::npos);
}

TEST_CASE("help is exit 0") {
    CHECK(cli({"--help"}).code == 0);
    CHECK(cli({"rank", "--help"}).code == 0);
}

TEST_CASE("same argv and seed give byte-identical output") {
    std::vector<std::string> argv{"tree", "selftest", "--seed", "123", "--cases", "25"};
    CliRun a = cli(argv);
    CliRun b = cli(argv);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
}
