#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    std::ostringstream out;
    std::ostringstream err;
    const int code = qtrace::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& rel) { return std::string(QTRACE_DATA_DIR) + "/" + rel; }

std::filesystem::path scratch(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / "qtrace_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_SUITE("cli")
{
    TEST_CASE("expand eisenstein")
    {
        const Run r = run({"expand", "eisenstein", "--k", "1", "--order", "3"});
        REQUIRE(r.code == 0);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j.at("result").at("weight") == 4);
        CHECK(j.at("result").at("coefficients").size() == 4);
        CHECK(j.at("manifest").at("command") == nlohmann::json({"expand", "eisenstein"}));
        CHECK(j.at("manifest").at("mode") == "exact");
    }

    TEST_CASE("expand eisenstein as csv")
    {
        const Run r = run({"expand", "eisenstein", "--k", "0", "--order", "2", "--csv"});
        REQUIRE(r.code == 0);
        std::istringstream lines(r.out);
        std::string header;
        std::getline(lines, header);
        CHECK(header == "n,coefficient");
        int rows = 0;
        for (std::string line; std::getline(lines, line);) {
            rows += !line.empty();
        }
        CHECK(rows == 3);
    }

    TEST_CASE("expand wp and kernel")
    {
        CHECK(run({"expand", "wp", "--m", "2", "--zorder", "4", "--qorder", "3"}).code == 0);
        CHECK(run({"expand", "kernel", "--m", "1", "--xrange", "3", "--qorder", "2"}).code == 0);
        CHECK(run({"expand", "wp", "--m", "0", "--zorder", "4", "--qorder", "3"}).code == 2);
    }

    TEST_CASE("verify elliptic recursion")
    {
        const Run r = run({"verify", "elliptic", "--suite", "recursion", "--m", "3"});
        REQUIRE(r.code == 0);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j.at("pass") == true);
        CHECK(j.at("checks").size() == 1);
    }

    TEST_CASE("verify elliptic modular with a sample file")
    {
        const Run r = run({"verify", "elliptic", "--suite", "modular", "--m", "2", "--samples", data("samples/grid9.json")});
        CHECK(r.code == 0);
        CHECK(nlohmann::json::parse(r.out).at("manifest").at("inputs").size() == 1);
    }

    TEST_CASE("verify modular-action suites")
    {
        CHECK(run({"verify", "modular-action", "--suite", "group", "--system", data("systems/first_order.json")}).code == 0);
        CHECK(run({"verify", "modular-action", "--suite", "covariance", "--system", data("systems/wp2_pair.json"),
                   "--samples", data("samples/grid9_n2.json")})
                  .code == 0);
        CHECK(run({"verify", "modular-action", "--suite", "invariance", "--system", data("systems/first_order.json")})
                  .code == 0);
    }

    TEST_CASE("a failing check exits with 1")
    {
        const Run r =
            run({"verify", "modular-action", "--suite", "invariance", "--system", data("systems/bad_weight.json")});
        CHECK(r.code == 1);
        CHECK(r.err.find("checks failed") != std::string::npos);
        CHECK(nlohmann::json::parse(r.out).at("pass") == false);
    }

    TEST_CASE("pseudotrace on the shipped examples")
    {
        const Run r = run({"pseudotrace", "--algebra", data("pseudotrace/mat2_algebra.json"), "--module",
                           data("pseudotrace/mat2_row.json"), "--phi", data("pseudotrace/mat2_trace_phi.json"), "--op",
                           data("pseudotrace/identity2.json")});
        REQUIRE(r.code == 0);
        CHECK(nlohmann::json::parse(r.out).at("result").at("value") == "1");
    }

    TEST_CASE("a non-equivariant operator is a usage error naming the generator")
    {
        const Run r = run({"pseudotrace", "--algebra", data("pseudotrace/mat2_algebra.json"), "--module",
                           data("pseudotrace/mat2_row.json"), "--phi", data("pseudotrace/mat2_trace_phi.json"),
                           "--op", data("pseudotrace/diag12.json")});
        CHECK(r.code == 2);
        CHECK(r.err.find("e_") != std::string::npos);
    }

    TEST_CASE("qtrace of a graded space")
    {
        const Run r = run({"qtrace", "--space", data("pseudotrace/dual_graded.json"), "--phi",
                           data("pseudotrace/dual_eps_phi.json"), "--algebra", data("pseudotrace/dual_algebra.json")});
        REQUIRE(r.code == 0);
        CHECK(nlohmann::json::parse(r.out).at("result").at("nilpotency_index") == 2);
    }

    TEST_CASE("malformed input is a usage error")
    {
        const auto bad = scratch("broken.json");
        std::ofstream(bad) << "{\"n\": 1, ";
        CHECK(run({"verify", "modular-action", "--suite", "group", "--system", bad.string()}).code == 2);
        CHECK(run({"verify", "modular-action", "--suite", "group", "--system", data("no/such/file.json")}).code == 2);
        CHECK(run({"expand", "eisenstein", "--k", "x", "--order", "3"}).code == 2);
        CHECK(run({"frobnicate"}).code == 2);
    }

    TEST_CASE("replay reproduces the report byte for byte")
    {
        const auto first = scratch("first.json");
        const auto second = scratch("second.json");
        REQUIRE(run({"--out", first.string(), "pseudotrace", "--algebra", data("pseudotrace/dual_algebra.json"),
                     "--module", data("pseudotrace/dual_regular.json"), "--phi", data("pseudotrace/dual_eps_phi.json"),
                     "--op", data("pseudotrace/dual_eps_op.json")})
                    .code == 0);
        REQUIRE(run({"--out", second.string(), "replay", "--manifest", first.string()}).code == 0);
        CHECK(slurp(first) == slurp(second));
        CHECK_FALSE(slurp(first).empty());
    }
}
