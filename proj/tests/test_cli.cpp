#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cli_helpers.hpp"
#include "lll/io.hpp"

#include <filesystem>

using namespace lll;
using cli_test::run_command;
using cli_test::run_command_stdout;
namespace fs = std::filesystem;

static const std::string kCli = LLL_CLI_PATH;
static const fs::path kData = TESTS_DATA_DIR;

namespace {

std::string instance(const char* name) {
    return (kData / "instances" / name).string();
}
std::string dimacs(const char* name) {
    return (kData / "dimacs" / name).string();
}

}  // namespace

TEST_CASE("solve: trivially satisfiable instances finish with zero calls") {
    auto r = run_command_stdout(kCli + " solve --instance " +
                                dimacs("10_empty_formula.cnf") +
                                " --format json");
    REQUIRE(r.exit_code == 0);
    Json doc = Json::parse(r.output);
    CHECK(doc["outcome"] == "success");
    CHECK(doc["resample_calls"] == 0);
    CHECK(doc["phases"] == 0);
}

TEST_CASE("solve: deterministic run reproduced byte for byte") {
    std::string cmd = kCli + " solve --instance " + instance("single_p2.json") +
                      " --seed 0 --format json";
    auto first = run_command_stdout(cmd);
    auto second = run_command_stdout(cmd);
    REQUIRE(first.exit_code == 0);
    CHECK(first.output == second.output);
    Json doc = Json::parse(first.output);
    CHECK(doc["seed"] == 0);
    CHECK(doc["final_assignment"] == Json::array({1}));
}

TEST_CASE("solve: exhausting the budget exits 2") {
    auto r = run_command(kCli + " solve --instance " +
                         dimacs("07_unsat_pair.cnf") +
                         " --seed 0 --max-calls 1 --format json");
    CHECK(r.exit_code == 2);
}

TEST_CASE("solve: verification mode reports clean runs") {
    auto r = run_command_stdout(kCli + " solve --instance " +
                                instance("mutual_p05.json") +
                                " --seed 7 --verify --format json");
    REQUIRE(r.exit_code == 0);
    Json doc = Json::parse(r.output);
    CHECK(doc["verify"]["progress_clean"] == true);
    CHECK(doc["verify"]["locality_clean"] == true);
    CHECK(doc["verify"]["forest_preorder"] == true);
}

TEST_CASE("solve: human output uses 1-based variables") {
    auto r = run_command_stdout(kCli + " solve --instance " +
                                instance("single_p2.json") + " --seed 0");
    CHECK(r.output.find("X_1 = 1") != std::string::npos);
    CHECK(r.output.find("SUCCESS") != std::string::npos);
}

TEST_CASE("check: passing and failing conditions map to exit codes") {
    SUBCASE("holds with the default heuristic") {
        auto r = run_command_stdout(kCli + " check --instance " +
                                    instance("mutual_p05.json") +
                                    " --format json");
        REQUIRE(r.exit_code == 0);
        Json doc = Json::parse(r.output);
        CHECK(doc["holds"] == true);
        CHECK(doc["rows"][0]["lhs"] == "1/20");
        CHECK(doc["rows"][0]["rhs"] == "1/8");
        CHECK(doc["m"] == "1/2");
    }
    SUBCASE("explicit chi list") {
        auto r = run_command(kCli + " check --instance " +
                             instance("mutual_p05.json") + " --chi 1/4,1/4");
        CHECK(r.exit_code == 0);
        CHECK(r.output.find("M = 3/4") != std::string::npos);
    }
    SUBCASE("chi from a file") {
        fs::path chi_file = fs::temp_directory_path() / "chi_values.txt";
        write_file(chi_file.string(), "1/4\n1/4\n");
        auto r = run_command(kCli + " check --instance " +
                             instance("mutual_p05.json") + " --chi " +
                             chi_file.string());
        CHECK(r.exit_code == 0);
    }
    SUBCASE("an always-occurring event fails the condition") {
        auto r = run_command(kCli + " check --instance " +
                             instance("always_occurs.json"));
        CHECK(r.exit_code == 2);
        CHECK(r.output.find("VIOLATED") != std::string::npos);
    }
    SUBCASE("chi outside (0,1) is an input error") {
        auto r = run_command(kCli + " check --instance " +
                             instance("mutual_p05.json") + " --chi 3/2,1/2");
        CHECK(r.exit_code == 1);
    }
    SUBCASE("chi arity mismatch is an input error") {
        auto r = run_command(kCli + " check --instance " +
                             instance("mutual_p05.json") + " --chi 1/2");
        CHECK(r.exit_code == 1);
    }
}

TEST_CASE("qbound: table, series cross-check, decay") {
    auto r = run_command_stdout(kCli + " qbound --instance " +
                                instance("single_p2.json") +
                                " --N 5 --format json");
    REQUIRE(r.exit_code == 0);
    Json doc = Json::parse(r.output);
    CHECK(doc["series_matches"] == true);
    CHECK(doc["q_table"]["rows"][0]["values"][0] == "1/2");
    CHECK(doc["q_table"]["rows"][4]["values"][0] == "1/32");
    CHECK(doc["decay"]["m"] == "1/2");
    CHECK(doc["decay"]["rows"][0]["n"] == 1);

    SUBCASE("csv format carries both sections") {
        auto c = run_command_stdout(kCli + " qbound --instance " +
                                    instance("single_p2.json") +
                                    " --N 3 --format csv");
        CHECK(c.output.find("n,q_0,sum") != std::string::npos);
        CHECK(c.output.find("n,sum_q,m_pow,ratio,log_slope") !=
              std::string::npos);
    }
}

TEST_CASE("enumerate: Catalan tree counts from the command line") {
    auto r = run_command_stdout(kCli + " enumerate --instance " +
                                instance("mutual_p05.json") +
                                " --root 1 --n 3 --format json");
    REQUIRE(r.exit_code == 0);
    Json doc = Json::parse(r.output);
    CHECK(doc["count"] == 5);
    CHECK(doc["weight_sum"] == "1/1600");
    CHECK(doc["oracle_matches_recurrence"] == true);
    SUBCASE("root id is validated as 1-based") {
        auto bad = run_command(kCli + " enumerate --instance " +
                               instance("mutual_p05.json") + " --root 3 --n 2");
        CHECK(bad.exit_code == 1);
        auto zero = run_command(kCli + " enumerate --instance " +
                                instance("mutual_p05.json") +
                                " --root 0 --n 2");
        CHECK(zero.exit_code == 1);
    }
}

TEST_CASE("estimate: thresholds, references, trivial cases") {
    SUBCASE("threshold zero hits every run") {
        auto r = run_command_stdout(kCli + " estimate --instance " +
                                    instance("single_p2.json") +
                                    " --runs 500 --threshold 0 --format json");
        REQUIRE(r.exit_code == 0);
        Json doc = Json::parse(r.output);
        CHECK(doc["fraction"] == 1.0);
        CHECK(doc["hits"] == 500);
    }
    SUBCASE("geometric tail near one eighth") {
        auto r = run_command_stdout(
            kCli + " estimate --instance " + instance("single_p2.json") +
            " --runs 4000 --threshold 3 --seed 10 --format json");
        REQUIRE(r.exit_code == 0);
        Json doc = Json::parse(r.output);
        double fraction = doc["fraction"].get<double>();
        CHECK(std::abs(fraction - 0.125) < 0.02);
    }
    SUBCASE("chi adds the reference lines") {
        auto r = run_command_stdout(
            kCli + " estimate --instance " + instance("single_p2.json") +
            " --runs 100 --threshold 2 --chi auto --format json");
        REQUIRE(r.exit_code == 0);
        Json doc = Json::parse(r.output);
        CHECK(doc["sum_q"] == "1/4");
        CHECK(doc["m_pow"] == "1/4");
    }
    SUBCASE("verification aggregates across runs") {
        auto r = run_command_stdout(
            kCli + " estimate --instance " + instance("mutual_p05.json") +
            " --runs 300 --threshold 1 --verify --format json");
        REQUIRE(r.exit_code == 0);
        Json doc = Json::parse(r.output);
        CHECK(doc["verified_runs"] == 300);
        CHECK(doc["verify_failures"] == 0);
    }
}

TEST_CASE("input errors exit 1 with a diagnostic") {
    SUBCASE("missing file") {
        auto r = run_command(kCli + " solve --instance /nonexistent.json");
        CHECK(r.exit_code == 1);
        CHECK(r.output.find("error") != std::string::npos);
    }
    SUBCASE("malformed json") {
        fs::path bad = fs::temp_directory_path() / "bad_instance.json";
        write_file(bad.string(), "{ not json");
        auto r = run_command(kCli + " solve --instance " + bad.string());
        CHECK(r.exit_code == 1);
    }
    SUBCASE("named dimacs diagnostics surface") {
        auto r = run_command(kCli + " solve --instance " +
                             (kData / "dimacs_bad/out_of_range.cnf").string());
        CHECK(r.exit_code == 1);
        CHECK(r.output.find("literal") != std::string::npos);
        CHECK(r.output.find("line 2") != std::string::npos);
    }
    SUBCASE("bad enumeration cap variable") {
        auto r = run_command("LLL_ENUM_CAP=abc " + kCli +
                             " check --instance " +
                             instance("mutual_p05.json"));
        CHECK(r.exit_code == 1);
    }
    SUBCASE("unknown subcommand or flag") {
        CHECK(run_command(kCli + " frobnicate").exit_code != 0);
        CHECK(run_command(kCli + " solve --no-such-flag").exit_code != 0);
    }
}

TEST_CASE("explicit --kind overrides sniffing") {
    auto r = run_command(kCli + " check --instance " +
                         dimacs("09_disjoint3.cnf") + " --kind dimacs");
    CHECK(r.exit_code == 0);
    // parsing a dimacs file as json fails cleanly
    auto bad = run_command(kCli + " check --instance " +
                           dimacs("09_disjoint3.cnf") + " --kind json");
    CHECK(bad.exit_code == 1);
}

TEST_CASE("--out writes the report to a file") {
    fs::path out = fs::temp_directory_path() / "solve_report.json";
    fs::remove(out);
    auto r = run_command_stdout(kCli + " solve --instance " +
                                instance("single_p2.json") +
                                " --seed 0 --format json --out " +
                                out.string());
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.empty());
    Json doc = Json::parse(read_file(out.string()));
    CHECK(doc["outcome"] == "success");
}

TEST_CASE("every command is byte-deterministic") {
    const std::string mutual = instance("mutual_p05.json");
    std::vector<std::string> commands{
        kCli + " solve --instance " + mutual + " --seed 4 --format json",
        kCli + " check --instance " + mutual + " --format json",
        kCli + " qbound --instance " + mutual + " --N 8 --format json",
        kCli + " enumerate --instance " + mutual + " --root 2 --n 4 --format json",
        kCli + " estimate --instance " + mutual +
            " --runs 400 --threshold 2 --chi auto --format json",
    };
    for (const auto& cmd : commands) {
        CAPTURE(cmd);
        auto a = run_command_stdout(cmd);
        auto b = run_command_stdout(cmd);
        CHECK(a.exit_code == b.exit_code);
        CHECK(a.output == b.output);
        CHECK_FALSE(a.output.empty());
    }
}
