#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include "galmod/cli.hpp"

using namespace galmod;
using cli::Json;

namespace {

cli::Outcome run(std::vector<std::string> args) { return cli::run(std::move(args)); }

Json run_json(std::vector<std::string> args)
{
    args.insert(args.begin(), "--json");
    cli::Outcome o = run(std::move(args));
    EXPECT_TRUE(o.err.empty()) << o.err;
    return Json::parse(o.out);
}

std::string data_path(const std::string& name) { return std::string(GALMOD_DATA_DIR) + "/" + name; }

std::string write_temp(const std::string& name, const std::string& body)
{
    auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << body;
    return path.string();
}

int binary_exit(const std::string& args)
{
    std::string cmd = std::string(GALMOD_CLI) + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST(GroupSpec, Parsing)
{
    EXPECT_EQ(cli::parse_group_spec("9"), cyclic_group(9));
    EXPECT_EQ(cli::parse_group_spec("3,6"), make_group({3, 6}));
    EXPECT_EQ(cli::parse_group_spec("1").order(), 1);
    for (std::string bad : {"", "3,", ",3", "3;6", "a", "-3", "2,3x", "0", "3,1"})
        EXPECT_THROW(cli::parse_group_spec(bad), cli::usage_error) << bad;
}

TEST(Monoid, ReportShape)
{
    Json z9 = run_json({"monoid", "9"});
    EXPECT_EQ(z9["command"], "monoid");
    EXPECT_EQ(z9["verdict"], "PASS");
    EXPECT_EQ(z9["results"]["verdict"], "FREE");
    EXPECT_EQ(z9["results"]["s"], 3);
    EXPECT_EQ(z9["results"]["t"], 3);
    EXPECT_EQ(z9["results"]["formula_s"], 3);
    EXPECT_EQ(z9["results"]["beta"].size(), 3u);

    Json z30 = run_json({"monoid", "30"});
    EXPECT_EQ(z30["results"]["s"], 19);
    EXPECT_EQ(z30["results"]["t"], 12);
    EXPECT_EQ(z30["results"]["beta_prime_injectivity"]["certified"], true);

    Json g36 = run_json({"monoid", "3,6", "--bound", "2"});
    EXPECT_EQ(g36["config"]["bound"], 2);
    EXPECT_EQ(g36["results"]["verdict"], "NOT-FREE");
    EXPECT_FALSE(g36["results"].contains("formula_s"));
    EXPECT_EQ(g36["verdict"], "PASS");
}

TEST(Monoid, TsvIsFlattenedJson)
{
    cli::Outcome tsv = run({"monoid", "9"});
    EXPECT_EQ(tsv.exit_code, cli::exit_ok);
    EXPECT_NE(tsv.out.find("results.verdict\tFREE\n"), std::string::npos);
    EXPECT_NE(tsv.out.find("results.s_p[0].p\t3\n"), std::string::npos);
    EXPECT_EQ(tsv.out.rfind("verdict\tPASS\n"), tsv.out.size() - std::string("verdict\tPASS\n").size());
    EXPECT_EQ(tsv.out, cli::to_tsv(run_json({"monoid", "9"})));
}

TEST(Verify, CatalogueGroup)
{
    Json r = run_json({"verify", "3,3"});
    EXPECT_EQ(r["verdict"], "PASS");
    EXPECT_EQ(r["results"]["tate"]["cases"], 78);
    EXPECT_EQ(r["results"]["kernel"]["status"], "skipped");
    EXPECT_EQ(r["results"]["ext"]["passed"], r["results"]["ext"]["cases"]);
    EXPECT_EQ(r["results"]["unit"]["cases"], 21);

    Json z15 = run_json({"verify", "15", "--checks", "propfree,unit"});
    EXPECT_FALSE(z15["results"].contains("tate"));
    EXPECT_EQ(z15["results"]["propfree"]["cases"], 36);
    EXPECT_EQ(z15["results"]["unit"]["status"], "skipped");
    EXPECT_EQ(z15["verdict"], "PASS");
}

TEST(Verify, RowsCarryLabels)
{
    Json r = run_json({"verify", "9", "--checks", "kernel"});
    ASSERT_EQ(r["results"]["kernel"]["rows"].size(), 4u);
    for (auto const& row : r["results"]["kernel"]["rows"]) {
        EXPECT_EQ(row["i"].get<std::string>().front(), '<');
        EXPECT_EQ(row["pass"], true);
    }
}

TEST(Spectrum, HeadlineRun)
{
    Json r = run_json({"spectrum", "--p", "3", "--r", "2", "--samples", "300", "--seed", "7"});
    EXPECT_EQ(r["verdict"], "PASS");
    EXPECT_EQ(r["results"]["oracle_passes"], 300);
    EXPECT_EQ(r["results"]["membership_passes"], 300);
    EXPECT_EQ(r["results"]["predicted_listed"], Json::parse("[2,4,6]"));
    for (auto const& v : r["results"]["attained"])
        EXPECT_TRUE(predicted_membership(v.get<i64>(), 3, 2));
    Json r1 = run_json({"spectrum", "--p", "3", "--r", "1", "--samples", "100"});
    EXPECT_EQ(r1["verdict"], "PASS");
    EXPECT_EQ(r1["results"]["membership_passes"], 100);
    EXPECT_GE(r1["results"]["attained"][0].get<i64>(), 1);
    EXPECT_EQ(run({"spectrum", "--samples", "50", "--seed", "3"}).out,
              run({"spectrum", "--samples", "50", "--seed", "3"}).out);
}

TEST(Spectrum, ArgumentErrors)
{
    EXPECT_EQ(run({"spectrum", "--p", "4"}).exit_code, cli::exit_usage);
    EXPECT_EQ(run({"spectrum", "--p", "3", "--epsilon", "6"}).exit_code, cli::exit_usage);
    EXPECT_EQ(run({"spectrum", "--coeff-exp", "40"}).exit_code, cli::exit_capacity);
    EXPECT_EQ(run({"spectrum", "--samples", "ten"}).exit_code, cli::exit_usage);
}

TEST(Ingest, AdversarialFixtureFails)
{
    cli::Outcome o = run({"--json", "ingest", data_path("adversarial_p3_r2.csv")});
    EXPECT_EQ(o.exit_code, cli::exit_check_failed);
    Json r = Json::parse(o.out);
    EXPECT_EQ(r["verdict"], "FAIL");
    EXPECT_EQ(r["results"]["rows"], 4);
    EXPECT_EQ(r["results"]["passed_rows"], 1);
    ASSERT_EQ(r["results"]["flagged"].size(), 3u);
    EXPECT_EQ(r["results"]["flagged"][0]["row"], 2);
    for (auto const& f : r["results"]["flagged"])
        EXPECT_EQ(f["member"], false);
}

TEST(Ingest, RowChecks)
{
    std::string path = write_temp("galmod_rows.csv", "q,field_tag,ord_value\r\n19,-4,2\r\n21,-4,4\r\n17,-8,6\r\n");
    Json r = Json::parse(run({"--json", "ingest", path}).out);
    ASSERT_EQ(r["results"]["flagged"].size(), 2u);
    EXPECT_EQ(r["results"]["flagged"][0]["q_prime"], false);
    EXPECT_EQ(r["results"]["flagged"][1]["congruence"], false);
    EXPECT_EQ(r["results"]["attained"], Json::parse("[2,4,6]"));
}

TEST(Ingest, DataErrors)
{
    EXPECT_EQ(run({"ingest", "/nonexistent/x.csv"}).exit_code, cli::exit_data);
    std::string header = write_temp("galmod_header.csv", "q,field,ord\n19,-4,2\n");
    EXPECT_EQ(run({"ingest", header}).exit_code, cli::exit_data);
    std::string cells = write_temp("galmod_cells.csv", "q,field_tag,ord_value\n19,-4,2\n37,-8\n");
    cli::Outcome o = run({"ingest", cells});
    EXPECT_EQ(o.exit_code, cli::exit_data);
    EXPECT_NE(o.err.find("row 3"), std::string::npos);
    std::string value = write_temp("galmod_value.csv", "q,field_tag,ord_value\n19,-4,two\n");
    EXPECT_EQ(run({"ingest", value}).exit_code, cli::exit_data);
    std::string empty = write_temp("galmod_empty.csv", "");
    EXPECT_EQ(run({"ingest", empty}).exit_code, cli::exit_data);
}

TEST(Usage, Errors)
{
    EXPECT_EQ(run({}).exit_code, cli::exit_usage);
    EXPECT_EQ(run({"frobnicate"}).exit_code, cli::exit_usage);
    EXPECT_EQ(run({"monoid"}).exit_code, cli::exit_usage);
    EXPECT_EQ(run({"monoid", "9", "--bound", "1"}).exit_code, cli::exit_usage);
    EXPECT_EQ(run({"verify", "9", "--checks", "tate,bogus"}).exit_code, cli::exit_usage);
    cli::Outcome help = run({"--help"});
    EXPECT_EQ(help.exit_code, cli::exit_ok);
    EXPECT_NE(help.out.find("spectrum"), std::string::npos);
}

TEST(Usage, CapacityExit)
{
    EXPECT_EQ(run({"verify", "100,101"}).exit_code, cli::exit_capacity);
}

TEST(Binary, ExitCodes)
{
    EXPECT_EQ(binary_exit("monoid 9"), 0);
    EXPECT_EQ(binary_exit("--json verify 9 --checks tate"), 0);
    EXPECT_EQ(binary_exit("monoid 3,x"), 64);
    EXPECT_EQ(binary_exit("ingest " + data_path("adversarial_p3_r2.csv")), 2);
    EXPECT_EQ(binary_exit("ingest /nonexistent/x.csv"), 66);
    EXPECT_EQ(binary_exit("spectrum --coeff-exp 40"), 65);
}
