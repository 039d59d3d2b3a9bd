#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <string>

#include "censreg/sample.hpp"
#include "censreg/survival.hpp"
#include "json.hpp"
#include "testutil.hpp"

using namespace censreg;
using testutil::data_lines;
using testutil::run_cli;
using testutil::slurp;

namespace {

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

} // namespace

TEST_CASE("missing subcommand and unknown flags are usage errors") {
    auto none = run_cli("", "none");
    CHECK(none.status == 1);
    CHECK_FALSE(none.err.empty());
    auto unknown = run_cli("simulate --n 10 --out x.csv --bogus 3", "unknown");
    CHECK(unknown.status == 1);
    auto badsub = run_cli("frobnicate", "badsub");
    CHECK(badsub.status == 1);
}

TEST_CASE("help exits cleanly") {
    auto help = run_cli("--help", "help");
    CHECK(help.status == 0);
    CHECK(help.out.find("simulate") != std::string::npos);
    CHECK(help.out.find("rate-check") != std::string::npos);
}

TEST_CASE("simulate writes a deterministic latent-column sample") {
    auto r = run_cli("simulate --model linear --rho 0.9 --lambda 1.5 --n 300 --seed 7"
                     " --out sim_a.csv",
                     "sim_a");
    REQUIRE(r.status == 0);
    auto content = slurp("sim_a.csv");
    auto lines = data_lines(content);
    REQUIRE(lines.size() == 301);
    CHECK(lines[0] == "x1,t,delta,y,c");
    CHECK(content.find("censreg simulate model=linear") != std::string::npos);

    auto sample = read_sample_csv_file("sim_a.csv");
    CHECK(sample.size() == 300);
    CHECK(validate_sample(sample).ok());
    REQUIRE(sample.observations[0].latent.has_value());

    auto again = run_cli("simulate --model linear --rho 0.9 --lambda 1.5 --n 300 --seed 7"
                         " --out sim_b.csv",
                         "sim_b");
    REQUIRE(again.status == 0);
    CHECK(slurp("sim_b.csv") == content);

    auto other = run_cli("simulate --model linear --rho 0.9 --lambda 1.5 --n 300 --seed 8"
                         " --out sim_c.csv",
                         "sim_c");
    REQUIRE(other.status == 0);
    CHECK(slurp("sim_c.csv") != content);
}

TEST_CASE("simulate validates parameter ranges") {
    CHECK(run_cli("simulate --n 1 --out bad.csv", "sim_badn").status == 1);
    CHECK(run_cli("simulate --n 10 --rho 1.5 --out bad.csv", "sim_badrho").status == 1);
    CHECK(run_cli("simulate --n 10 --lambda 0 --out bad.csv", "sim_badlam").status == 1);
    CHECK(run_cli("simulate --n 10 --model cubic --out bad.csv", "sim_badfam").status == 1);
}

TEST_CASE("estimate produces the grid csv and repeats byte-identically") {
    REQUIRE(run_cli("simulate --model linear --n 200 --seed 11 --out est_in.csv",
                    "est_sim")
                .status == 0);
    auto r = run_cli("estimate --in est_in.csv --kernel gaussian --bandwidth-const 1"
                     " --grid-min -1.5 --grid-max 1.5 --grid-points 61 --g km"
                     " --out est_a.csv",
                     "est_a");
    REQUIRE(r.status == 0);
    auto content = slurp("est_a.csv");
    auto lines = data_lines(content);
    REQUIRE(lines.size() == 62);
    CHECK(lines[0] == "x,ell_n,r1_n,m_n");
    CHECK(lines[1].substr(0, 5) == "-1.5,");
    CHECK(content.find("# censreg estimate") != std::string::npos);
    CHECK(content.find(" h=") != std::string::npos);

    auto again = run_cli("estimate --in est_in.csv --kernel gaussian --bandwidth-const 1"
                         " --grid-min -1.5 --grid-max 1.5 --grid-points 61 --g km"
                         " --out est_b.csv",
                         "est_b");
    REQUIRE(again.status == 0);
    CHECK(slurp("est_b.csv") == content);
}

TEST_CASE("estimate appends the closed-form truth on request") {
    REQUIRE(run_cli("simulate --model sinus --n 150 --seed 3 --out truth_in.csv",
                    "truth_sim")
                .status == 0);
    auto r = run_cli("estimate --in truth_in.csv --bandwidth 0.4 --grid-min -1"
                     " --grid-max 1 --grid-points 5 --truth sinus --out truth_out.csv",
                     "truth_est");
    REQUIRE(r.status == 0);
    auto lines = data_lines(slurp("truth_out.csv"));
    REQUIRE(lines.size() == 6);
    CHECK(lines[0] == "x,ell_n,r1_n,m_n,m_true");
    CHECK(lines[3].substr(0, 2) == "0,");
    // sin(0) = 0 lands in the last column of the middle row.
    CHECK(lines[3].substr(lines[3].rfind(',')) == ",0");
}

TEST_CASE("estimate bandwidth flags are exclusive and required") {
    write_text("tiny.csv", "x1,t,delta\n0,1,1\n0.5,2,1\n");
    CHECK(run_cli("estimate --in tiny.csv --grid-min -1 --grid-max 1 --out o.csv",
                  "est_nobw")
              .status == 1);
    CHECK(run_cli("estimate --in tiny.csv --bandwidth 0.5 --bandwidth-const 1"
                  " --grid-min -1 --grid-max 1 --out o.csv",
                  "est_bothbw")
              .status == 1);
    CHECK(run_cli("estimate --in tiny.csv --bandwidth 0.5 --grid-min 1 --grid-max -1"
                  " --out o.csv",
                  "est_badgrid")
              .status == 1);
}

TEST_CASE("estimate rejects malformed data with the offending row") {
    write_text("bad_delta.csv",
               "x1,t,delta\n0,1,1\n0.1,1,1\n0.2,1,1\n0.3,1,1\n0.4,1,2\n");
    auto r = run_cli("estimate --in bad_delta.csv --bandwidth 0.5 --grid-min -1"
                     " --grid-max 1 --out o.csv",
                     "est_baddelta");
    CHECK(r.status == 2);
    CHECK(r.err.find("row 5") != std::string::npos);

    write_text("bad_field.csv", "x1,t,delta\n0,1,1\n0.1,oops,1\n");
    auto f = run_cli("estimate --in bad_field.csv --bandwidth 0.5 --grid-min -1"
                     " --grid-max 1 --out o.csv",
                     "est_badfield");
    CHECK(f.status == 2);
    CHECK(f.err.find("row 2") != std::string::npos);

    write_text("empty.csv", "x1,t,delta\n");
    auto e = run_cli("estimate --in empty.csv --bandwidth 0.5 --grid-min -1"
                     " --grid-max 1 --out o.csv",
                     "est_empty");
    CHECK(e.status == 2);
    CHECK(e.err.find("empty sample") != std::string::npos);

    auto missing = run_cli("estimate --in no_such_file.csv --bandwidth 0.5 --grid-min -1"
                           " --grid-max 1 --out o.csv",
                           "est_missing");
    CHECK(missing.status == 2);
}

TEST_CASE("failed estimate runs leave no output file behind") {
    std::remove("no_output.csv");
    write_text("bad_delta2.csv", "x1,t,delta\n0,1,3\n");
    auto r = run_cli("estimate --in bad_delta2.csv --bandwidth 0.5 --grid-min -1"
                     " --grid-max 1 --out no_output.csv",
                     "est_nofile");
    CHECK(r.status == 2);
    std::ifstream probe("no_output.csv");
    CHECK_FALSE(probe.good());
}

TEST_CASE("km exports both sides of every jump") {
    write_text("km_in.csv", "x1,t,delta\n0,1,1\n0,2,0\n0,3,1\n");
    auto r = run_cli("km --in km_in.csv --out km_out.csv", "km_basic");
    REQUIRE(r.status == 0);
    auto lines = data_lines(slurp("km_out.csv"));
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "t,value_right,value_left");
    CHECK(lines[1] == "2,0.5,1");
    CHECK(lines[2] == "3,0,0.5");
}

TEST_CASE("rate-check emits a config echo, summaries, and raw errors") {
    auto r = run_cli("rate-check --model linear --n-list 50,100 --reps 4 --seed 5"
                     " --grid-points 31 --quiet --out rc_a.json --raw-out rc_a.csv",
                     "rc_a");
    REQUIRE(r.status == 0);
    CHECK(r.err.empty());
    auto j = nlohmann::json::parse(slurp("rc_a.json"));
    CHECK(j["config"]["model"] == "linear");
    CHECK(j["config"]["n_values"] == std::vector<std::size_t>{50, 100});
    CHECK(j["config"]["replications"] == 4);
    CHECK(j["config"]["master_seed"] == 5);
    CHECK(j["summaries"].size() == 4);
    CHECK(j["slope_fit"].is_null());
    auto raw = slurp("rc_a.csv");
    CHECK(raw.find("# censreg rate-check") != std::string::npos);
    auto lines = data_lines(raw);
    REQUIRE(lines.size() == 1 + 2 * 2 * 4);
    CHECK(lines[0] == "n,rep,g_source,sup_error,undefined_count");
}

TEST_CASE("rate-check reports progress unless quieted") {
    auto loud = run_cli("rate-check --n-list 50 --reps 2 --out rc_loud.json", "rc_loud");
    REQUIRE(loud.status == 0);
    CHECK(loud.err.find("completed n=50 (1/1)") != std::string::npos);
}

TEST_CASE("rate-check output is identical across thread counts") {
    std::string base = "rate-check --model sinus --n-list 40,80 --reps 6 --seed 99"
                       " --grid-points 21 --quiet";
    auto one = run_cli(base + " --threads 1 --out rc_t1.json --raw-out rc_t1.csv", "rc_t1");
    auto four = run_cli(base + " --threads 4 --out rc_t4.json --raw-out rc_t4.csv", "rc_t4");
    REQUIRE(one.status == 0);
    REQUIRE(four.status == 0);
    CHECK(slurp("rc_t1.json") == slurp("rc_t4.json"));
    auto raw1 = slurp("rc_t1.csv");
    auto raw4 = slurp("rc_t4.csv");
    CHECK(raw1 == raw4);
    CHECK(raw1.find("--threads") == std::string::npos);
    CHECK(raw1.find("threads") == std::string::npos);
}

TEST_CASE("rate-check validates its flag combinations") {
    CHECK(run_cli("rate-check --n-list 100,50 --out bad.json", "rc_desc").status == 1);
    CHECK(run_cli("rate-check --n-list 50 --reps 0 --out bad.json", "rc_reps").status == 1);
    CHECK(run_cli("rate-check --out bad.json", "rc_nolist").status == 1);
    CHECK(run_cli("rate-check --n-list 50 --bandwidth-const 0 --out bad.json",
                  "rc_badc")
              .status == 1);
}
