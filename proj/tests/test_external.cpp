#include <catch2/catch_amalgamated.hpp>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "cbpp/cbpp.hpp"

using namespace cbpp;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  fs::path dir =
      fs::temp_directory_path() / ("cbpp_test_ext_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

fs::path write_script(const fs::path& dir, const std::string& name, const std::string& body) {
  fs::path p = dir / name;
  {
    std::ofstream out(p);
    out << "#!/bin/sh\n" << body;
  }
  fs::permissions(p, fs::perms::owner_all | fs::perms::group_read | fs::perms::others_read |
                         fs::perms::group_exec | fs::perms::others_exec);
  return p;
}

MilpModel pair_model() {
  // min x + y  st  x + y >= 2,  x,y in [0,5]
  MilpModel m;
  m.add_variable("x", 0.0, 5.0, false);
  m.add_variable("y", 0.0, 5.0, false);
  m.objective = {{0, 1.0}, {1, 1.0}};
  m.constraints.push_back({"lo", {{0, 1.0}, {1, 1.0}}, Relation::Ge, 2.0});
  return m;
}

}  // namespace

TEST_CASE("solution files parse with comments and carriage returns", "[external]") {
  ExternalSolution s = parse_external_solution(
      "# produced by a backend\r\n\r\nobjective 2.5\r\nx 2 # trailing comment\ny 0.5\n");
  REQUIRE(s.objective.has_value());
  REQUIRE(*s.objective == 2.5);
  REQUIRE(s.values.at("x") == 2.0);
  REQUIRE(s.values.at("y") == 0.5);

  REQUIRE_THROWS_AS(parse_external_solution("x\n"), BackendError);
  REQUIRE_THROWS_AS(parse_external_solution("x one\n"), BackendError);
  REQUIRE_THROWS_AS(parse_external_solution("x 1 2\n"), BackendError);
  REQUIRE_THROWS_AS(parse_external_solution("x 1\nx 2\n"), BackendError);
  REQUIRE_THROWS_AS(parse_external_solution("objective 1\nobjective 2\n"), BackendError);
}

TEST_CASE("external backends are verified, never trusted", "[external]") {
  fs::path dir = scratch_dir();
  MilpModel m = pair_model();
  ExternalOptions opts;
  opts.workdir = dir.string();

  SECTION("a correct answer passes and is re-verified") {
    fs::path ok = write_script(dir, "ok.sh", "printf 'objective 2\\nx 2\\n' > \"$2\"\n");
    SolveResult r = external_backend(m, ok.string(), opts);
    REQUIRE(r.status == SolveStatus::Optimal);
    REQUIRE(r.lb == 2.0);
    REQUIRE(r.ub == 2.0);
    REQUIRE(r.incumbent.has_value());
    REQUIRE((*r.incumbent)[0] == 2.0);
    REQUIRE((*r.incumbent)[1] == 0.0);  // unreported columns default to zero
  }

  SECTION("multi-word commands work") {
    fs::path ok = write_script(dir, "okw.sh",
                               "[ \"$1\" = wide ] || exit 9\n"
                               "printf 'x 1\\ny 1\\n' > \"$3\"\n");
    SolveResult r = external_backend(m, ok.string() + " wide", opts);
    REQUIRE(r.status == SolveStatus::Optimal);
    REQUIRE(r.ub == 2.0);
  }

  SECTION("a lying objective is rejected") {
    fs::path lie = write_script(dir, "lie.sh", "printf 'objective 7\\nx 2\\n' > \"$2\"\n");
    REQUIRE_THROWS_WITH(external_backend(m, lie.string(), opts),
                        Catch::Matchers::ContainsSubstring("objective disagrees"));
  }

  SECTION("an infeasible assignment is rejected") {
    fs::path bad = write_script(dir, "bad.sh", "printf 'x 9\\n' > \"$2\"\n");
    REQUIRE_THROWS_WITH(external_backend(m, bad.string(), opts),
                        Catch::Matchers::ContainsSubstring("rejected"));
  }

  SECTION("unknown variable names are rejected") {
    fs::path alien = write_script(dir, "alien.sh", "printf 'w 1\\nx 2\\n' > \"$2\"\n");
    REQUIRE_THROWS_WITH(external_backend(m, alien.string(), opts),
                        Catch::Matchers::ContainsSubstring("unknown variable"));
  }

  SECTION("failure exit codes surface as errors") {
    fs::path boom = write_script(dir, "boom.sh", "exit 3\n");
    REQUIRE_THROWS_WITH(external_backend(m, boom.string(), opts),
                        Catch::Matchers::ContainsSubstring("code 3"));
  }

  SECTION("exit 0 without a solution file is an error") {
    fs::path mute = write_script(dir, "mute.sh", "exit 0\n");
    REQUIRE_THROWS_AS(external_backend(m, mute.string(), opts), IoError);
  }

  SECTION("an unwitnessed infeasibility claim is accepted") {
    fs::path no = write_script(dir, "no.sh", "exit 1\n");
    SolveResult r = external_backend(m, no.string(), opts);
    REQUIRE(r.status == SolveStatus::Infeasible);
    REQUIRE(r.lb == kInf);
    REQUIRE(r.ub == kInf);
  }

  SECTION("a witnessed infeasibility claim is rejected") {
    fs::path no = write_script(dir, "no2.sh", "exit 1\n");
    ExternalOptions with_witness = opts;
    with_witness.feasible_witness = std::vector<double>{2.0, 0.0};
    REQUIRE_THROWS_WITH(external_backend(m, no.string(), with_witness),
                        Catch::Matchers::ContainsSubstring("witness"));

    // a bogus witness does not shield the claim
    ExternalOptions bogus = opts;
    bogus.feasible_witness = std::vector<double>{9.0, 9.0};
    SolveResult r = external_backend(m, no.string(), bogus);
    REQUIRE(r.status == SolveStatus::Infeasible);
  }

  SECTION("keep_files leaves the protocol files behind") {
    fs::path keepdir = dir / "kept";
    fs::create_directories(keepdir);
    ExternalOptions keep = opts;
    keep.workdir = keepdir.string();
    keep.keep_files = true;
    fs::path ok = write_script(dir, "ok2.sh", "printf 'x 2\\n' > \"$2\"\n");
    SolveResult r = external_backend(m, ok.string(), keep);
    REQUIRE(r.status == SolveStatus::Optimal);
    int lp_files = 0, sol_files = 0;
    for (const auto& e : fs::directory_iterator(keepdir)) {
      if (e.path().extension() == ".lp") ++lp_files;
      if (e.path().extension() == ".sol") ++sol_files;
    }
    REQUIRE(lp_files == 1);
    REQUIRE(sol_files == 1);
  }

  SECTION("temporary files are removed by default") {
    fs::path tidy = dir / "tidy";
    fs::create_directories(tidy);
    ExternalOptions local = opts;
    local.workdir = tidy.string();
    fs::path ok = write_script(dir, "ok3.sh", "printf 'x 2\\n' > \"$2\"\n");
    external_backend(m, ok.string(), local);
    REQUIRE(fs::is_empty(tidy));
  }

  fs::remove_all(dir);
}

TEST_CASE("the backend sees exactly the emitted model", "[external]") {
  fs::path dir = scratch_dir();
  MilpModel m = pair_model();
  ExternalOptions opts;
  opts.workdir = dir.string();

  // copy the LP text it received next to the solution
  fs::path probe = write_script(dir, "probe.sh",
                                "cp \"$1\" \"$2.seen\"\n"
                                "printf 'x 2\\n' > \"$2\"\n");
  external_backend(m, probe.string(), opts);
  std::string seen;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".seen") {
      std::ifstream in(e.path());
      std::ostringstream buf;
      buf << in.rdbuf();
      seen = buf.str();
    }
  REQUIRE(seen == emit_lp(m));
  fs::remove_all(dir);
}
