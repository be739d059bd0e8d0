#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cbpp/cbpp.hpp"
#include "fixtures.hpp"

using namespace cbpp;
namespace fs = std::filesystem;

namespace {

struct CmdResult {
  int code = -1;
  std::string output;  // stdout + stderr
};

fs::path work_dir() {
  fs::path dir = fs::temp_directory_path() / ("cbpp_test_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

std::string binary() {
  const char* bin = std::getenv("CBPP_BIN");
  REQUIRE(bin != nullptr);
  return bin;
}

CmdResult run_shell(const std::string& full_cmd) {
  fs::path capture = work_dir() / "capture.txt";
  std::string cmd = full_cmd + " > \"" + capture.string() + "\" 2>&1";
  int rc = std::system(cmd.c_str());
  CmdResult res;
  res.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  std::ifstream in(capture);
  std::ostringstream buf;
  buf << in.rdbuf();
  res.output = buf.str();
  return res;
}

CmdResult run_cli(const std::string& args) {
  return run_shell("\"" + binary() + "\" " + args);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path write_example(const fs::path& dir) {
  fs::path p = dir / "ex.cbpp";
  write_instance_file(p.string(), fixtures::example(), "demo");
  return p;
}

}  // namespace

TEST_CASE("usage mistakes exit with code 2", "[cli]") {
  REQUIRE(run_cli("").code == 2);
  REQUIRE(run_cli("frobnicate").code == 2);
  REQUIRE(run_cli("solve").code == 2);                       // missing instance
  REQUIRE(run_cli("solve x.cbpp --model mip").code == 2);    // bad choice
  REQUIRE(run_cli("generate --family gauss").code == 2);     // bad family
  REQUIRE(run_cli("verify onlyone.cbpp").code == 2);         // missing solution
  REQUIRE(run_cli("--help").code == 0);
  REQUIRE(run_cli("solve --help").code == 0);
}

TEST_CASE("missing inputs exit with code 3", "[cli]") {
  fs::path dir = work_dir();
  CmdResult r = run_cli("solve \"" + (dir / "ghost.cbpp").string() + "\"");
  REQUIRE(r.code == 3);
  REQUIRE_THAT(r.output, Catch::Matchers::ContainsSubstring("error"));
}

TEST_CASE("generate writes deterministic instance files", "[cli]") {
  fs::path dir = work_dir();
  fs::path out1 = dir / "gen1";
  fs::path out2 = dir / "gen2";
  std::string flags =
      "generate --family uniform -M 30 -L 100 -Q 3 --w-lo 0.1 --w-hi 0.8 --seed 5 --out ";
  REQUIRE(run_cli(flags + "\"" + out1.string() + "\"").code == 0);
  REQUIRE(run_cli(flags + "\"" + out2.string() + "\"").code == 0);

  fs::path name = "uniform-M30-L100-Q3-W0.10-0.80-r0.cbpp";
  REQUIRE(fs::exists(out1 / name));
  REQUIRE(slurp(out1 / name) == slurp(out2 / name));

  ParsedInstance parsed = read_instance_file((out1 / name).string());
  REQUIRE(parsed.instance.total_copies() == 30);
  REQUIRE(parsed.class_label == "uniform-M30-L100-Q3-W0.10-0.80");

  // $CBPP_OUT_DIR supplies the default output directory
  fs::path envdir = dir / "envout";
  std::string no_out_flags = flags.substr(0, flags.size() - 7);  // drop trailing " --out "
  CmdResult env_run = run_shell("CBPP_OUT_DIR=\"" + envdir.string() + "\" \"" + binary() +
                                "\" " + no_out_flags);
  REQUIRE(env_run.code == 0);
  REQUIRE(fs::exists(envdir / name));
  REQUIRE(slurp(envdir / name) == slurp(out1 / name));

  fs::remove_all(dir);
}

TEST_CASE("solve, verify, export, and oracle agree on the example", "[cli]") {
  fs::path dir = work_dir();
  fs::path inst = write_example(dir);

  CmdResult solved = run_cli("solve \"" + inst.string() + "\"");
  REQUIRE(solved.code == 0);
  REQUIRE_THAT(solved.output, Catch::Matchers::ContainsSubstring("status optimal"));
  REQUIRE_THAT(solved.output, Catch::Matchers::ContainsSubstring("lb 3"));
  REQUIRE_THAT(solved.output, Catch::Matchers::ContainsSubstring("ub 3"));
  fs::path sol = dir / "ex.sol";
  REQUIRE(fs::exists(sol));

  CmdResult verified = run_cli("verify \"" + inst.string() + "\" \"" + sol.string() + "\"");
  REQUIRE(verified.code == 0);
  REQUIRE_THAT(verified.output, Catch::Matchers::ContainsSubstring("valid: 3 bins"));

  CmdResult existential = run_cli("verify --mode existential \"" + inst.string() + "\" \"" +
                                  sol.string() + "\"");
  REQUIRE(existential.code == 0);

  // a short solution must fail verification with exit 1
  fs::path bad = dir / "bad.sol";
  {
    std::ofstream out(bad);
    out << "1 2\n";
  }
  CmdResult rejected = run_cli("verify \"" + inst.string() + "\" \"" + bad.string() + "\"");
  REQUIRE(rejected.code == 1);
  REQUIRE_THAT(rejected.output, Catch::Matchers::ContainsSubstring("violation"));

  // the ml model reaches the same optimum
  CmdResult ml = run_cli("solve --model ml \"" + inst.string() + "\"");
  REQUIRE(ml.code == 0);
  REQUIRE_THAT(ml.output, Catch::Matchers::ContainsSubstring("ub 3"));

  // export emits a parseable LP with the expected shape
  fs::path lp = dir / "ex.lp";
  CmdResult exported = run_cli("export \"" + inst.string() + "\" --out \"" + lp.string() + "\"");
  REQUIRE(exported.code == 0);
  MilpModel model = parse_lp(slurp(lp));
  Instance ex = fixtures::example();
  CaGraph g = build_ca_graph(ex, normal_patterns(ex));
  REQUIRE(model.num_variables() == static_cast<int>(g.arcs.size()) + 1);

  CmdResult brute = run_cli("oracle \"" + inst.string() + "\"");
  REQUIRE(brute.code == 0);
  REQUIRE_THAT(brute.output, Catch::Matchers::ContainsSubstring("opt 3"));
  CmdResult setpart = run_cli("oracle --method setpart \"" + inst.string() + "\"");
  REQUIRE(setpart.code == 0);
  REQUIRE_THAT(setpart.output, Catch::Matchers::ContainsSubstring("opt 3"));

  fs::remove_all(dir);
}

TEST_CASE("the LP protocol twin speaks the backend contract", "[cli]") {
  fs::path dir = work_dir();
  fs::path inst = write_example(dir);
  fs::path lp = dir / "m.lp";
  REQUIRE(run_cli("export \"" + inst.string() + "\" --out \"" + lp.string() + "\"").code == 0);

  fs::path solfile = dir / "m.sol";
  CmdResult lp_solved =
      run_cli("solve-lp \"" + lp.string() + "\" \"" + solfile.string() + "\"");
  REQUIRE(lp_solved.code == 0);
  ExternalSolution ext = parse_external_solution(slurp(solfile));
  REQUIRE(ext.objective.has_value());
  REQUIRE(*ext.objective == 3.0);
  REQUIRE(ext.values.count("z") == 1);
  REQUIRE(ext.values.at("z") == 3.0);

  // infeasible MILPs exit 1 without writing a solution
  fs::path bad_lp = dir / "bad.lp";
  {
    std::ofstream out(bad_lp);
    out << "Minimize\n obj: + x\nSubject To\n lo: + x >= 2\n hi: + x <= 1\nEnd\n";
  }
  fs::path none = dir / "none.sol";
  REQUIRE(run_cli("solve-lp \"" + bad_lp.string() + "\" \"" + none.string() + "\"").code == 1);
  REQUIRE_FALSE(fs::exists(none));

  // unreadable LP text is a runtime failure
  fs::path junk = dir / "junk.lp";
  {
    std::ofstream out(junk);
    out << "this is not an lp file\n";
  }
  REQUIRE(run_cli("solve-lp \"" + junk.string() + "\" \"" + none.string() + "\"").code == 3);

  fs::remove_all(dir);
}

TEST_CASE("the binary can drive itself as an external backend", "[cli]") {
  fs::path dir = work_dir();
  fs::path inst = write_example(dir);
  CmdResult r = run_cli("solve \"" + inst.string() + "\" --backend \"external:" + binary() +
                        " solve-lp\"");
  REQUIRE(r.code == 0);
  REQUIRE_THAT(r.output, Catch::Matchers::ContainsSubstring("status optimal"));
  REQUIRE_THAT(r.output, Catch::Matchers::ContainsSubstring("ub 3"));
  REQUIRE(fs::exists(dir / "ex.sol"));

  CmdResult bad = run_cli("solve \"" + inst.string() + "\" --backend mystery");
  REQUIRE(bad.code == 2);

  fs::remove_all(dir);
}

TEST_CASE("bench sweeps a directory from the command line", "[cli]") {
  fs::path dir = work_dir();
  fs::path instances = dir / "inst";
  fs::create_directories(instances);
  write_instance_file((instances / "ex.cbpp").string(), fixtures::example(), "demo");
  Instance duo;
  duo.capacity = 4;
  duo.num_colors = 2;
  duo.items = {{1, 2, 1, 1}, {2, 2, 1, 2}};
  write_instance_file((instances / "duo.cbpp").string(), duo, "tiny");

  fs::path csv = dir / "report.csv";
  CmdResult r = run_cli("bench \"" + instances.string() + "\" --models ca --out \"" +
                        csv.string() + "\"");
  REQUIRE(r.code == 0);
  std::string text = slurp(csv);
  REQUIRE_THAT(text, Catch::Matchers::StartsWith("instance,class,model,status,lb,ub,gap,nodes,time_ms\n"));
  REQUIRE_THAT(text, Catch::Matchers::ContainsSubstring("ex,demo,ca,optimal,3,3,0,"));
  REQUIRE_THAT(text, Catch::Matchers::ContainsSubstring("duo,tiny,ca,optimal,1,1,0,"));
  REQUIRE(fs::exists(dir / "report-summary.csv"));
  std::string summary = slurp(dir / "report-summary.csv");
  REQUIRE_THAT(summary, Catch::Matchers::ContainsSubstring("demo,ca,1,1,"));
  REQUIRE_THAT(summary, Catch::Matchers::ContainsSubstring("tiny,ca,1,1,"));

  fs::remove_all(dir);
}

TEST_CASE("oracle guards surface as runtime failures", "[cli]") {
  fs::path dir = work_dir();
  Instance big;
  big.capacity = 10;
  big.num_colors = 2;
  big.items = {{1, 1, 9, 1}};
  fs::path p = dir / "big.cbpp";
  write_instance_file(p.string(), big);
  CmdResult r = run_cli("oracle \"" + p.string() + "\"");
  REQUIRE(r.code == 3);
  REQUIRE_THAT(r.output, Catch::Matchers::ContainsSubstring("error"));
  fs::remove_all(dir);
}

TEST_CASE("generated instances adapt from donor packings", "[cli]") {
  fs::path dir = work_dir();
  fs::path bpp = dir / "donor.txt";
  {
    std::ofstream out(bpp);
    out << "5 10\n5\n5\n4\n3\n3\n";
  }
  fs::path bins = dir / "donor.sol";
  {
    std::ofstream out(bins);
    out << "5 5\n4 3 3\n";
  }
  CmdResult r = run_cli("generate --family bpplib-adapt --bpp \"" + bpp.string() +
                        "\" --bpp-solution \"" + bins.string() + "\" --out \"" +
                        dir.string() + "\"");
  REQUIRE(r.code == 0);
  fs::path adapted = dir / "donor-q2.cbpp";
  REQUIRE(fs::exists(adapted));
  ParsedInstance parsed = read_instance_file(adapted.string());
  REQUIRE(parsed.instance.num_colors == 2);
  REQUIRE(parsed.instance.total_copies() == 5);

  Solution donor_sol = read_solution_file((dir / "donor-q2.sol").string());
  REQUIRE(donor_sol.num_bins() == 2);
  REQUIRE(verify_solution(parsed.instance, donor_sol, VerifyMode::AsOrdered).valid);

  // incomplete flag set is a usage error
  REQUIRE(run_cli("generate --family bpplib-adapt --bpp \"" + bpp.string() + "\"").code == 2);

  fs::remove_all(dir);
}
