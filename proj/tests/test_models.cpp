#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "cbpp/cbpp.hpp"
#include "fixtures.hpp"

using namespace cbpp;

TEST_CASE("formulation shapes on the worked example", "[models]") {
  Instance inst = fixtures::example();
  PackingPoints pp = normal_patterns(inst);
  CaGraph ca = build_ca_graph(inst, pp);
  MlGraph ml = build_ml_graph(inst, pp);

  MilpModel mca = build_af_ca(ca, inst);
  REQUIRE(mca.num_variables() == static_cast<int>(ca.arcs.size()) + 1);
  REQUIRE(mca.z_index == static_cast<int>(ca.arcs.size()));
  // rows: one flow row per vertex, Q per interior vertex, one per item
  int interior = 0;
  for (int p : ca.vertex_points)
    if (p > 0 && p < inst.capacity) ++interior;
  REQUIRE(mca.num_constraints() ==
          ca.num_vertices() + interior * inst.num_colors + static_cast<int>(inst.items.size()));

  MilpModel mml = build_af_ml(ml, inst);
  REQUIRE(mml.num_variables() == static_cast<int>(ml.arcs.size()) + 1);
  // rows: source + every layered non-sink vertex + one aggregated sink + items
  int layered_non_sink = (static_cast<int>(ml.layer_points.size()) - 1) * inst.num_colors;
  REQUIRE(mml.num_constraints() ==
          1 + layered_non_sink + 1 + static_cast<int>(inst.items.size()));

  // every arc variable is a nonnegative integer column
  for (const MilpModel* m : {&mca, &mml})
    for (int j : m->arc_vars) {
      REQUIRE(m->variables[static_cast<std::size_t>(j)].integer);
      REQUIRE(m->variables[static_cast<std::size_t>(j)].lb == 0.0);
    }
}

TEST_CASE("bin-count bounds follow the build options", "[models]") {
  Instance inst = fixtures::example();
  PackingPoints pp = normal_patterns(inst);
  CaGraph g = build_ca_graph(inst, pp);

  MilpModel tight = build_af_ca(g, inst);
  const Variable& zt = tight.variables[static_cast<std::size_t>(tight.z_index)];
  REQUIRE(zt.lb == static_cast<double>(lower_bound(inst)));
  REQUIRE(zt.ub == static_cast<double>(ff_heuristic(inst).num_bins()));

  BuildOptions loose;
  loose.bound_z = false;
  MilpModel bare = build_af_ca(g, inst, loose);
  const Variable& zb = bare.variables[static_cast<std::size_t>(bare.z_index)];
  REQUIRE(zb.lb == 0.0);
  REQUIRE(zb.ub == static_cast<double>(inst.total_copies()));
}

TEST_CASE("heuristic packings satisfy both formulations", "[models]") {
  SplitMix64 rng(59);
  for (int round = 0; round < 120; ++round) {
    Instance inst = fixtures::random_instance(rng);
    Solution sol = ff_heuristic(inst);
    REQUIRE(fixtures::solution_ok(inst, sol));
    for (bool reduced : {true, false}) {
      PackingPoints pp = reduced ? normal_patterns(inst) : full_points(inst);

      CaGraph cg = build_ca_graph(inst, pp);
      MilpModel mca = build_af_ca(cg, inst);
      FlowAssignment fca = solution_to_ca_flow(cg, inst, sol);
      auto bad = check_assignment(mca, flow_to_assignment(mca, fca), 1e-9, 1e-9);
      INFO(bad.value_or(""));
      REQUIRE_FALSE(bad.has_value());

      MlGraph mg = build_ml_graph(inst, pp);
      MilpModel mml = build_af_ml(mg, inst);
      FlowAssignment fml = solution_to_ml_flow(mg, inst, sol);
      auto bad2 = check_assignment(mml, flow_to_assignment(mml, fml), 1e-9, 1e-9);
      INFO(bad2.value_or(""));
      REQUIRE_FALSE(bad2.has_value());

      REQUIRE(eval_objective(mca, flow_to_assignment(mca, fca)) ==
              static_cast<double>(sol.num_bins()));
      REQUIRE(eval_objective(mml, flow_to_assignment(mml, fml)) ==
              static_cast<double>(sol.num_bins()));
    }
  }
}

TEST_CASE("formulations reject foreign graphs", "[models]") {
  Instance inst = fixtures::example();
  Instance other = inst;
  other.capacity = 9;
  PackingPoints pp = full_points(other);
  CaGraph cg = build_ca_graph(other, pp);
  MlGraph mg = build_ml_graph(other, pp);
  REQUIRE_THROWS_AS(build_af_ca(cg, inst), StructuralError);
  REQUIRE_THROWS_AS(build_af_ml(mg, inst), StructuralError);
}

TEST_CASE("golden LP text for a tiny model", "[models]") {
  MilpModel m;
  int x = m.add_variable("x", 0.0, 3.0, true);
  int y = m.add_variable("y", 0.0, kInf, false);
  int w = m.add_variable("w", -kInf, kInf, false);
  m.objective = {{x, -2.0}, {y, 1.0}, {w, 1.0}};
  m.constraints.push_back({"cap", {{x, 1.0}, {y, 2.0}}, Relation::Le, 4.0});
  m.constraints.push_back({"mix", {{x, -1.0}, {w, 1.0}}, Relation::Ge, -1.0});
  m.constraints.push_back({"tie", {{y, 1.0}, {w, 1.0}}, Relation::Eq, 2.0});

  std::string expect =
      "Minimize\n"
      " obj: - 2 x + y + w\n"
      "Subject To\n"
      " cap: + x + 2 y <= 4\n"
      " mix: - x + w >= -1\n"
      " tie: + y + w = 2\n"
      "Bounds\n"
      " 0 <= x <= 3\n"
      " y >= 0\n"
      " w free\n"
      "Generals\n"
      " x\n"
      "End\n";
  REQUIRE(emit_lp(m) == expect);
}

TEST_CASE("LP emission is deterministic and parses back", "[models]") {
  Instance inst = fixtures::example();
  PackingPoints pp = normal_patterns(inst);
  CaGraph cg = build_ca_graph(inst, pp);
  MlGraph mg = build_ml_graph(inst, pp);
  for (const MilpModel& m : {build_af_ca(cg, inst), build_af_ml(mg, inst)}) {
    std::string once = emit_lp(m);
    REQUIRE(emit_lp(m) == once);  // identical model, identical bytes

    MilpModel back = parse_lp(once);
    REQUIRE(back.num_variables() == m.num_variables());
    REQUIRE(back.num_constraints() == m.num_constraints());
    REQUIRE(back.z_index >= 0);
    REQUIRE(back.variables[static_cast<std::size_t>(back.z_index)].name == "z");
    for (int i = 0; i < m.num_constraints(); ++i) {
      REQUIRE(back.constraints[static_cast<std::size_t>(i)].name ==
              m.constraints[static_cast<std::size_t>(i)].name);
      REQUIRE(back.constraints[static_cast<std::size_t>(i)].terms.size() ==
              m.constraints[static_cast<std::size_t>(i)].terms.size());
      REQUIRE(back.constraints[static_cast<std::size_t>(i)].rhs ==
              m.constraints[static_cast<std::size_t>(i)].rhs);
    }
    // re-emission stabilizes after the first pass (column order is the
    // reader's first-seen order, then fixed)
    std::string second = emit_lp(back);
    REQUIRE(emit_lp(parse_lp(second)) == second);
  }
}

TEST_CASE("LP emission rejects malformed models", "[models]") {
  MilpModel bad_name;
  bad_name.add_variable("2nd", 0.0, 1.0, false);
  REQUIRE_THROWS_AS(emit_lp(bad_name), EmitError);

  MilpModel spaced;
  spaced.add_variable("a b", 0.0, 1.0, false);
  REQUIRE_THROWS_AS(emit_lp(spaced), EmitError);

  MilpModel dup;
  dup.add_variable("x", 0.0, 1.0, false);
  dup.add_variable("x", 0.0, 2.0, false);
  REQUIRE_THROWS_AS(emit_lp(dup), EmitError);

  MilpModel dup_row;
  dup_row.add_variable("x", 0.0, 1.0, false);
  dup_row.constraints.push_back({"r", {{0, 1.0}}, Relation::Le, 1.0});
  dup_row.constraints.push_back({"r", {{0, 2.0}}, Relation::Le, 2.0});
  REQUIRE_THROWS_AS(emit_lp(dup_row), EmitError);

  MilpModel loose_ref;
  loose_ref.add_variable("x", 0.0, 1.0, false);
  loose_ref.constraints.push_back({"r", {{5, 1.0}}, Relation::Le, 1.0});
  REQUIRE_THROWS_AS(emit_lp(loose_ref), EmitError);

  MilpModel repeated;
  repeated.add_variable("x", 0.0, 1.0, false);
  repeated.constraints.push_back({"r", {{0, 1.0}, {0, 1.0}}, Relation::Le, 1.0});
  REQUIRE_THROWS_AS(emit_lp(repeated), EmitError);
}

TEST_CASE("LP reader accepts hand-written text", "[models]") {
  std::string text =
      "\\ a toy model\n"
      "Minimize\n"
      " cost: 3 a - 2 b + c\n"
      "Subject To\n"
      " r1: a + b <= 10\n"
      " - a + 4 c >= - 2\n"
      " r3: b = 1\n"
      "Bounds\n"
      " -4 <= a <= 7\n"
      " b <= 5\n"
      " c free\n"
      "Generals\n"
      " a\n"
      "End\n";
  MilpModel m = parse_lp(text);
  REQUIRE(m.num_variables() == 3);
  REQUIRE(m.num_constraints() == 3);
  REQUIRE(m.variables[0].name == "a");
  REQUIRE(m.variables[0].lb == -4.0);
  REQUIRE(m.variables[0].ub == 7.0);
  REQUIRE(m.variables[0].integer);
  REQUIRE(m.variables[1].ub == 5.0);
  REQUIRE(m.variables[2].lb == -kInf);
  REQUIRE(m.variables[2].ub == kInf);
  REQUIRE(m.constraints[1].name == "r1");  // unnamed rows get r<ordinal>
  REQUIRE(m.constraints[1].rhs == -2.0);
  REQUIRE(m.constraints[1].rel == Relation::Ge);
  REQUIRE(m.objective.size() == 3);
  REQUIRE(m.objective[0].coeff == 3.0);
  REQUIRE(m.z_index == -1);

  MilpModel bin = parse_lp(
      "Minimize\n obj: x + y\nSubject To\n r: x + y >= 1\nBinaries\n x y\nEnd\n");
  REQUIRE(bin.variables[0].integer);
  REQUIRE(bin.variables[0].ub == 1.0);
  REQUIRE(bin.variables[1].ub == 1.0);
}

TEST_CASE("LP reader rejects what it cannot represent", "[models]") {
  REQUIRE_THROWS_AS(parse_lp("Maximize\n obj: x\nSubject To\n r: x <= 1\nEnd\n"),
                    LpParseError);
  REQUIRE_THROWS_AS(parse_lp("Subject To\n r: x <= 1\nEnd\n"), LpParseError);
  REQUIRE_THROWS_AS(parse_lp("Minimize\n obj: x\nEnd\n"), LpParseError);
  REQUIRE_THROWS_AS(parse_lp("Minimize\n obj: x + 3\nSubject To\n r: x <= 1\nEnd\n"),
                    LpParseError);
  REQUIRE_THROWS_AS(parse_lp("Minimize\n obj: x\nSubject To\n r: x <= 1e5q\nEnd\n"),
                    LpParseError);
  REQUIRE_THROWS_AS(parse_lp("Minimize\n obj: x\nSubject To\n r: x ~ 1\nEnd\n"),
                    LpParseError);
}
