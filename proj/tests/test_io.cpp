#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sring/json_io.hpp"

using namespace sring;

TEST_CASE("S-ring JSON round-trip") {
  auto g = GroupSpec::from_factors({2, 2, 2, 3});
  auto p = cyclotomic(g, {identity_automorphism(g), unit_action(g, -1)});
  auto j = sring_to_json(p);
  CHECK(j["group"] == "Z2^3xZ3");
  auto back = sring_from_json(j);
  CHECK(back == p);

  // round-trip through text
  auto text = dump_deterministic(j);
  CHECK(sring_from_string(text) == p);

  // non-canonical block order is canonicalized on load
  auto q = sring_from_string(R"({"group":"Z4","blocks":[[1,3],[0],[2]]})");
  CHECK(q.blocks() == std::vector<std::vector<int>>{{0}, {2}, {1, 3}});
}

TEST_CASE("malformed inputs") {
  CHECK_THROWS_AS(sring_from_string("{"), input_error);
  CHECK_THROWS_AS(sring_from_string("[1,2]"), input_error);
  CHECK_THROWS_AS(sring_from_string(R"({"group":"Z4"})"), input_error);
  CHECK_THROWS_AS(sring_from_string(R"({"group":"Q8","blocks":[[0]]})"), input_error);
  // blocks not covering H
  CHECK_THROWS_AS(sring_from_string(R"({"group":"Z4","blocks":[[0],[1]]})"), input_error);
  // overlapping blocks
  CHECK_THROWS_AS(sring_from_string(R"({"group":"Z4","blocks":[[0],[1,2],[2,3]]})"), input_error);
  CHECK_THROWS_AS(sring_from_file("/nonexistent/path.json"), input_error);
}

TEST_CASE("verdict JSON shape") {
  auto z6 = GroupSpec::from_factors({2, 3});
  auto p = discrete_partition(z6);
  auto v = babai_ci_check(p);
  auto j = verdict_to_json(p, v);
  CHECK(j["verdict"] == "CI");
  CHECK(j["method"] == "full-ring");
  CHECK(j["regular_subgroup_count"] == 1);
  CHECK(j["conjugators"].is_array());
  CHECK(j["partition"]["group"] == "Z2xZ3");

  // not-CI carries the refusal
  auto z8 = GroupSpec::from_factors({8});
  auto reg = regular_representation(z8);
  auto aut = aut_scheme(colored_cayley_matrix(z8, {{1, 2, 5}}), 64, reg.generators());
  auto witness = transitivity_module(aut, z8);
  auto vw = babai_ci_check(witness);
  auto jw = verdict_to_json(witness, vw);
  CHECK(jw["verdict"] == "not-CI");
  CHECK(jw["refusal"]["exhausted"] == true);
  CHECK(jw["refusal"]["brute_confirmed"] == true);
}

TEST_CASE("decompose JSON") {
  auto z6 = GroupSpec::from_factors({2, 3});
  auto j = decompose_to_json(discrete_partition(z6), 3);
  CHECK(j["p1"] == std::vector<int>{0, 3});
  CHECK(j["q1"] == std::vector<int>{0, 1, 2});
  CHECK(j["star"].is_object());
  CHECK(j["trichotomy"].is_array());
  // every listed trichotomy row carries a case tag and no refutation
  for (const auto& row : j["trichotomy"]) {
    CHECK(row.contains("case"));
    CHECK(!row.contains("refutation"));
  }
}

TEST_CASE("deterministic dumps") {
  auto g = GroupSpec::from_factors({2, 2, 2, 3});
  VerifyConfig cfg;
  cfg.samples = 5;
  cfg.seed = 99;
  auto r1 = theorem_report_to_json(verify_main_theorem(2, 3, cfg));
  auto r2 = theorem_report_to_json(verify_main_theorem(2, 3, cfg));
  CHECK(dump_deterministic(r1) == dump_deterministic(r2));

  auto c1 = classify_to_json(GroupSpec::from_factors({5}));
  auto c2 = classify_to_json(GroupSpec::from_factors({5}));
  CHECK(dump_deterministic(c1) == dump_deterministic(c2));
}

TEST_CASE("classify JSON") {
  auto j = classify_to_json(GroupSpec::from_factors({5}));
  CHECK(j["count"] == 3);
  CHECK(j["srings"].size() == 3);
  for (const auto& e : j["srings"]) CHECK(e["schurian"] == true);

  ClassifyOptions opts;
  auto j8 = classify_to_json(GroupSpec::from_factors({2, 2, 2}), opts);
  CHECK(j8["count"] == 100);
  CHECK(j8["catalog"].size() == 5);
  int b_matched = 0;
  for (const auto& e : j8["srings"])
    if (!e["catalog"].is_null()) ++b_matched;
  CHECK(b_matched >= 5);
}

TEST_CASE("non-CI report JSON") {
  auto r = find_non_ci_search(GroupSpec::from_factors({2, 3}));
  auto j = non_ci_report_to_json(r);
  CHECK(j["witness_found"] == false);
  CHECK(j["group"] == "Z2xZ3");
}
