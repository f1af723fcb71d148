#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>

#include "cosyflat/report.hpp"
#include "test_support.hpp"

using namespace cosyflat;

namespace {

const char* kZ2Config = R"json({
  "family": {"type": "z2", "a": 1.0},
  "checks": ["compat", "closedness", "cotton"],
  "tolerance": 1e-8
})json";

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("happy path with defaults") {
    const RunConfig cfg = parse_config(kZ2Config);
    CHECK(cfg.family.kind == FamilyParams::Kind::Z2);
    CHECK(cfg.family.a == 1.0);
    CHECK(cfg.checks.size() == 3);
    CHECK(cfg.tolerance == 1e-8);
    CHECK_FALSE(cfg.domain.has_value());
    CHECK_FALSE(cfg.grid.has_value());
    CHECK(cfg.killing_field[1] == "1");
  }

  SUBCASE("unknown check names the bad field") {
    try {
      parse_config(R"json({"family": {"type": "z2"}, "checks": ["compat", "foo"]})json");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("checks[1]") != std::string::npos);
      CHECK(std::string(e.what()).find("foo") != std::string::npos);
    }
  }

  SUBCASE("rejections") {
    CHECK_THROWS_AS(parse_config("not json"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"json({"checks": ["compat"]})json"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"json({"family": {"type": "z2"}, "checks": []})json"),
                    ConfigError);
    CHECK_THROWS_AS(
        parse_config(
            R"json({"family": {"type": "nope"}, "checks": ["compat"]})json"),
        ConfigError);
    CHECK_THROWS_AS(
        parse_config(
            R"json({"family": {"type": "custom"}, "checks": ["compat"]})json"),
        ConfigError);  // custom requires f and u
    CHECK_THROWS_AS(
        parse_config(
            R"json({"family": {"type": "z2"}, "checks": ["compat"], "tolerance": -1})json"),
        ConfigError);
    CHECK_THROWS_AS(
        parse_config(
            R"json({"family": {"type": "z2"}, "checks": ["compat"],
                "grid": [{"min":0,"max":1,"count":1},{"min":0,"max":1,"count":2},{"min":0,"max":1,"count":2}]})json"),
        ConfigError);
    CHECK_THROWS_AS(
        parse_config(
            R"json({"family": {"type": "kappa_nonzero"}, "checks": ["compat"]})json"),
        ConfigError);  // kappa required
  }

  SUBCASE("check vocabulary is closed and complete") {
    for (const char* name :
         {"compat", "closedness", "a-props", "nabla-phi", "commutation",
          "adapted-frame", "jacobi", "ricci-crosscheck", "cotton", "constsec",
          "killing", "theorem", "ode-integral"})
      CHECK(check_from_name(name).has_value());
    CHECK_FALSE(check_from_name("weyl").has_value());
  }
}

TEST_CASE("jsonl emission matches the frozen fixture") {
  ResidualReport r;
  r.check = "compat";
  r.point = {0.0, 0.0, 1.0};
  r.residual = 1e-13;
  r.tolerance = 1e-8;
  r.pass = true;
  CHECK(emit_jsonl({r}) ==
        "{\"check\":\"compat\",\"point\":[0,0,1],\"residual\":1e-13,"
        "\"tolerance\":1e-8,\"pass\":true}\n");
}

TEST_CASE("empty report list") {
  CHECK(emit_jsonl({}) == "");
  CHECK(emit_summary(std::vector<ResidualReport>{}) == "0 checks\n");
}

TEST_CASE("summary totals equal jsonl line counts") {
  const RunResult result = run(parse_config(kZ2Config));
  const std::string jsonl = emit_jsonl(result.reports);
  const auto lines = std::count(jsonl.begin(), jsonl.end(), '\n');
  CHECK(static_cast<std::size_t>(lines) == result.reports.size());
  int total = 0;
  for (const CheckSummary& cs : result.summary) total += cs.reports;
  CHECK(total == static_cast<int>(result.reports.size()));
  CHECK(result.all_pass);
}

TEST_CASE("reruns are byte-identical") {
  const RunConfig cfg = parse_config(kZ2Config);
  const std::string a = emit_jsonl(run(cfg).reports);
  const std::string b = emit_jsonl(run(cfg).reports);
  CHECK(a == b);
  CHECK_FALSE(a.empty());
}

TEST_CASE("report order is point-major, check-minor") {
  const RunConfig cfg = parse_config(kZ2Config);
  const RunResult result = run(cfg);
  const std::size_t ncheck = cfg.checks.size();
  REQUIRE(result.reports.size() % ncheck == 0);
  for (std::size_t i = 0; i < result.reports.size(); ++i) {
    CHECK(result.reports[i].check == check_name(cfg.checks[i % ncheck]));
    if (i % ncheck != 0)
      CHECK(result.reports[i].point == result.reports[i - 1].point);
  }
}

TEST_CASE("pass flag mirrors the tolerance comparison") {
  RunConfig cfg = parse_config(kZ2Config);
  cfg.tolerance = 1e-300;  // nothing passes at an absurd tolerance
  const RunResult result = run(cfg);
  CHECK_FALSE(result.all_pass);
  for (const ResidualReport& r : result.reports)
    CHECK(r.pass == (r.residual <= r.tolerance));
}

TEST_CASE("theorem check reports kappa in the summary") {
  RunConfig cfg = parse_config(R"json({
    "family": {"type": "z2"},
    "checks": ["theorem"],
    "tolerance": 1e-8
  })json");
  const RunResult result = run(cfg);
  CHECK(result.all_pass);
  REQUIRE(result.summary.size() == 1);
  CHECK(result.summary[0].note.find("kappa_hat=") != std::string::npos);
}

TEST_CASE("inapplicable checks fail with a note instead of crashing") {
  // the product family has A = 0: no adapted frame, no theorem, no constsec
  const RunConfig cfg = parse_config(R"json({
    "family": {"type": "product", "leaf_curvature": 0.0},
    "checks": ["compat", "jacobi", "theorem", "constsec"],
    "tolerance": 1e-8
  })json");
  const RunResult result = run(cfg);
  CHECK_FALSE(result.all_pass);
  for (const CheckSummary& cs : result.summary) {
    if (cs.name == "compat") {
      CHECK(cs.pass);
    } else {
      CHECK_FALSE(cs.pass);
      CHECK_FALSE(cs.note.empty());
    }
  }
}

TEST_CASE("ode-integral lines trail the grid block") {
  const RunConfig cfg = parse_config(R"json({
    "family": {"type": "kappa_nonzero", "kappa": -1.0, "C": 1.0, "D": 1.0,
               "u": "1", "t0": 1.0, "h": 0.001},
    "checks": ["compat", "ode-integral"],
    "tolerance": 1e-8
  })json");
  const RunResult result = run(cfg);
  CHECK(result.all_pass);
  bool seen_ode = false;
  for (const ResidualReport& r : result.reports) {
    if (r.check == "ode-integral") seen_ode = true;
    if (seen_ode) CHECK(r.check == "ode-integral");
  }
  CHECK(seen_ode);
}

TEST_CASE("grids outside the family domain are rejected") {
  const RunConfig cfg = parse_config(R"json({
    "family": {"type": "z2"},
    "grid": [{"min": -1, "max": 1, "count": 2},
             {"min": -1, "max": 1, "count": 2},
             {"min": 0.0, "max": 2, "count": 4}],
    "checks": ["compat"]
  })json");
  CHECK_THROWS_AS(run(cfg), ConfigError);  // z cells dip into the excluded region
}

TEST_CASE("emit_report dispatches on the format name") {
  ResidualReport r;
  r.check = "compat";
  r.point = {0.0, 0.0, 1.0};
  r.residual = 0.0;
  r.tolerance = 1e-8;
  r.pass = true;
  CHECK(emit_report({r}, "jsonl") == emit_jsonl({r}));
  CHECK(emit_report({r}, "summary") == emit_summary(std::vector<ResidualReport>{r}));
  CHECK_THROWS_AS(emit_report({r}, "xml"), ConfigError);
}

// a small generated corpus: assembled-valid configs parse; a single field
// corruption flips them to ConfigError
TEST_CASE("config corpus accepts valid and rejects corrupted documents") {
  testutil::Rng rng(101);
  const std::vector<std::string> families = {
      R"json({"type": "z2", "a": 2.0})json",
      R"json({"type": "custom", "f": "z", "u": "1+x^2"})json",
      R"json({"type": "kappa0", "u": "exp(x)", "A": 1, "B": 2, "C": 1, "D": 1})json",
      R"json({"type": "kappa_nonzero", "kappa": -1})json",
      R"json({"type": "product", "leaf_curvature": 1})json",
  };
  const std::vector<std::string> names = {
      "compat",        "closedness", "a-props",          "nabla-phi",
      "commutation",   "jacobi",     "ricci-crosscheck", "cotton",
      "adapted-frame", "constsec",   "killing",          "theorem",
      "ode-integral"};
  for (int n = 0; n < 60; ++n) {
    const std::string fam = families[rng.integer(0, families.size() - 1)];
    std::string checks = "[";
    const int ncheck = rng.integer(1, 4);
    for (int c = 0; c < ncheck; ++c) {
      if (c) checks += ',';
      checks += '"' + names[rng.integer(0, names.size() - 1)] + '"';
    }
    checks += ']';
    const std::string good =
        "{\"family\": " + fam + ", \"checks\": " + checks + "}";
    CHECK_NOTHROW(parse_config(good));

    std::string bad;
    switch (rng.integer(0, 3)) {
      case 0: bad = "{\"family\": " + fam + ", \"checks\": []}"; break;
      case 1:
        bad = "{\"family\": " + fam + ", \"checks\": [\"bogus\"]}";
        break;
      case 2:
        bad = "{\"family\": " + fam + ", \"checks\": " + checks +
              ", \"tolerance\": 0}";
        break;
      default:
        bad = "{\"checks\": " + checks + "}";
        break;
    }
    CHECK_THROWS_AS(parse_config(bad), ConfigError);
  }
}

TEST_CASE("custom family constsec estimates kappa by the median") {
  const RunConfig cfg = parse_config(R"json({
    "family": {"type": "custom", "f": "z", "u": "exp(x)"},
    "checks": ["constsec"],
    "tolerance": 1e-9
  })json");
  const RunResult result = run(cfg);
  CHECK(result.all_pass);
  REQUIRE(result.summary.size() == 1);
  CHECK(result.summary[0].note.find("kappa_hat=") != std::string::npos);
}
