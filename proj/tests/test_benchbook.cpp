#include <doctest.h>

#include <algorithm>
#include <json.hpp>

#include "pmt/benchbook.hpp"

using namespace pmt::bench;

TEST_CASE("registry") {
  const auto& names = scenario_names();
  for (const char* required : {"entropy", "geometric", "hook", "non-temperature-pt",
                               "ground-state-violation", "key-lemma"})
    CHECK(std::find(names.begin(), names.end(), required) != names.end());
  CHECK_THROWS_AS(run_scenario("no-such-scenario"), UnknownScenario);
}

TEST_CASE("reports are deterministic and well formed") {
  for (const char* name : {"entropy", "decay", "neutral-asymptotics"}) {
    const auto a = run_scenario(name);
    const auto b = run_scenario(name, BenchOptions{4});
    CHECK(to_json(a) == to_json(b));
    CHECK(all_passed(a));
    const auto j = nlohmann::json::parse(to_json(a));
    REQUIRE(j.is_array());
    REQUIRE(j.size() == a.size());
    for (const auto& row : j) {
      for (const char* key : {"scenario", "check", "expected", "got", "pass", "paper_ref"})
        CHECK(row.contains(key));
      CHECK(row["scenario"] == name);
      CHECK_FALSE(row["paper_ref"].get<std::string>().empty());
    }
  }
}

TEST_CASE("ground-state scenario") {
  const auto r = run_scenario("ground-state-violation");
  CHECK(r.size() == 3);
  CHECK(all_passed(r));
}

TEST_CASE("all_passed sees failures") {
  std::vector<Check> r(2);
  r[0].pass = true;
  CHECK_FALSE(all_passed(r));
  r[1].pass = true;
  CHECK(all_passed(r));
}
