#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pmt::bench {

struct Check {
  std::string scenario;
  std::string check;
  std::string expected;
  std::string got;
  bool pass = false;
  std::string paper_ref;  // the mathematical statement the check encodes
};

struct UnknownScenario : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct BenchOptions {
  unsigned threads = 1;
};

// registry order, which is also the run_all order
const std::vector<std::string>& scenario_names();

std::vector<Check> run_scenario(const std::string& name, const BenchOptions& opts = {});
std::vector<Check> run_all(const BenchOptions& opts = {});

bool all_passed(const std::vector<Check>& report);

// JSON array of {scenario, check, expected, got, pass, paper_ref}
std::string to_json(const std::vector<Check>& report);

}  // namespace pmt::bench
