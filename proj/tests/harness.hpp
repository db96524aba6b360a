#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "pact/parse.hpp"
#include "pact/scenario.hpp"
#include "pact/world.hpp"

namespace harness {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline pact::World load_fixture(const std::string& name) {
  return pact::load_scenario_file(std::string(PACT_SCENARIO_DIR) + "/" + name);
}

inline std::string golden_path(const std::string& name) {
  return std::string(PACT_GOLDEN_DIR) + "/" + name;
}

// A bare two-agent world for direct act-level tests.
inline pact::World two_agent_world(const std::string& a = "tom",
                                   const std::string& b = "laura",
                                   int nesting = 2) {
  pact::World w;
  w.context = "ctx";
  w.turn_order = {a, b};
  w.agents.emplace(a, pact::AgentState(a, nesting));
  w.agents.emplace(b, pact::AgentState(b, nesting));
  w.perceived[a] = 0;
  w.perceived[b] = 0;
  return w;
}

inline pact::World with_facts(pact::World w, const std::string& agent,
                              std::vector<std::string> facts) {
  for (const auto& f : facts)
    w.agents[agent] = pact::assert_fact(w.agents[agent], pact::parse_formula(f));
  return w;
}

}  // namespace harness
