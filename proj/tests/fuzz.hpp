// Random 2-agent scenario generation for the obligation-discharge and
// pact-formation properties. Every scenario is built directly as a
// World; seeds fix the corpus.
#pragma once

#include <random>
#include <string>
#include <vector>

#include "pact/logic.hpp"
#include "pact/mental_state.hpp"
#include "pact/parse.hpp"
#include "pact/reference.hpp"
#include "pact/world.hpp"

namespace fuzz {

using namespace pact;

struct Generator {
  std::mt19937_64 rng;

  explicit Generator(uint64_t seed) : rng(seed) {}

  int pick(int n) { return static_cast<int>(rng() % n); }

  std::string value() {
    static const char* vs[] = {"v0", "v1", "v2"};
    return vs[pick(3)];
  }

  std::string object() {
    static const char* os[] = {"c0", "c1", "c2", "c3"};
    return os[pick(4)];
  }

  std::string atom() {
    switch (pick(4)) {
      case 0: return "p(" + object() + ")";
      case 1: return "q(" + object() + ")";
      case 2: return "val(" + object() + ") = " + value();
      default: return "r(" + object() + ", " + object() + ")";
    }
  }

  std::string literal() { return pick(4) == 0 ? "not " + atom() : atom(); }

  void seed_beliefs(AgentState& s, int count) {
    for (int i = 0; i < count; ++i) {
      try {
        s = assert_fact(s, parse_formula(literal()));
      } catch (const InconsistentBelief&) {
      }
    }
  }

  // A proposition the agent can stand behind (for inform goals).
  std::string held_belief(const AgentState& s) {
    if (s.facts().empty()) return "";
    return render(s.facts()[pick(static_cast<int>(s.facts().size()))]);
  }

  World make(uint64_t scenario_seed) {
    rng.seed(scenario_seed);
    World w;
    w.context = "fuzz";
    w.max_turns = 24;
    w.turn_order = {"a", "b"};
    AgentState a("a", 2), b("b", 2);
    seed_beliefs(a, 1 + pick(4));
    seed_beliefs(b, 1 + pick(4));

    int goals = 1 + pick(3);
    for (int g = 0; g < goals; ++g) {
      AgentState& actor = pick(2) ? a : b;
      const std::string self = actor.id();
      const std::string other = self == "a" ? "b" : "a";
      switch (pick(3)) {
        case 0: {
          std::string fact = held_belief(actor);
          if (fact.empty()) break;
          actor = actor.push_goal(
              parse_formula("Bel(" + other + ", " + fact + ")"), GoalOrigin::Task);
          break;
        }
        default: {
          // Propose something, sometimes clashing with the other side.
          actor = actor.push_goal(
              parse_formula("Done(propose(" + self + ", " + other + ", " +
                            literal() + "))"),
              GoalOrigin::Task);
          break;
        }
      }
    }

    // Sometimes a straightforward referential episode.
    if (pick(5) < 2) {
      std::string pred = pick(2) ? "site" : "venue";
      std::string obj = "site0";
      a = assert_fact(a, parse_formula(pred + "(" + obj + ")"));
      a = assert_fact(a, parse_formula("Bel(b, " + pred + "(" + obj + "))"));
      MentalRepresentation speaker_rep;
      speaker_rep.id = "ra";
      speaker_rep.world_anchor = "anchor0";
      speaker_rep.descriptors = {parse_formula(pred + "(?self)")};
      a.add_rep(speaker_rep);
      MentalRepresentation hearer_rep;
      hearer_rep.id = "rb";
      hearer_rep.world_anchor = "anchor0";
      hearer_rep.descriptors = {parse_formula(pred + "(?self)")};
      b.add_rep(hearer_rep);
      a = a.push_goal(refer_goal("a", "b", "ra"), GoalOrigin::Task);
      auto [first, second] = meta_goals("a", "b", "ra");
      a = a.push_goal(first, GoalOrigin::Task);
      a = a.push_goal(second, GoalOrigin::Task);
    }

    w.agents.emplace("a", std::move(a));
    w.agents.emplace("b", std::move(b));
    w.perceived["a"] = 0;
    w.perceived["b"] = 0;
    return w;
  }
};

}  // namespace fuzz
