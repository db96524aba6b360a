#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pact/errors.hpp"
#include "pact/logic.hpp"
#include "pact/mental_state.hpp"
#include "pact/parse.hpp"

using namespace pact;

namespace {

AgentState state_with(const std::string& id, std::vector<std::string> facts,
                      int nesting = 2) {
  AgentState s(id, nesting);
  for (const auto& f : facts) s = assert_fact(s, parse_formula(f));
  return s;
}

// Random ground facts drawn from a small vocabulary, shaped like the
// bases the engine actually produces.
struct FactGen {
  std::mt19937_64 rng{777};

  int pick(int n) { return static_cast<int>(rng() % n); }

  std::string constant() {
    static const char* cs[] = {"a", "b", "l", "m"};
    return cs[pick(4)];
  }

  std::string term() {
    if (pick(3) == 0) return std::string("name(") + constant() + ")";
    return constant();
  }

  std::string atom() {
    switch (pick(4)) {
      case 0: return "p(" + term() + ")";
      case 1: return "q(" + term() + ")";
      case 2: return "rel(" + term() + ", " + term() + ")";
      default: return "name(" + constant() + ") = " + constant();
    }
  }

  std::string fact(int depth) {
    if (depth <= 0) return atom();
    switch (pick(6)) {
      case 0: return "not " + atom();
      case 1: return "Bel(laura, " + fact(depth - 1) + ")";
      case 2: return "MB(tom, laura, " + fact(depth - 1) + ")";
      case 3: return "MB(laura, tom, " + fact(depth - 1) + ")";
      case 4: return "Int(tom, " + atom() + ")";
      default: return atom();
    }
  }
};

}  // namespace

TEST_CASE("assert_fact: single equality lands in an empty base") {
  AgentState laura("laura", 2);
  laura = assert_fact(laura, parse_formula("name(l) = chezDominique"));
  CHECK(laura.facts().size() == 1);
}

TEST_CASE("assert_fact: conjunctions split") {
  AgentState s = state_with("tom", {"p and q"});
  CHECK(s.facts().size() == 2);
}

TEST_CASE("assert_fact: conflicting name refused, state unchanged") {
  AgentState s = state_with("tom", {"name(l) = chezDominique"});
  CHECK_THROWS_AS(assert_fact(s, parse_formula("name(l) = restaurantLaPetiteMaison")),
                  InconsistentBelief);
  CHECK(s.facts().size() == 1);
}

TEST_CASE("assert_fact: direct negation refused") {
  AgentState s = state_with("tom", {"p"});
  CHECK_THROWS_AS(assert_fact(s, parse_formula("not p")), InconsistentBelief);
}

TEST_CASE("assert_fact: strips first-person wrappers") {
  AgentState s = state_with("tom", {"Bel(tom, p)"});
  REQUIRE(s.facts().size() == 1);
  CHECK(render(s.facts()[0]) == "p");
}

TEST_CASE("assert_fact: nesting budget truncates with a warning") {
  AgentState s("tom", 2);
  AssertOutcome outcome;
  s = assert_fact(s, parse_formula("Bel(laura, Bel(tom, Bel(laura, p)))"), &outcome);
  REQUIRE(outcome.warnings.size() == 1);
  REQUIRE(s.facts().size() == 1);
  CHECK(modal_depth(*s.facts()[0]) <= 2);
}

TEST_CASE("entails: shared belief yields the first-person projection") {
  AgentState s = state_with("tom", {"MB(tom, laura, p)"});
  CHECK(entails(s, parse_formula("Bel(tom, p)")));
  CHECK(entails(s, parse_formula("p")));
  CHECK(entails(s, parse_formula("Bel(laura, p)")));
}

TEST_CASE("entails: empty base holds nothing") {
  AgentState s("tom", 2);
  CHECK_FALSE(entails(s, parse_formula("p")));
  CHECK(entails(s, parse_formula("true")));
}

TEST_CASE("entails: equality substitution into atom arguments") {
  AgentState s = state_with("tom", {"name(l) = chezDominique",
                                    "restaurant(name(l))"});
  CHECK(entails(s, parse_formula("restaurant(chezDominique)")));
}

TEST_CASE("accept: records a pact against one's own beliefs") {
  AgentState tom = state_with("tom", {"name(l) = restaurantLaPetiteMaison"});
  FormulaPtr content =
      parse_formula("referedBy(iota ?x . name(?x) = chezDominique, o)");
  tom = accept(tom, content, "laura", "lunch");
  CHECK(tom.pacts().size() == 1);
  // Beliefs untouched.
  CHECK(tom.facts().size() == 1);
}

TEST_CASE("accept: idempotent") {
  AgentState s("tom", 2);
  s = accept(s, parse_formula("p"), "laura", "lunch");
  s = accept(s, parse_formula("p"), "laura", "lunch");
  CHECK(s.pacts().size() == 1);
}

TEST_CASE("accept: negation in the same context refused") {
  AgentState s("tom", 2);
  s = accept(s, parse_formula("p"), "laura", "lunch");
  CHECK_THROWS_AS(accept(s, parse_formula("not p"), "laura", "lunch"),
                  InconsistentAcceptance);
  // A different context is free to disagree.
  CHECK_NOTHROW(accept(s, parse_formula("not p"), "laura", "dinner"));
}

TEST_CASE("end_context: drops pacts wholesale") {
  AgentState s("tom", 2);
  s = accept(s, parse_formula("p"), "laura", "lunch");
  s = accept(s, parse_formula("q"), "laura", "lunch");
  s = accept(s, parse_formula("r"), "laura", "dinner");
  s = end_context(s, "lunch");
  REQUIRE(s.pacts().size() == 1);
  CHECK(s.pacts()[0].context == "dinner");
}

TEST_CASE("presumes: pact first, beliefs as fallback") {
  AgentState s("tom", 2);
  CHECK_FALSE(presumes(s, parse_formula("p"), "lunch"));

  // All four belief/pact combinations for p.
  AgentState believes = state_with("tom", {"p"});
  CHECK(presumes(believes, parse_formula("p"), "lunch"));

  AgentState denies = state_with("tom", {"not p"});
  CHECK_FALSE(presumes(denies, parse_formula("p"), "lunch"));

  AgentState pact_only =
      accept(AgentState("tom", 2), parse_formula("p"), "laura", "lunch");
  CHECK(presumes(pact_only, parse_formula("p"), "lunch"));
  CHECK_FALSE(presumes(pact_only, parse_formula("p"), "dinner"));

  AgentState conflict = accept(denies, parse_formula("p"), "laura", "lunch");
  CHECK(presumes(conflict, parse_formula("p"), "lunch"));  // pact wins
  CHECK_FALSE(presumes(conflict, parse_formula("p"), "dinner"));
}

TEST_CASE("presumes: monotone in pacts within a context") {
  FactGen gen;
  for (int round = 0; round < 50; ++round) {
    AgentState s("tom", 2);
    for (int i = 0; i < 3; ++i) {
      try {
        s = assert_fact(s, parse_formula(gen.fact(1)));
      } catch (const InconsistentBelief&) {
      }
    }
    FormulaPtr query = parse_formula(gen.fact(1));
    bool before = presumes(s, query, "ctx");
    try {
      s = accept(s, parse_formula(gen.atom()), "laura", "ctx");
    } catch (const InconsistentAcceptance&) {
      continue;
    }
    if (before) CHECK(presumes(s, query, "ctx"));
  }
}

TEST_CASE("accept never changes belief-only entailment") {
  FactGen gen;
  for (int round = 0; round < 50; ++round) {
    AgentState s("tom", 2);
    for (int i = 0; i < 4; ++i) {
      try {
        s = assert_fact(s, parse_formula(gen.fact(1)));
      } catch (const InconsistentBelief&) {
      }
    }
    std::vector<FormulaPtr> queries;
    for (int i = 0; i < 10; ++i) queries.push_back(parse_formula(gen.fact(1)));
    std::vector<bool> before;
    for (const auto& q : queries) before.push_back(entails(s, q));
    for (int i = 0; i < 3; ++i) {
      try {
        s = accept(s, parse_formula(gen.atom()), "laura", "ctx");
      } catch (const InconsistentAcceptance&) {
      }
    }
    for (size_t i = 0; i < queries.size(); ++i)
      CHECK(entails(s, queries[i]) == before[i]);
  }
}

TEST_CASE("belief base invariants survive random operation sequences") {
  FactGen gen;
  for (int round = 0; round < 60; ++round) {
    AgentState s("tom", 2);
    for (int i = 0; i < 10; ++i) {
      std::string f = gen.fact(2);
      try {
        if (gen.pick(3) == 0)
          s = accept(s, parse_formula(gen.atom()), "laura", "ctx");
        else
          s = assert_fact(s, parse_formula(f));
      } catch (const InconsistentBelief&) {
      } catch (const InconsistentAcceptance&) {
      }
    }
    ConsistencyReport report = consistency_report(s);
    CHECK(report.belief_violations.empty());
    CHECK(report.acceptance_violations.empty());
    for (const auto& f : s.facts()) {
      CHECK(modal_depth(*f) <= 2);
      CHECK(f->kind != FormulaKind::And);
    }
  }
}

TEST_CASE("consistency report: empty state") {
  ConsistencyReport report = consistency_report(AgentState("tom", 2));
  CHECK(report.belief_violations.empty());
  CHECK(report.acceptance_violations.empty());
  CHECK(report.cross_conflicts.empty());
}

TEST_CASE("consistency report: cross belief/acceptance conflict is informational") {
  AgentState tom = state_with(
      "tom", {"name(l) = restaurantLaPetiteMaison", "restaurant(l)", "beenTogether(l)"});
  MentalRepresentation rep;
  rep.id = "o";
  rep.world_anchor = "rest_main";
  rep.descriptors = {parse_formula("restaurant(?self)"),
                     parse_formula("beenTogether(?self)")};
  tom.add_rep(rep);
  tom = accept(tom, parse_formula("referedBy(iota ?x . name(?x) = chezDominique, o)"),
               "laura", "lunch");
  ConsistencyReport report = consistency_report(tom);
  CHECK(report.belief_violations.empty());
  CHECK(report.acceptance_violations.empty());
  REQUIRE(report.cross_conflicts.size() == 1);
  CHECK(report.cross_conflicts[0].first == "name(l) = restaurantLaPetiteMaison");
  CHECK(report.cross_conflicts[0].second == "name(l) = chezDominique");
}

TEST_CASE("rep_denotation: unique believed referent") {
  AgentState tom = state_with("tom", {"restaurant(l)", "beenTogether(l)",
                                      "restaurant(m)"});
  MentalRepresentation rep;
  rep.id = "o";
  rep.world_anchor = "w";
  rep.descriptors = {parse_formula("restaurant(?self)"),
                     parse_formula("beenTogether(?self)")};
  auto denot = rep_denotation(tom, rep);
  REQUIRE(denot.has_value());
  CHECK((*denot)->name == "l");

  MentalRepresentation vague;
  vague.id = "v";
  vague.world_anchor = "w2";
  vague.descriptors = {parse_formula("restaurant(?self)")};
  CHECK_FALSE(rep_denotation(tom, vague).has_value());
}

TEST_CASE("entails agrees with the brute-force closure enumerator") {
  FactGen gen;
  int queries_checked = 0;
  for (int round = 0; round < 150; ++round) {
    AgentState s("tom", 2);
    int target = gen.pick(8) + 1;
    for (int i = 0; i < target; ++i) {
      try {
        s = assert_fact(s, parse_formula(gen.fact(2)));
      } catch (const InconsistentBelief&) {
      }
    }
    for (int q = 0; q < 12; ++q) {
      std::string text;
      switch (gen.pick(5)) {
        case 0: text = gen.fact(2); break;
        case 1: text = "Bel(tom, " + gen.fact(1) + ")"; break;
        case 2: text = gen.fact(1) + " and " + gen.fact(1); break;
        case 3: text = gen.fact(1) + " or " + gen.fact(1); break;
        default: text = "exists ?w . p(?w)"; break;
      }
      FormulaPtr query = parse_formula(text);
      CAPTURE(text);
      bool via_engine = entails(s, query);
      bool via_oracle = oracle::brute_entails(s, query);
      CHECK(via_engine == via_oracle);
      ++queries_checked;
    }
  }
  CHECK(queries_checked >= 1000);
}
