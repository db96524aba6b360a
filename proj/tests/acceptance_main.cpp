// Acceptance suite: one line per criterion, nonzero exit on any
// failure. Everything here runs end-to-end against the shipped
// fixtures and seeded random corpora.

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fuzz.hpp"
#include "oracles.hpp"
#include "pact/acts.hpp"
#include "pact/engine.hpp"
#include "pact/logic.hpp"
#include "pact/parse.hpp"
#include "pact/reference.hpp"
#include "pact/scenario.hpp"
#include "pact/simulator.hpp"

using namespace pact;

namespace {

int failures = 0;

void report(int number, const char* name, bool ok, const std::string& detail = "") {
  std::printf("%s  %2d. %s%s%s\n", ok ? "PASS" : "FAIL", number, name,
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!ok) ++failures;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "<unreadable: " + path + ">";
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

World run_fixture(const std::string& name) {
  return run(load_scenario_file(std::string(PACT_SCENARIO_DIR) + "/" + name));
}

bool has_note(const World& w, const std::string& needle) {
  for (const auto& n : w.trace.notes)
    if (n.text.find(needle) != std::string::npos) return true;
  return false;
}

// --- 1. golden restaurant trace -----------------------------------------

void criterion_golden_restaurant() {
  World w = run_fixture("restaurant.yaml");
  bool ok = w.trace.events.size() == 4;
  std::string detail;
  if (ok) {
    const char* want[] = {"propose", "request", "propose", "acceptAct"};
    for (int i = 0; i < 4; ++i)
      if (w.trace.events[i].act_type != want[i]) ok = false;
    if (!ok) detail = "act sequence differs";
  } else {
    detail = "expected 4 acts, got " + std::to_string(w.trace.events.size());
  }
  std::string trace = serialize_trace(w);
  std::string golden = read_file(std::string(PACT_GOLDEN_DIR) + "/restaurant.trace");
  if (trace != golden) {
    ok = false;
    detail += " trace differs from golden";
  }
  if (!presumes(w.agent("laura"),
                parse_formula("CollAcc(laura, tom, referedBy(iota ?x . name(?x) = "
                              "chezDominique, lprime))"),
                "lunch")) {
    ok = false;
    detail += " missing CollAcc";
  }
  if (!entails(w.agent("laura"),
               parse_formula("MB(laura, tom, Int(tom, refer(tom, laura, lprime)))"))) {
    ok = false;
    detail += " missing mutual understanding";
  }
  if (!entails(w.agent("laura"),
               parse_formula("MB(laura, tom, meetingPlace(lunch) = l)"))) {
    ok = false;
    detail += " missing task-level shared belief";
  }
  report(1, "golden restaurant trace (U1-U4, byte-exact, final-state facts)", ok,
         detail);
}

// --- 2. deception contrast ------------------------------------------------

void criterion_deception_contrast() {
  World ca = run_fixture("restaurant.yaml");
  bool ok = !has_note(ca, "InconsistentBelief");
  std::string detail;
  ConsistencyReport tom = consistency_report(ca.agent("tom"));
  ConsistencyReport laura = consistency_report(ca.agent("laura"));
  if (!tom.belief_violations.empty() || !laura.belief_violations.empty()) {
    ok = false;
    detail += " belief violations in acceptance mode";
  }
  if (tom.cross_conflicts.size() != 1) {
    ok = false;
    detail += " tom cross conflicts = " + std::to_string(tom.cross_conflicts.size());
  }
  World mb = run_fixture("restaurant_mutual_belief.yaml");
  if (!has_note(mb, "InconsistentBelief tom")) {
    ok = false;
    detail += " mutual-belief run logged no refusal";
  }
  report(2, "deception contrast (acceptance clean, mutual belief refuses)", ok,
         detail);
}

// --- 3. basketball --------------------------------------------------------

void criterion_basketball() {
  World w = run_fixture("basketball.yaml");
  bool ok = !has_note(w, "InconsistentBelief");
  std::string detail;
  for (const char* agent : {"tom", "laura"}) {
    ConsistencyReport r = consistency_report(w.agent(agent));
    if (!r.belief_violations.empty() || !r.acceptance_violations.empty()) {
      ok = false;
      detail += std::string(" ") + agent + " base inconsistent";
    }
    bool pact = false;
    for (const auto& p : w.agent(agent).pacts())
      if (render(p.content).find("basketballCourt(court)") != std::string::npos)
        pact = true;
    if (!pact) {
      ok = false;
      detail += std::string(" ") + agent + " has no pact";
    }
    if (!contradicts(w.agent(agent), parse_formula("basketballCourt(court)"))) {
      ok = false;
      detail += std::string(" ") + agent + " does not disbelieve the description";
    }
  }
  report(3, "basketball pact on a description both believe false", ok, detail);
}

// --- 4. truth-critical address --------------------------------------------

void criterion_truth_critical() {
  World w = run_fixture("postal_address.yaml");
  bool ok = w.trace.events.size() == 3;
  std::string detail;
  if (ok) {
    ok = w.trace.events[1].actor == "laura" &&
         w.trace.events[1].act_type == "propose" &&
         w.trace.events[1].payload.find("addrNewHampstead") != std::string::npos;
    if (!ok) detail = "no counter-proposal with the corrected address";
    if (w.trace.events[1].act_type == "acceptAct") detail = "wrong address accepted";
  } else {
    detail = "expected 3 acts, got " + std::to_string(w.trace.events.size());
  }
  bool pact = false;
  for (const auto& p : w.agent("laura").pacts())
    if (render(p.content).find("addrNewHampstead") != std::string::npos) pact = true;
  if (!pact) {
    ok = false;
    detail += " final pact is not on the corrected content";
  }
  report(4, "truth-critical address corrected, pact on corrected content", ok,
         detail);
}

// --- 5 & 6. fuzz corpus ----------------------------------------------------

struct FuzzStats {
  int scenarios = 0;
  int proposes = 0;
  int violations = 0;
  int equivalence_breaks = 0;
};

bool accept_matches(const std::string& propose_payload,
                    const std::string& accept_payload) {
  if (propose_payload == accept_payload) return true;
  FormulaPtr a = parse_formula(propose_payload);
  FormulaPtr b = parse_formula(accept_payload);
  return is_refer_payload(a) && is_refer_payload(b) &&
         render(a->terms[0]) == render(b->terms[0]);
}

void criteria_fuzz() {
  fuzz::Generator gen(0xfeed5eed);
  FuzzStats stats;
  for (uint64_t seed = 1; seed <= 500; ++seed) {
    World w = run(gen.make(seed));
    ++stats.scenarios;
    const auto& events = w.trace.events;
    // Obligation discharge: each propose is answered by the addressee's
    // next emitted act, and only in the three sanctioned ways.
    for (size_t i = 0; i < events.size(); ++i) {
      if (events[i].act_type != "propose") continue;
      ++stats.proposes;
      const Event* reply = nullptr;
      for (size_t j = i + 1; j < events.size() && !reply; ++j)
        if (events[j].actor == events[i].addressee) reply = &events[j];
      bool fine = false;
      if (reply) {
        if (reply->act_type == "acceptAct")
          fine = accept_matches(events[i].payload, reply->payload);
        else if (reply->act_type == "propose")
          fine = reply->payload != events[i].payload;
        else if (reply->act_type == "request")
          fine = true;
      }
      if (!fine) ++stats.violations;
    }
    // Pact formation iff a completed propose/accept pair is on record.
    // Conceptualization pacts are keyed by their description, since the
    // referent slot is perspectival.
    auto content_key = [](const FormulaPtr& f) {
      if (is_refer_payload(f)) return "descr:" + render(f->terms[0]);
      return "plain:" + render(f);
    };
    std::set<std::string> paired;
    for (size_t i = 0; i < events.size(); ++i) {
      if (events[i].act_type != "acceptAct") continue;
      for (size_t j = 0; j < i; ++j) {
        if (events[j].act_type == "propose" &&
            events[j].actor == events[i].addressee &&
            events[j].addressee == events[i].actor &&
            accept_matches(events[j].payload, events[i].payload))
          paired.insert(content_key(parse_formula(events[i].payload)));
      }
    }
    std::set<std::string> pacts;
    for (const auto& [id, s] : w.agents)
      for (const auto& p : s.pacts()) pacts.insert(content_key(p.content));
    if (paired != pacts) ++stats.equivalence_breaks;
  }
  report(5, "obligation discharge over fuzz corpus", stats.violations == 0,
         std::to_string(stats.scenarios) + " scenarios, " +
             std::to_string(stats.proposes) + " proposes, " +
             std::to_string(stats.violations) + " violations");
  report(6, "collective acceptance iff propose+accept over fuzz corpus",
         stats.equivalence_breaks == 0,
         std::to_string(stats.equivalence_breaks) + " disagreements");
}

// --- 7. entailment oracle ---------------------------------------------------

void criterion_entailment_oracle() {
  std::mt19937_64 rng(0xabc123);
  auto pick = [&](int n) { return static_cast<int>(rng() % n); };
  static const char* consts[] = {"a", "b", "l", "m"};
  auto term = [&]() -> std::string {
    if (pick(3) == 0) return std::string("name(") + consts[pick(4)] + ")";
    return consts[pick(4)];
  };
  auto atom = [&]() -> std::string {
    switch (pick(4)) {
      case 0: return "p(" + term() + ")";
      case 1: return "q(" + term() + ")";
      case 2: return "rel(" + term() + ", " + term() + ")";
      default: return "name(" + std::string(consts[pick(4)]) + ") = " + consts[pick(4)];
    }
  };
  std::function<std::string(int)> fact = [&](int depth) -> std::string {
    if (depth <= 0) return atom();
    switch (pick(6)) {
      case 0: return "not " + atom();
      case 1: return "Bel(laura, " + fact(depth - 1) + ")";
      case 2: return "MB(tom, laura, " + fact(depth - 1) + ")";
      case 3: return "MB(laura, tom, " + fact(depth - 1) + ")";
      case 4: return "Int(tom, " + atom() + ")";
      default: return atom();
    }
  };
  int checked = 0, disagreements = 0;
  for (int round = 0; round < 120; ++round) {
    AgentState s("tom", 2);
    int n = 1 + pick(8);
    for (int i = 0; i < n; ++i) {
      try {
        s = assert_fact(s, parse_formula(fact(2)));
      } catch (const InconsistentBelief&) {
      }
    }
    for (int q = 0; q < 10; ++q) {
      std::string text;
      switch (pick(5)) {
        case 0: text = fact(2); break;
        case 1: text = "Bel(tom, " + fact(1) + ")"; break;
        case 2: text = fact(1) + " and " + fact(1); break;
        case 3: text = fact(1) + " or " + fact(1); break;
        default: text = "exists ?w . q(?w)"; break;
      }
      FormulaPtr query = parse_formula(text);
      if (entails(s, query) != oracle::brute_entails(s, query)) ++disagreements;
      ++checked;
    }
  }
  report(7, "entailment equals brute-force closure enumeration",
         disagreements == 0 && checked >= 1000,
         std::to_string(checked) + " queries, " + std::to_string(disagreements) +
             " disagreements");
}

// --- 8. identification oracle -----------------------------------------------

void criterion_identify_oracle() {
  std::mt19937_64 rng(0x1de9);
  auto pick = [&](int n) { return static_cast<int>(rng() % n); };
  static const char* unary[] = {"p", "q", "big", "red", "near"};
  static const char* values[] = {"a", "b", "c"};
  int checked = 0, disagreements = 0;
  for (int round = 0; round < 400; ++round) {
    AgentState s("laura", 2);
    int reps = 1 + pick(6);
    for (int r = 0; r < reps; ++r) {
      MentalRepresentation rep;
      rep.id = "r" + std::to_string(r);
      rep.world_anchor = "w" + std::to_string(pick(4));
      int nd = 1 + pick(4);
      for (int d = 0; d < nd; ++d) {
        if (pick(3) == 0)
          rep.descriptors.push_back(
              parse_formula(std::string("name(?self) = ") + values[pick(3)]));
        else
          rep.descriptors.push_back(
              parse_formula(std::string(unary[pick(5)]) + "(?self)"));
      }
      s.add_rep(rep);
    }
    std::vector<std::string> body;
    int k = 1 + pick(3);
    for (int i = 0; i < k; ++i) {
      if (pick(3) == 0)
        body.push_back(std::string("name(?x) = ") + values[pick(3)]);
      else
        body.push_back(std::string(unary[pick(5)]) + "(?x)");
    }
    std::string text = "iota ?x . ";
    if (body.size() == 1) {
      text += body[0];
    } else {
      text += "(" + body[0];
      for (size_t i = 1; i < body.size(); ++i) text += " and " + body[i];
      text += ")";
    }
    TermPtr d = parse_term(text);
    IdentificationOutcome got = identify(s, d, "ctx");
    std::vector<std::string> ids = got.rep_ids;
    std::vector<std::string> expect = oracle::brute_identify(s, d, "ctx");
    std::sort(ids.begin(), ids.end());
    std::sort(expect.begin(), expect.end());
    if (ids != expect) ++disagreements;
    ++checked;
  }
  report(8, "identification equals the exhaustive matcher",
         disagreements == 0 && checked >= 400,
         std::to_string(checked) + " stores, " + std::to_string(disagreements) +
             " disagreements");
}

// --- 9. shared-belief unfolding ----------------------------------------------

void criterion_mb_unfolding() {
  FormulaPtr f = parse_formula("MB(tom, laura, p)");
  // The definition applied twice by hand.
  FormulaPtr hand = Formula::bel(
      "tom",
      Formula::conj(
          {Formula::atom("p", {}),
           Formula::bel("laura",
                        Formula::conj({Formula::atom("p", {}),
                                       Formula::mb("tom", "laura",
                                                   Formula::atom("p", {}))}))}));
  bool ok = equal(*normalize(unfold_mb(f, 2)), *normalize(hand));
  ok = ok && equal(*unfold_mb(f, 0), *f);
  report(9, "shared-belief unfolding matches the hand derivation", ok);
}

// --- 10. determinism ----------------------------------------------------------

void criterion_determinism() {
  bool ok = true;
  std::string detail;
  for (const char* fixture :
       {"restaurant.yaml", "restaurant_mutual_belief.yaml", "basketball.yaml",
        "postal_address.yaml"}) {
    World a = run_fixture(fixture);
    World b = run_fixture(fixture);
    if (serialize_trace(a) != serialize_trace(b)) {
      ok = false;
      detail += std::string(" ") + fixture;
    }
  }
  report(10, "fixtures are byte-deterministic across runs", ok, detail);
}

}  // namespace

int main() {
  criterion_golden_restaurant();
  criterion_deception_contrast();
  criterion_basketball();
  criterion_truth_critical();
  criteria_fuzz();
  criterion_entailment_oracle();
  criterion_identify_oracle();
  criterion_mb_unfolding();
  criterion_determinism();
  if (failures) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all acceptance criteria satisfied\n");
  return 0;
}
