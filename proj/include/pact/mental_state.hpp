#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pact/ast.hpp"

namespace pact {

// An agent-private representation of some referent. The world anchor
// identifies the actual object; only the harness oracle may read it.
struct MentalRepresentation {
  std::string id;
  std::vector<FormulaPtr> descriptors;  // ground formulas over ?self
  std::string world_anchor;
};

// One conceptual-pact entry: content taken as a premiss towards a
// counterpart within a conversation context.
struct Pact {
  FormulaPtr content;
  std::string counterpart;
  std::string context;
};

enum class GoalOrigin { Task, Reaction };

struct AgendaItem {
  FormulaPtr goal;
  GoalOrigin origin;
};

struct AssertOutcome {
  std::vector<std::string> warnings;  // nesting truncations
  std::vector<FormulaPtr> added;
};

// Consistency report. Belief and acceptance violations are invariant
// breaches (expected empty); cross conflicts between the belief base
// and the acceptance store are informational.
struct ConsistencyReport {
  struct Conflict {
    std::string first;
    std::string second;
  };
  std::vector<Conflict> belief_violations;
  std::vector<Conflict> acceptance_violations;  // first holds the context
  std::vector<Conflict> cross_conflicts;        // first: belief, second: pact side

  std::vector<std::string> serialize(const std::string& agent) const;
};

// One agent's mental state. Operations are functional: they return an
// updated copy and never mutate in place, so states can be shared
// freely across threads.
class AgentState {
 public:
  AgentState() = default;
  AgentState(std::string id, int max_nesting)
      : id_(std::move(id)), max_nesting_(max_nesting) {}

  const std::string& id() const { return id_; }
  int max_nesting() const { return max_nesting_; }
  const std::vector<FormulaPtr>& facts() const { return facts_; }
  const std::vector<Pact>& pacts() const { return pacts_; }
  const std::vector<AgendaItem>& agenda() const { return agenda_; }
  const std::vector<MentalRepresentation>& reps() const { return reps_; }
  const std::set<std::string>& truth_critical() const { return truth_critical_; }

  void set_truth_critical(std::set<std::string> preds) {
    truth_critical_ = std::move(preds);
  }
  void add_rep(MentalRepresentation rep) { reps_.push_back(std::move(rep)); }

  const MentalRepresentation* find_rep(const std::string& rep_id) const;

  // Agenda management. Goals are deduplicated by canonical text;
  // reaction-origin goals stay ahead of task-origin goals, FIFO within
  // each class.
  AgentState push_goal(FormulaPtr goal, GoalOrigin origin) const;
  AgentState remove_goal(const FormulaPtr& goal) const;

  // Canonical multi-line dump; input for trace digests.
  std::string dump() const;

  friend AgentState with_fact_unchecked(AgentState s, FormulaPtr fact);
  friend AgentState with_pact(AgentState s, Pact pact);
  friend AgentState without_context(AgentState s, const std::string& context);

 private:
  std::string id_;
  int max_nesting_ = 2;
  std::vector<FormulaPtr> facts_;  // normalized, sorted by render text
  std::vector<Pact> pacts_;        // sorted by (context, counterpart, text)
  std::vector<AgendaItem> agenda_;
  std::vector<MentalRepresentation> reps_;
  std::set<std::string> truth_critical_;
};

// Adds a ground fact. The formula is normalized, top-level conjunctions
// split, redundant Bel(self, .) wrappers stripped, and formulas beyond
// the nesting budget truncated by dropping innermost modal layers (with
// a warning). Throws InconsistentBelief and leaves no partial update.
AgentState assert_fact(const AgentState& s, const FormulaPtr& f,
                       AssertOutcome* outcome = nullptr);

// Bounded-closure entailment: membership plus conjunction introduction,
// shared-belief unfolding within the nesting budget, distribution of
// Bel/MB over conjunctions, first-person introspection and single-step
// equality substitution into atom arguments. Sound for the closure,
// deliberately incomplete beyond it.
bool entails(const AgentState& s, const FormulaPtr& f);

// True when the base supports the negation of f (stored negation,
// conflicting equality binding, or clash of distinct constants).
bool contradicts(const AgentState& s, const FormulaPtr& f);

// Records a conceptual pact. Contradicting one's own beliefs is fine;
// contradicting an existing pact in the same context is not.
AgentState accept(const AgentState& s, const FormulaPtr& content,
                  const std::string& counterpart, const std::string& context);

// Drops every pact of the given context (contexts end wholesale).
AgentState end_context(const AgentState& s, const std::string& context);

// Acceptance-aware query: pacts of the context first, beliefs as the
// fallback.
bool presumes(const AgentState& s, const FormulaPtr& f, const std::string& context);

// True when some pact of the context supports f.
bool pact_entails(const AgentState& s, const FormulaPtr& f, const std::string& context);

ConsistencyReport consistency_report(const AgentState& s);

// The unique constant the representation's descriptors are believed to
// hold of, when there is exactly one such constant.
std::optional<TermPtr> rep_denotation(const AgentState& s,
                                      const MentalRepresentation& rep);

// Self variable reserved in descriptor formulas.
inline const std::string kSelfVar = "self";

}  // namespace pact
