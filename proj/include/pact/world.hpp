#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pact/mental_state.hpp"

namespace pact {

enum class CcgMode { CollectiveAcceptance, MutualBelief };

std::string to_string(CcgMode mode);

// One performed communicative act as recorded in the trace. The digest
// covers both participants' serialized states after all effects of the
// act, pact formation included.
struct Event {
  int index = 0;
  int turn = 0;
  std::string actor;
  std::string addressee;
  std::string act_type;
  std::string payload;  // canonical text
  std::string digest;

  std::string line() const;        // tab-separated trace line
  std::string transcript() const;  // "actor -> addressee : actType(payload)"
};

// Diagnostic emitted during a run (refused assertions, truncations,
// turn-limit). Part of the trace in chronological position.
struct Note {
  int turn = 0;
  std::string text;
};

struct Trace {
  std::vector<Event> events;
  std::vector<Note> notes;
};

// Engine-visible reaction rule: when a perceived act matches the
// trigger pattern (with the observer bound to ?me), the instantiated
// response goal is pushed with reaction origin.
struct ReactionRule {
  ActExprPtr trigger;   // act pattern, may contain ?vars
  FormulaPtr response;  // goal template over the trigger's ?vars
};

// Scenario-declared truth-critical predicate: its content must be
// literally right for the joint task; the authority is the agent whose
// word settles the value.
struct TruthCritical {
  std::string predicate;
  std::string authority;
};

struct World {
  std::string scenario_name = "scenario";
  std::map<std::string, AgentState> agents;
  std::vector<std::string> turn_order;  // exactly two, initiator first
  std::string context;
  CcgMode mode = CcgMode::CollectiveAcceptance;
  int max_turns = 20;
  int turn = 0;  // turns taken so far
  Trace trace;
  std::vector<TruthCritical> truth_critical;
  std::optional<FormulaPtr> task_fact;  // template over ?referent
  std::map<std::string, std::vector<ReactionRule>> reactions;  // per agent
  std::map<std::string, size_t> perceived;  // events ingested per agent

  const AgentState& agent(const std::string& id) const;
  std::string other(const std::string& id) const;
  const TruthCritical* truth_critical_for(const std::string& predicate) const;
  bool is_truth_critical(const std::string& predicate) const;
};

// Serializes the full trace: header, event lines, inline notes, final
// digest and report block. Byte-exact golden format; the header names
// the scenario by its stable name, never by an invocation path.
std::string serialize_trace(const World& world);

// Line-level diff of two trace texts; empty when equal.
std::vector<std::string> diff_lines(const std::string& expected,
                                    const std::string& actual);

}  // namespace pact
