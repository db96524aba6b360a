#pragma once

#include <optional>
#include <utility>

#include "pact/acts.hpp"
#include "pact/world.hpp"

namespace pact {

// Built-in reaction rules for an agent: the social obligation to react
// to a proposal (accept | counter-propose | request) and the
// cooperative reaction to a clarification request (re-propose).
std::vector<ReactionRule> builtin_reactions(const std::string& agent);

// Ingests one perceived event: every matching reaction rule pushes its
// instantiated goal with reaction origin. Non-matching events leave the
// state unchanged.
AgentState react(const World& world, const AgentState& state, const Event& event);

struct Deliberation {
  std::optional<DialogAct> act;
  FormulaPtr goal;  // the agenda goal the act discharges
  GoalOrigin origin = GoalOrigin::Task;
  std::vector<FormulaPtr> dead_reaction_goals;  // reactions with no viable act
};

// Scans the agenda in order and returns the first act that survives
// parameter binding, the Possible-veto check and feasibility, under the
// fixed tie-break order accept > propose > request > refer > inform,
// then canonical payload text.
Deliberation deliberate(const World& world, const std::string& agent);

// One turn: perceive unhandled events, drop satisfied task goals,
// deliberate, perform at most one act.
std::pair<World, std::optional<Event>> step_turn(World world, const std::string& agent);

bool quiescent(const World& world, const std::string& agent);

}  // namespace pact
