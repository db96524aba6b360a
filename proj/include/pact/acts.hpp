#pragma once

#include <optional>
#include <string>
#include <utility>

#include "pact/ast.hpp"
#include "pact/logic.hpp"
#include "pact/world.hpp"

namespace pact {

// Communicative-act model: feasibility precondition and perlocutionary
// effect as templates over ?i (actor), ?j (addressee), ?phi (payload)
// and, for referential acts, ?descr / ?rep.
struct ActModel {
  std::string act_type;
  FormulaPtr fp_template;
  FormulaPtr pe_template;

  FormulaPtr fp(const Bindings& b) const { return instantiate(fp_template, b); }
  FormulaPtr pe(const Bindings& b) const { return instantiate(pe_template, b); }
};

// An instantiated communicative act ready to perform.
struct DialogAct {
  std::string act_type;  // inform | propose | acceptAct | request
  std::string actor;
  std::string addressee;
  FormulaPtr payload;

  ActExprPtr to_act_expr() const;
  std::string payload_text() const { return render(payload); }
};

// Catalog lookup. Throws UnknownActType.
const ActModel& act_model(const std::string& act_type);

// True when the payload is referedBy(description, rep).
bool is_refer_payload(const FormulaPtr& payload);

// Chooses the model governing this act: a propose whose payload carries
// a referedBy conceptualization and whose actor holds the matching
// refer intention is the surface form of the referential act.
const ActModel& resolve_model(const World& world, const DialogAct& act);

// Template bindings for an act instance.
Bindings act_bindings(const DialogAct& act);

// Evaluates the instantiated feasibility precondition against the
// actor's state (closed-world negation), plus the reference-specific
// gate on accepting conceptualizations. Returns the first unsatisfied
// condition, or nothing when feasible.
std::optional<std::string> infeasible_reason(const World& world, const DialogAct& act);

bool feasible(const World& world, const DialogAct& act);

// Performs the act: asserts the perlocutionary effect into the
// addressee, records Done(act) in both participants, discharges actor
// intentions matched by the effects, forms conceptual pacts when the
// act completes a propose/accept pair, and appends the trace event.
// Throws InfeasibleAct; the input world is left untouched in that case.
std::pair<World, Event> perform(const World& world, const DialogAct& act);

}  // namespace pact
