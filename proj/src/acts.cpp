#include "pact/acts.hpp"

#include <map>

#include "pact/digest.hpp"
#include "pact/errors.hpp"
#include "pact/parse.hpp"
#include "pact/reference.hpp"

namespace pact {

namespace {

ActModel make_model(const char* type, const char* fp, const char* pe) {
  return ActModel{type, parse_formula(fp), parse_formula(pe)};
}

const std::map<std::string, ActModel>& catalog() {
  static const std::map<std::string, ActModel> kCatalog = [] {
    std::map<std::string, ActModel> c;
    c.emplace("inform",
              make_model("inform", "Bel(?i, ?phi) and not Bel(?i, Bel(?j, ?phi))",
                         "Bel(?j, ?phi)"));
    c.emplace("propose",
              make_model("propose", "not Bel(?i, Done(propose(?i, ?j, ?phi)))",
                         "Done(propose(?i, ?j, ?phi)) and "
                         "Bel(?j, Done(propose(?i, ?j, ?phi)))"));
    c.emplace("acceptAct",
              make_model("acceptAct", "Bel(?i, Done(propose(?j, ?i, ?phi)))",
                         "Done(acceptAct(?i, ?j, ?phi)) and "
                         "Bel(?j, Done(acceptAct(?i, ?j, ?phi)))"));
    c.emplace("request",
              make_model("request", "Bel(?i, Done(propose(?j, ?i, ?phi)))",
                         "Bel(?j, Int(?i, Done(propose(?j, ?i, ?phi))))"));
    // The referential act: surfaced as a propose carrying the
    // conceptualization, with identification effects on the addressee.
    c.emplace("refer",
              make_model("refer", "Int(?i, refer(?i, ?j, ?rep)) and Bref(?i, ?rep)",
                         "Bel(?j, exists ?o2 . Int(?i, refer(?i, ?j, ?o2))) and "
                         "Int(?j, Bref(?j, ?rep)) and "
                         "Done(propose(?i, ?j, referedBy(?descr, ?rep))) and "
                         "Bel(?j, Done(propose(?i, ?j, referedBy(?descr, ?rep))))"));
    return c;
  }();
  return kCatalog;
}

}  // namespace

const ActModel& act_model(const std::string& act_type) {
  const auto& c = catalog();
  auto it = c.find(act_type);
  if (it == c.end()) throw UnknownActType(act_type);
  return it->second;
}

bool is_refer_payload(const FormulaPtr& payload) {
  return payload->kind == FormulaKind::Atom && payload->pred == "referedBy" &&
         payload->terms.size() == 2 &&
         payload->terms[0]->kind == TermKind::Description;
}

ActExprPtr DialogAct::to_act_expr() const {
  return ActExpr::atomic(act_type, actor,
                         {ActParam(TermPtr(Term::constant(addressee))),
                          ActParam(FormulaPtr(normalize(payload)))});
}

const ActModel& resolve_model(const World& world, const DialogAct& act) {
  if (act.act_type == "propose" && is_refer_payload(act.payload) &&
      act.payload->terms[1]->kind == TermKind::Constant) {
    const std::string& rep = act.payload->terms[1]->name;
    const AgentState& s = world.agent(act.actor);
    if (s.find_rep(rep)) {
      std::string key = render(refer_goal(act.actor, act.addressee, rep));
      for (const auto& item : s.agenda())
        if (render(item.goal) == key) return act_model("refer");
    }
  }
  if (act.act_type == "acceptAct" && is_refer_payload(act.payload)) {
    // The referent slot is perspectival (each side writes its own
    // representation), so the precondition matches the proposal by its
    // description.
    static const ActModel kAcceptRef = make_model(
        "acceptAct",
        "Bel(?i, exists ?r . Done(propose(?j, ?i, referedBy(?descr, ?r))))",
        "Done(acceptAct(?i, ?j, ?phi)) and Bel(?j, Done(acceptAct(?i, ?j, ?phi)))");
    return kAcceptRef;
  }
  return act_model(act.act_type);
}

Bindings act_bindings(const DialogAct& act) {
  Bindings b;
  b.terms.emplace("i", Term::constant(act.actor));
  b.terms.emplace("j", Term::constant(act.addressee));
  b.formulas.emplace("phi", normalize(act.payload));
  if (is_refer_payload(act.payload)) {
    b.terms.emplace("descr", act.payload->terms[0]);
    b.terms.emplace("rep", act.payload->terms[1]);
  }
  return b;
}

namespace {

// Closed-world precondition evaluation: negation succeeds when the
// inner condition cannot be established.
std::optional<std::string> fp_failure(const AgentState& s, const FormulaPtr& f) {
  switch (f->kind) {
    case FormulaKind::True:
      return std::nullopt;
    case FormulaKind::False:
      return render(f);
    case FormulaKind::And:
      for (const auto& k : f->kids)
        if (auto fail = fp_failure(s, k)) return fail;
      return std::nullopt;
    case FormulaKind::Or:
      for (const auto& k : f->kids)
        if (!fp_failure(s, k)) return std::nullopt;
      return render(f);
    case FormulaKind::Not:
      if (fp_failure(s, f->kids[0])) return std::nullopt;
      return render(f);
    case FormulaKind::Atom:
      if (f->pred == "Bref" && f->terms.size() == 2) {
        // Referential knowledge: the base binds the term. A constant is
        // bound when it names one of the agent's representations; a
        // functional term when an equality resolves it.
        if (f->terms[0]->kind != TermKind::Constant ||
            f->terms[0]->name != s.id())
          return render(f);
        const TermPtr& thing = f->terms[1];
        if (thing->kind == TermKind::Constant && s.find_rep(thing->name))
          return std::nullopt;
        FormulaPtr bound = Formula::exists(
            "v", Formula::equals(thing, Term::variable("v")));
        if (entails(s, bound)) return std::nullopt;
        return render(f);
      }
      break;
    default:
      break;
  }
  if (entails(s, f)) return std::nullopt;
  return render(f);
}

// Extra gate on accepting a conceptualization: the actor must have
// completed identification, the payload's referent slot must be the
// identified representation, and no pact of the context may hold the
// content's negation.
std::optional<std::string> accept_gate(const World& world, const DialogAct& act) {
  const AgentState& s = world.agent(act.actor);
  FormulaPtr payload = normalize(act.payload);
  std::string negated = render(normalize(Formula::negate(payload)));
  for (const auto& p : s.pacts())
    if (p.context == world.context && render(p.content) == negated)
      return "conflicting pact in context " + world.context;
  if (!is_refer_payload(payload)) return std::nullopt;
  std::set<std::string> preds;
  for (const auto& tc : world.truth_critical) preds.insert(tc.predicate);
  IdentificationOutcome outcome =
      identify(s, payload->terms[0], world.context, preds);
  if (!outcome.unique())
    return "identification not achieved for " + render(payload->terms[0]);
  if (payload->terms[1]->kind != TermKind::Constant ||
      payload->terms[1]->name != outcome.rep())
    return "payload referent is not the identified representation";
  return std::nullopt;
}

}  // namespace

std::optional<std::string> infeasible_reason(const World& world, const DialogAct& act) {
  if (act.actor == act.addressee) return "actor equals addressee";
  if (!is_ground(*act.payload)) return "payload not ground";
  const ActModel& model = resolve_model(world, act);
  FormulaPtr fp = normalize(model.fp(act_bindings(act)));
  if (auto fail = fp_failure(world.agent(act.actor), fp)) return fail;
  if (act.act_type == "acceptAct")
    if (auto fail = accept_gate(world, act)) return fail;
  return std::nullopt;
}

bool feasible(const World& world, const DialogAct& act) {
  return !infeasible_reason(world, act).has_value();
}

namespace {

std::vector<FormulaPtr> conjuncts_of(const FormulaPtr& f) {
  FormulaPtr n = normalize(f);
  if (n->kind == FormulaKind::And) return n->kids;
  return {n};
}

void tolerant_assert(World& world, const std::string& agent, const FormulaPtr& f) {
  AssertOutcome outcome;
  try {
    world.agents[agent] = assert_fact(world.agent(agent), f, &outcome);
  } catch (const InconsistentBelief& e) {
    world.trace.notes.push_back(
        {world.turn, "InconsistentBelief " + agent + ": " + std::string(e.what())});
  }
  for (const auto& w : outcome.warnings)
    world.trace.notes.push_back({world.turn, "warning " + agent + ": " + w});
}

}  // namespace

std::pair<World, Event> perform(const World& world, const DialogAct& act) {
  if (auto reason = infeasible_reason(world, act))
    throw InfeasibleAct(act.act_type + "(" + act.payload_text() + ")", *reason);

  const ActModel& model = resolve_model(world, act);
  World next = world;
  FormulaPtr pe = model.pe(act_bindings(act));
  std::vector<FormulaPtr> effects = conjuncts_of(pe);
  for (const auto& c : effects) tolerant_assert(next, act.addressee, c);

  FormulaPtr done = Formula::done(act.to_act_expr(), Formula::truth());
  tolerant_assert(next, act.actor, done);
  tolerant_assert(next, act.addressee, done);

  // Intentions achieved by the act's effects leave the actor's agenda.
  std::vector<std::string> achieved;
  achieved.push_back(render(done));
  for (const auto& c : effects) achieved.push_back(render(c));
  AgentState actor_state = next.agent(act.actor);
  for (const auto& key : achieved) {
    for (const auto& item : actor_state.agenda()) {
      if (render(item.goal) == key) {
        actor_state = actor_state.remove_goal(item.goal);
        break;
      }
    }
  }
  next.agents[act.actor] = actor_state;

  // The collective-acceptance formation rule fires on a completed
  // propose/accept pair.
  if (act.act_type == "acceptAct") {
    FormulaPtr payload = normalize(act.payload);
    std::string key = render(payload);
    std::optional<std::string> proposal;
    for (const auto& e : next.trace.events) {
      if (e.act_type != "propose" || e.actor != act.addressee ||
          e.addressee != act.actor)
        continue;
      if (is_refer_payload(payload)) {
        if (e.payload.rfind("referedBy(", 0) != 0) continue;
        FormulaPtr other = parse_formula(e.payload);
        if (is_refer_payload(other) &&
            render(other->terms[0]) == render(payload->terms[0]))
          proposal = e.payload;
      } else if (e.payload == key) {
        proposal = e.payload;
      }
    }
    if (proposal) {
      // The accept event must be on record before the formation rule
      // runs; append a provisional event and fill the digest below.
      Event pending;
      pending.index = static_cast<int>(next.trace.events.size());
      pending.turn = next.turn;
      pending.actor = act.actor;
      pending.addressee = act.addressee;
      pending.act_type = act.act_type;
      pending.payload = act.payload_text();
      next.trace.events.push_back(pending);
      if (is_refer_payload(payload)) {
        FormulaPtr proposed = parse_formula(*proposal);
        std::string rep_proposer = proposed->terms[1]->name;
        std::string rep_acceptor = payload->terms[1]->name;
        next = register_pact(std::move(next), act.addressee, act.actor,
                             payload->terms[0], rep_proposer, rep_acceptor);
      } else {
        next = register_content_pact(std::move(next), act.addressee, act.actor,
                                     payload);
      }
      Event& ev = next.trace.events.back();
      ev.digest = to_hex(fnv1a64(next.agent(act.actor).dump() +
                                 next.agent(act.addressee).dump()));
      return {next, ev};
    }
  }

  Event ev;
  ev.index = static_cast<int>(next.trace.events.size());
  ev.turn = next.turn;
  ev.actor = act.actor;
  ev.addressee = act.addressee;
  ev.act_type = act.act_type;
  ev.payload = act.payload_text();
  ev.digest = to_hex(
      fnv1a64(next.agent(act.actor).dump() + next.agent(act.addressee).dump()));
  next.trace.events.push_back(ev);
  return {next, ev};
}

}  // namespace pact
