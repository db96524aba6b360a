#include "pact/engine.hpp"

#include <algorithm>

#include "pact/errors.hpp"
#include "pact/logic.hpp"
#include "pact/parse.hpp"
#include "pact/reference.hpp"

namespace pact {

namespace {

ActParam event_payload(const Event& e) {
  FormulaPtr f = parse_formula(e.payload);
  return ActParam(f);
}

ActExprPtr event_act(const Event& e) {
  return ActExpr::atomic(e.act_type, e.actor,
                         {ActParam(TermPtr(Term::constant(e.addressee))),
                          event_payload(e)});
}

FormulaPtr payload_formula(const ActParam& p) {
  if (std::holds_alternative<FormulaPtr>(p)) return std::get<FormulaPtr>(p);
  const TermPtr& t = std::get<TermPtr>(p);
  if (t->kind == TermKind::Constant) return Formula::atom(t->name, {});
  throw Error("payload is not a proposition: " + print(*t));
}

}  // namespace

std::vector<ReactionRule> builtin_reactions(const std::string& agent) {
  std::vector<ReactionRule> rules;
  // Social obligation to react to a proposal.
  rules.push_back(ReactionRule{
      parse_act_expr("propose(?s, " + agent + ", ?phi)"),
      parse_formula("Done(acceptAct(" + agent + ", ?s, ?phi)) or Done(propose(" +
                    agent + ", ?s, ?phi)) or Done(request(" + agent +
                    ", ?s, ?phi))")});
  // Cooperative reaction to a clarification request.
  rules.push_back(ReactionRule{
      parse_act_expr("request(?s, " + agent + ", ?phi)"),
      parse_formula("Done(propose(" + agent + ", ?s, ?phi))")});
  return rules;
}

AgentState react(const World& world, const AgentState& state, const Event& event) {
  AgentState out = state;
  ActExprPtr ground = event_act(event);
  std::vector<ReactionRule> rules = builtin_reactions(state.id());
  auto extra = world.reactions.find(state.id());
  if (extra != world.reactions.end())
    rules.insert(rules.end(), extra->second.begin(), extra->second.end());
  for (const auto& rule : rules) {
    auto bindings = match_act(rule.trigger, ground);
    if (!bindings) continue;
    FormulaPtr goal = instantiate(rule.response, *bindings);
    if (!is_ground(*goal)) continue;
    out = out.push_goal(goal, GoalOrigin::Reaction);
  }
  return out;
}

namespace {

struct Candidate {
  DialogAct act;
  int rank;  // accept 0, propose 1, request 2, refer 3, inform 4
};

int rank_of(const std::string& act_type) {
  if (act_type == "acceptAct") return 0;
  if (act_type == "propose") return 1;
  if (act_type == "request") return 2;
  if (act_type == "refer") return 3;
  return 4;
}

// Descriptions this agent has already proposed to the addressee, read
// off its own Done record.
std::set<std::string> proposed_descriptions(const AgentState& s,
                                            const std::string& addressee) {
  std::set<std::string> out;
  for (const auto& f : s.facts()) {
    if (f->kind != FormulaKind::Done || f->act->kind != ActExprKind::Atomic) continue;
    const ActExpr& a = *f->act;
    if (a.act_type != "propose" || a.actor != s.id() || a.params.size() != 2) continue;
    if (!std::holds_alternative<TermPtr>(a.params[0]) ||
        std::get<TermPtr>(a.params[0])->name != addressee)
      continue;
    if (!std::holds_alternative<FormulaPtr>(a.params[1])) continue;
    const FormulaPtr& payload = std::get<FormulaPtr>(a.params[1]);
    if (is_refer_payload(payload)) out.insert(render(payload->terms[0]));
  }
  return out;
}

std::set<std::string> proposed_contents(const AgentState& s,
                                        const std::string& addressee) {
  std::set<std::string> out;
  for (const auto& f : s.facts()) {
    if (f->kind != FormulaKind::Done || f->act->kind != ActExprKind::Atomic) continue;
    const ActExpr& a = *f->act;
    if (a.act_type != "propose" || a.actor != s.id() || a.params.size() != 2) continue;
    if (!std::holds_alternative<TermPtr>(a.params[0]) ||
        std::get<TermPtr>(a.params[0])->name != addressee)
      continue;
    out.insert(render(payload_formula(a.params[1])));
  }
  return out;
}

// A content the agent itself holds that clashes with the proposal; the
// counter-proposal it would make instead.
std::optional<FormulaPtr> believed_alternative(const AgentState& s,
                                               const FormulaPtr& f) {
  FormulaPtr n = normalize(f);
  if (n->kind == FormulaKind::Equals) {
    for (const auto& fact : s.facts()) {
      if (fact->kind != FormulaKind::Equals) continue;
      for (int flip = 0; flip < 2; ++flip) {
        if (equal(*fact->terms[0], *n->terms[flip]) &&
            fact->terms[1]->kind == TermKind::Constant &&
            n->terms[1 - flip]->kind == TermKind::Constant &&
            fact->terms[1]->name != n->terms[1 - flip]->name)
          return FormulaPtr(fact);
      }
    }
    return std::nullopt;
  }
  if (n->kind == FormulaKind::Not && entails(s, n->kids[0])) return n->kids[0];
  FormulaPtr neg = normalize(Formula::negate(n));
  if (entails(s, neg)) return neg;
  return std::nullopt;
}

// Obligation goals carry the three-way disjunction pushed by the
// social rule; recognize the shape and pull out partner and content.
struct Obligation {
  std::string partner;
  FormulaPtr content;
};

std::optional<Obligation> as_obligation(const AgentState& s, const FormulaPtr& goal) {
  if (goal->kind != FormulaKind::Or || goal->kids.size() != 3) return std::nullopt;
  std::set<std::string> kinds;
  std::optional<Obligation> result;
  for (const auto& k : goal->kids) {
    if (k->kind != FormulaKind::Done || k->act->kind != ActExprKind::Atomic)
      return std::nullopt;
    const ActExpr& a = *k->act;
    if (a.actor != s.id() || a.params.size() != 2) return std::nullopt;
    kinds.insert(a.act_type);
    if (a.act_type == "acceptAct") {
      if (!std::holds_alternative<TermPtr>(a.params[0])) return std::nullopt;
      result = Obligation{std::get<TermPtr>(a.params[0])->name,
                          payload_formula(a.params[1])};
    }
  }
  if (kinds != std::set<std::string>{"acceptAct", "propose", "request"})
    return std::nullopt;
  return result;
}

// Truth-critical conjuncts of the description whose value clashes with
// the representation's own descriptors. Returns the corrected body
// conjuncts when the agent holds different values.
struct Correction {
  bool any_conflict = false;
  bool all_self_authoritative = true;
  std::vector<FormulaPtr> corrected;  // description body over the bound var
};

Correction correct_description(const World& world, const AgentState& s,
                               const TermPtr& descr,
                               const MentalRepresentation& rep) {
  Correction result;
  FormulaPtr body =
      rename_var(descr->body, descr->name, kSelfVar);
  std::vector<FormulaPtr> conjuncts =
      body->kind == FormulaKind::And ? body->kids : std::vector<FormulaPtr>{body};
  for (const auto& c : conjuncts) {
    FormulaPtr replacement = c;
    if (c->kind == FormulaKind::Equals &&
        c->terms[0]->kind == TermKind::FunctionApp &&
        world.is_truth_critical(c->terms[0]->name)) {
      std::string lhs_key = render(c->terms[0]);
      for (const auto& d : rep.descriptors) {
        for (const auto& dc : d->kind == FormulaKind::And
                                  ? d->kids
                                  : std::vector<FormulaPtr>{d}) {
          if (dc->kind == FormulaKind::Equals &&
              render(dc->terms[0]) == lhs_key &&
              render(dc->terms[1]) != render(c->terms[1])) {
            result.any_conflict = true;
            const TruthCritical* tc = world.truth_critical_for(c->terms[0]->name);
            if (!tc || tc->authority != s.id())
              result.all_self_authoritative = false;
            replacement = dc;
          }
        }
      }
    }
    result.corrected.push_back(
        rename_var(replacement, kSelfVar, descr->name));
  }
  return result;
}

std::vector<Candidate> obligation_candidates(const World& world, const AgentState& s,
                                             const Obligation& ob) {
  std::vector<Candidate> out;
  FormulaPtr content = normalize(ob.content);
  const std::string& partner = ob.partner;
  if (is_refer_payload(content)) {
    const TermPtr& descr = content->terms[0];
    std::set<std::string> preds;
    for (const auto& tc : world.truth_critical) preds.insert(tc.predicate);
    IdentificationOutcome outcome = identify(s, descr, world.context, preds);
    if (outcome.unique()) {
      const MentalRepresentation* rep = s.find_rep(outcome.rep());
      Correction corr = correct_description(world, s, descr, *rep);
      if (corr.any_conflict && corr.all_self_authoritative) {
        // The truth-critical value is wrong and this agent's word
        // settles it: counter-propose the corrected content.
        FormulaPtr corrected_body = corr.corrected.size() == 1
                                        ? corr.corrected[0]
                                        : Formula::conj(corr.corrected);
        TermPtr corrected =
            Term::description(descr->name, normalize(corrected_body));
        FormulaPtr new_content = Formula::atom(
            "referedBy", {corrected, Term::constant(outcome.rep())});
        out.push_back({DialogAct{"propose", s.id(), partner, new_content}, 1});
      } else {
        FormulaPtr accepted = Formula::atom(
            "referedBy", {descr, Term::constant(outcome.rep())});
        out.push_back({DialogAct{"acceptAct", s.id(), partner, accepted}, 0});
      }
    }
  } else {
    bool blocked = false;
    std::string negated = render(normalize(Formula::negate(content)));
    for (const auto& p : s.pacts())
      if (p.context == world.context && render(p.content) == negated) blocked = true;
    if (!blocked && !contradicts(s, content)) {
      out.push_back({DialogAct{"acceptAct", s.id(), partner, content}, 0});
    } else if (auto alt = believed_alternative(s, content)) {
      if (render(*alt) != render(content))
        out.push_back({DialogAct{"propose", s.id(), partner, *alt}, 1});
    }
  }
  // Asking for a new proposal is always open.
  out.push_back({DialogAct{"request", s.id(), partner, content}, 2});
  return out;
}

std::vector<Candidate> goal_candidates(const World& world, const AgentState& s,
                                       const FormulaPtr& goal) {
  std::vector<Candidate> out;
  if (auto ob = as_obligation(s, goal)) return obligation_candidates(world, s, *ob);

  // Direct Done goals: perform the named act; a repeated referential
  // propose (a clarification round) picks a fresh description.
  if (goal->kind == FormulaKind::Done && goal->act->kind == ActExprKind::Atomic &&
      goal->act->actor == s.id() && goal->act->params.size() == 2 &&
      std::holds_alternative<TermPtr>(goal->act->params[0])) {
    const ActExpr& a = *goal->act;
    std::string addressee = std::get<TermPtr>(a.params[0])->name;
    FormulaPtr payload = payload_formula(a.params[1]);
    if (a.act_type == "propose" && is_refer_payload(payload) &&
        payload->terms[1]->kind == TermKind::Constant) {
      std::set<std::string> proposed = proposed_descriptions(s, addressee);
      if (proposed.count(render(payload->terms[0]))) {
        try {
          TermPtr fresh = choose_description(s, payload->terms[1]->name, addressee,
                                             world.context, proposed);
          FormulaPtr new_payload = Formula::atom(
              "referedBy", {fresh, payload->terms[1]});
          out.push_back({DialogAct{"propose", s.id(), addressee, new_payload}, 1});
        } catch (const NoDistinguishingDescription&) {
          // no viable re-proposal
        }
        return out;
      }
    }
    if (a.act_type == "propose" && !is_refer_payload(payload)) {
      std::set<std::string> proposed = proposed_contents(s, addressee);
      if (proposed.count(render(payload))) {
        if (auto alt = believed_alternative(s, payload)) {
          if (!proposed.count(render(*alt)))
            out.push_back({DialogAct{"propose", s.id(), addressee, *alt}, 1});
        }
        return out;
      }
    }
    out.push_back({DialogAct{a.act_type, s.id(), addressee, payload},
                   rank_of(a.act_type)});
    return out;
  }

  // Refer intentions: surface the referential act as a propose carrying
  // the chosen conceptualization.
  if (goal->kind == FormulaKind::Atom && goal->pred == "refer" &&
      goal->terms.size() == 3 && goal->terms[0]->kind == TermKind::Constant &&
      goal->terms[0]->name == s.id() &&
      goal->terms[1]->kind == TermKind::Constant &&
      goal->terms[2]->kind == TermKind::Constant) {
    const std::string& addressee = goal->terms[1]->name;
    const std::string& rep = goal->terms[2]->name;
    if (s.find_rep(rep)) {
      try {
        TermPtr descr = choose_description(
            s, rep, addressee, world.context, proposed_descriptions(s, addressee));
        FormulaPtr payload =
            Formula::atom("referedBy", {descr, Term::constant(rep)});
        out.push_back({DialogAct{"propose", s.id(), addressee, payload}, 1});
      } catch (const NoDistinguishingDescription&) {
      }
    }
    return out;
  }

  // Catalog scan: any act whose effect contains the goal. This is what
  // lets an intention Bel(j, p) select inform.
  for (const char* type : {"inform", "propose", "acceptAct", "request"}) {
    const ActModel& model = act_model(type);
    FormulaPtr pe = model.pe_template;
    std::vector<FormulaPtr> conjuncts =
        pe->kind == FormulaKind::And ? pe->kids : std::vector<FormulaPtr>{pe};
    for (const auto& c : conjuncts) {
      Bindings seed;
      seed.terms.emplace("i", Term::constant(s.id()));
      FormulaPtr pattern = instantiate(c, seed);
      auto b = match(pattern, goal);
      if (!b) continue;
      auto j = b->terms.find("j");
      auto phi = b->formulas.find("phi");
      if (j == b->terms.end() || j->second->kind != TermKind::Constant) continue;
      if (j->second->name == s.id() || !world.agents.count(j->second->name)) continue;
      FormulaPtr payload;
      if (phi != b->formulas.end()) {
        payload = phi->second;
      } else {
        auto phi_term = b->terms.find("phi");
        if (phi_term == b->terms.end()) continue;
        payload = Formula::atom(phi_term->second->name, {});
      }
      out.push_back({DialogAct{type, s.id(), j->second->name, payload},
                     rank_of(type)});
    }
  }
  return out;
}

// Condition 3 of the rational axiom, checked syntactically: a stored
// Int(i, not Possible(Done(act))) vetoes the act.
bool vetoed(const AgentState& s, const DialogAct& act) {
  FormulaPtr veto = Formula::intend(
      s.id(), Formula::negate(Formula::possible(
                  Formula::done(act.to_act_expr(), Formula::truth()))));
  std::string key = render(veto);
  for (const auto& f : s.facts())
    if (render(f) == key) return true;
  return false;
}

}  // namespace

Deliberation deliberate(const World& world, const std::string& agent) {
  Deliberation result;
  const AgentState& s = world.agent(agent);
  for (const auto& item : s.agenda()) {
    std::vector<Candidate> candidates = goal_candidates(world, s, item.goal);
    candidates.erase(
        std::remove_if(candidates.begin(), candidates.end(),
                       [&](const Candidate& c) {
                         return !is_ground(*c.act.payload) || vetoed(s, c.act) ||
                                !feasible(world, c.act);
                       }),
        candidates.end());
    if (candidates.empty()) {
      if (item.origin == GoalOrigin::Reaction)
        result.dead_reaction_goals.push_back(item.goal);
      continue;
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& a, const Candidate& b) {
                if (a.rank != b.rank) return a.rank < b.rank;
                return a.act.payload_text() < b.act.payload_text();
              });
    result.act = candidates.front().act;
    result.goal = item.goal;
    result.origin = item.origin;
    return result;
  }
  return result;
}

bool quiescent(const World& world, const std::string& agent) {
  auto seen = world.perceived.find(agent);
  size_t n = seen == world.perceived.end() ? 0 : seen->second;
  return world.agent(agent).agenda().empty() && n >= world.trace.events.size();
}

std::pair<World, std::optional<Event>> step_turn(World world, const std::string& agent) {
  world.turn += 1;
  AgentState state = world.agent(agent);
  size_t& seen = world.perceived[agent];
  while (seen < world.trace.events.size()) {
    state = react(world, state, world.trace.events[seen]);
    ++seen;
  }
  world.agents[agent] = state;
  // Satisfied task intentions evaporate; reactions are discharged by
  // acting, not by the sweep.
  const std::vector<AgendaItem> agenda_snapshot = world.agent(agent).agenda();
  for (const auto& item : agenda_snapshot) {
    if (item.origin == GoalOrigin::Task &&
        goal_satisfied(world, agent, item.goal))
      world.agents[agent] = world.agent(agent).remove_goal(item.goal);
  }
  Deliberation d = deliberate(world, agent);
  for (const auto& dead : d.dead_reaction_goals) {
    world.trace.notes.push_back(
        {world.turn, "reaction goal dropped " + agent + ": " + render(dead)});
    world.agents[agent] = world.agent(agent).remove_goal(dead);
  }
  if (!d.act) return {world, std::nullopt};
  auto [next, event] = perform(world, *d.act);
  if (d.origin == GoalOrigin::Reaction)
    next.agents[agent] = next.agent(agent).remove_goal(d.goal);
  return {next, event};
}

}  // namespace pact
