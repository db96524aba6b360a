#include "pact/reference.hpp"

#include <algorithm>
#include <map>

#include "pact/errors.hpp"
#include "pact/logic.hpp"
#include "pact/parse.hpp"

namespace pact {

namespace {

std::vector<FormulaPtr> conjuncts_of(const FormulaPtr& f) {
  FormulaPtr n = normalize(f);
  if (n->kind == FormulaKind::And) return n->kids;
  return {n};
}

bool is_truth_critical_equals(const FormulaPtr& f, const std::set<std::string>& preds) {
  return f->kind == FormulaKind::Equals &&
         f->terms[0]->kind == TermKind::FunctionApp && preds.count(f->terms[0]->name);
}

// Descriptor pool a representation offers for matching: its own
// descriptors plus the bodies of pact descriptions agreed for it.
std::vector<FormulaPtr> matching_pool(const AgentState& state,
                                      const MentalRepresentation& rep,
                                      const std::string& context) {
  std::vector<FormulaPtr> pool;
  for (const auto& d : rep.descriptors)
    for (const auto& c : conjuncts_of(d)) pool.push_back(c);
  for (const auto& p : state.pacts()) {
    if (p.context != context) continue;
    const FormulaPtr& content = p.content;
    if (content->kind != FormulaKind::Atom || content->pred != "referedBy" ||
        content->terms.size() != 2)
      continue;
    if (content->terms[1]->kind != TermKind::Constant ||
        content->terms[1]->name != rep.id)
      continue;
    const TermPtr& descr = content->terms[0];
    if (descr->kind != TermKind::Description) continue;
    for (const auto& c : conjuncts_of(descr->body))
      pool.push_back(rename_var(c, descr->name, kSelfVar));
  }
  return pool;
}

bool conjunct_matches(const FormulaPtr& wanted, const std::vector<FormulaPtr>& pool,
                      const std::set<std::string>& truth_critical) {
  std::string key = render(wanted);
  for (const auto& have : pool)
    if (render(have) == key) return true;
  if (is_truth_critical_equals(wanted, truth_critical)) {
    // Shape match: same truth-critical function of the same arguments,
    // value free to differ. Identification tolerates the wrong value.
    std::string lhs_key = render(wanted->terms[0]);
    for (const auto& have : pool)
      if (have->kind == FormulaKind::Equals && render(have->terms[0]) == lhs_key)
        return true;
  }
  return false;
}

}  // namespace

IdentificationOutcome identify(const AgentState& state, const TermPtr& description,
                               const std::string& context,
                               const std::set<std::string>& truth_critical) {
  if (description->kind != TermKind::Description)
    throw Error("identify: not a description term: " + print(*description));
  std::set<std::string> preds = truth_critical;
  for (const auto& p : state.truth_critical()) preds.insert(p);
  std::vector<std::string> hits;
  for (const auto& rep : state.reps()) {
    std::vector<FormulaPtr> pool = matching_pool(state, rep, context);
    FormulaPtr body =
        rename_var(description->body, description->name, kSelfVar);
    bool all = true;
    for (const auto& c : conjuncts_of(body)) {
      if (!conjunct_matches(c, pool, preds)) {
        all = false;
        break;
      }
    }
    if (all) hits.push_back(rep.id);
  }
  if (hits.empty()) return {IdentificationOutcome::Kind::NoMatch, {}};
  if (hits.size() == 1) return {IdentificationOutcome::Kind::Unique, hits};
  return {IdentificationOutcome::Kind::Ambiguous, hits};
}

namespace {

// The speaker's model of what the addressee takes the world to be:
// every gamma with Bel(addressee, gamma) in the closure, approximated
// through entailment over atoms about model constants.
struct AddresseeModel {
  std::vector<FormulaPtr> facts;  // ground atoms / equalities
  std::vector<TermPtr> objects;   // candidate referent constants
};

AddresseeModel addressee_model(const AgentState& state, const std::string& addressee) {
  AddresseeModel model;
  // Project the nested view out of the agent's own facts: conjuncts of
  // MB(addressee, ., .) / Bel(addressee, .) contents.
  std::vector<FormulaPtr> contents;
  for (const auto& f : state.facts()) {
    if (f->kind == FormulaKind::Bel && f->agent1 == addressee)
      contents.push_back(f->kids[0]);
    else if (f->kind == FormulaKind::MB &&
             (f->agent1 == addressee || f->agent2 == addressee))
      contents.push_back(f->kids[0]);
  }
  std::map<std::string, FormulaPtr> atoms;
  std::map<std::string, TermPtr> objects;
  for (const auto& c : contents) {
    for (const auto& g : conjuncts_of(c)) {
      if (g->kind != FormulaKind::Atom && g->kind != FormulaKind::Equals) continue;
      atoms.emplace(render(g), g);
      std::vector<TermPtr> terms;
      collect_ground_terms(*g, terms);
      for (const auto& t : terms)
        if (t->kind == TermKind::Constant) objects.emplace(t->name, t);
    }
  }
  for (auto& [_, f] : atoms) model.facts.push_back(f);
  for (auto& [_, t] : objects) model.objects.push_back(t);
  return model;
}

bool model_entails(const AddresseeModel& model, const FormulaPtr& f) {
  std::string key = render(f);
  for (const auto& m : model.facts)
    if (render(m) == key) return true;
  return false;
}

TermPtr build_description(const std::vector<FormulaPtr>& subset) {
  std::vector<FormulaPtr> body;
  // Descriptors are written over ?self; the description binds ?x.
  for (const auto& d : subset)
    body.push_back(rename_var(normalize(d), kSelfVar, "x"));
  FormulaPtr joined = body.size() == 1 ? body[0] : Formula::conj(body);
  return Term::description("x", normalize(joined));
}

}  // namespace

TermPtr choose_description(const AgentState& state, const std::string& rep_id,
                           const std::string& addressee, const std::string& context,
                           const std::set<std::string>& exclude_rendered) {
  const MentalRepresentation* rep = state.find_rep(rep_id);
  if (!rep) throw UnknownRep(state.id(), rep_id);
  AddresseeModel model = addressee_model(state, addressee);
  std::optional<TermPtr> denotation = rep_denotation(state, *rep);

  // A candidate suffices when no other model object satisfies all of
  // its conjuncts; the intended referent itself is presumed to match.
  auto unique_in_model = [&](const TermPtr& descr) {
    for (const auto& obj : model.objects) {
      if (denotation && equal(**denotation, *obj)) continue;
      bool all = true;
      for (const auto& c : conjuncts_of(descr->body)) {
        FormulaPtr grounded = substitute(c, descr->name, obj);
        if (!is_ground(*grounded) || !model_entails(model, normalize(grounded))) {
          all = false;
          break;
        }
      }
      if (all) return false;
    }
    return true;
  };

  // Pact vocabulary first: a description already agreed for this
  // representation is reused as long as it still distinguishes.
  std::vector<TermPtr> pacted;
  for (const auto& p : state.pacts()) {
    if (p.context != context) continue;
    const FormulaPtr& content = p.content;
    if (content->kind == FormulaKind::Atom && content->pred == "referedBy" &&
        content->terms.size() == 2 &&
        content->terms[0]->kind == TermKind::Description &&
        content->terms[1]->kind == TermKind::Constant &&
        content->terms[1]->name == rep_id)
      pacted.push_back(content->terms[0]);
  }
  std::sort(pacted.begin(), pacted.end(),
            [](const TermPtr& a, const TermPtr& b) { return render(a) < render(b); });
  for (const auto& d : pacted)
    if (!exclude_rendered.count(render(d)) && unique_in_model(d)) return d;

  auto enumerate = [&](const std::vector<FormulaPtr>& pool) -> std::optional<TermPtr> {
    std::vector<std::pair<std::string, TermPtr>> candidates;
    size_t n = pool.size();
    if (n > 16) n = 16;
    for (size_t mask = 1; mask < (size_t{1} << n); ++mask) {
      std::vector<FormulaPtr> subset;
      for (size_t i = 0; i < n; ++i)
        if (mask & (size_t{1} << i)) subset.push_back(pool[i]);
      TermPtr descr = build_description(subset);
      // The body must actually mention the bound variable.
      FormulaPtr probe = substitute(descr->body, descr->name,
                                    Term::constant("__probe__"));
      if (render(probe) == render(descr->body)) continue;
      std::string key = render(descr);
      if (exclude_rendered.count(key)) continue;
      if (!unique_in_model(descr)) continue;
      candidates.emplace_back(key, descr);
      candidates.back().first =
          std::to_string(subset.size()) + '\x1f' + key;  // order by (count, text)
    }
    if (candidates.empty()) return std::nullopt;
    std::sort(candidates.begin(), candidates.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return candidates.front().second;
  };

  // The representation's own descriptors.
  std::vector<FormulaPtr> own;
  std::map<std::string, FormulaPtr> seen;
  for (const auto& d : rep->descriptors) seen.emplace(render(d), normalize(d));
  for (auto& [_, d] : seen) own.push_back(d);
  if (auto found = enumerate(own)) return *found;

  // Fall back to what the addressee is believed to hold of the intended
  // object: the nested-model descriptors.
  if (denotation && (*denotation)->kind == TermKind::Constant) {
    std::vector<FormulaPtr> extended = own;
    for (const auto& f : model.facts) {
      FormulaPtr as_descr = generalize(f, (*denotation)->name, kSelfVar);
      if (render(as_descr) == render(f)) continue;  // object not mentioned
      if (!seen.count(render(as_descr))) {
        seen.emplace(render(as_descr), as_descr);
        extended.push_back(as_descr);
      }
    }
    if (auto found = enumerate(extended)) return *found;
  }
  throw NoDistinguishingDescription(rep_id);
}

World register_pact(World world, const std::string& proposer,
                    const std::string& acceptor, const TermPtr& description,
                    const std::string& rep_proposer, const std::string& rep_acceptor) {
  std::string descr_key = render(description);
  auto payload_matches = [&](const Event& e) {
    if (e.payload.rfind("referedBy(", 0) != 0) return false;
    FormulaPtr payload = parse_formula(e.payload);
    return payload->kind == FormulaKind::Atom && payload->pred == "referedBy" &&
           payload->terms.size() == 2 &&
           payload->terms[0]->kind == TermKind::Description &&
           render(payload->terms[0]) == descr_key;
  };
  bool proposed = false, accepted = false;
  for (const auto& e : world.trace.events) {
    if (e.act_type == "propose" && e.actor == proposer && e.addressee == acceptor &&
        payload_matches(e))
      proposed = true;
    if (e.act_type == "acceptAct" && e.actor == acceptor && e.addressee == proposer &&
        payload_matches(e))
      accepted = true;
  }
  if (!proposed)
    throw MissingPactPreconditions("no Done(propose) for " + descr_key);
  if (!accepted)
    throw MissingPactPreconditions("no Done(acceptAct) for " + descr_key);

  // The referring episode's speaker: whichever party holds the refer
  // intention for its representation. A pact can settle on the
  // addressee's counter-proposal, in which case the proposer of record
  // is not the referrer.
  std::string speaker = proposer;
  std::string speaker_rep = rep_proposer;
  std::string hearer = acceptor;
  if (entails(world.agent(acceptor),
              Formula::intend(acceptor, refer_goal(acceptor, proposer, rep_acceptor)))) {
    speaker = acceptor;
    speaker_rep = rep_acceptor;
    hearer = proposer;
  }

  struct Side {
    std::string self, other, rep;
  };
  const Side sides[2] = {{proposer, acceptor, rep_proposer},
                         {acceptor, proposer, rep_acceptor}};
  for (const Side& side : sides) {
    AgentState s = world.agent(side.self);
    if (!s.find_rep(side.rep)) throw UnknownRep(side.self, side.rep);
    FormulaPtr content =
        Formula::atom("referedBy", {description, Term::constant(side.rep)});
    std::optional<TermPtr> denot = rep_denotation(s, *s.find_rep(side.rep));
    if (world.mode == CcgMode::CollectiveAcceptance) {
      s = accept(s, content, side.other, world.context);
    } else {
      // Mutual-belief replay: the description content enters the belief
      // base as shared belief, grounded at the denoted object.
      FormulaPtr grounded =
          denot ? substitute(description->body, description->name, *denot)
                : content;
      try {
        s = assert_fact(s, Formula::mb(side.self, side.other, grounded));
      } catch (const InconsistentBelief& e) {
        world.trace.notes.push_back(
            {world.turn, "InconsistentBelief " + side.self + ": " +
                             std::string(e.what())});
      }
    }
    // Mutual understanding of the communicative intention.
    FormulaPtr understanding = Formula::mb(
        side.self, side.other,
        Formula::intend(speaker, refer_goal(speaker, hearer, side.rep)));
    try {
      s = assert_fact(s, understanding);
    } catch (const InconsistentBelief& e) {
      world.trace.notes.push_back(
          {world.turn,
           "InconsistentBelief " + side.self + ": " + std::string(e.what())});
    }
    // Task-level coordination attached to the pact.
    if (world.task_fact) {
      if (denot) {
        Bindings b;
        b.terms.emplace("referent", *denot);
        FormulaPtr task = instantiate(*world.task_fact, b);
        if (is_ground(*task)) {
          try {
            s = assert_fact(s, Formula::mb(side.self, side.other, task));
          } catch (const InconsistentBelief& e) {
            world.trace.notes.push_back(
                {world.turn,
                 "InconsistentBelief " + side.self + ": " + std::string(e.what())});
          }
        }
      } else {
        world.trace.notes.push_back(
            {world.turn, "task fact skipped for " + side.self +
                             ": no denotation for rep " + side.rep});
      }
    }
    world.agents[side.self] = std::move(s);
  }
  return world;
}

World register_content_pact(World world, const std::string& proposer,
                            const std::string& acceptor, const FormulaPtr& content) {
  std::string key = render(content);
  bool proposed = false, accepted = false;
  for (const auto& e : world.trace.events) {
    if (e.act_type == "propose" && e.actor == proposer && e.addressee == acceptor &&
        e.payload == key)
      proposed = true;
    if (e.act_type == "acceptAct" && e.actor == acceptor && e.addressee == proposer &&
        e.payload == key)
      accepted = true;
  }
  if (!proposed || !accepted)
    throw MissingPactPreconditions("no propose/accept pair for " + key);
  if (world.mode == CcgMode::CollectiveAcceptance) {
    world.agents[proposer] = accept(world.agent(proposer), content, acceptor,
                                    world.context);
    world.agents[acceptor] = accept(world.agent(acceptor), content, proposer,
                                    world.context);
  } else {
    for (const auto& [self, other] :
         std::vector<std::pair<std::string, std::string>>{{proposer, acceptor},
                                                          {acceptor, proposer}}) {
      try {
        world.agents[self] =
            assert_fact(world.agent(self), Formula::mb(self, other, content));
      } catch (const InconsistentBelief& e) {
        world.trace.notes.push_back(
            {world.turn, "InconsistentBelief " + self + ": " + std::string(e.what())});
      }
    }
  }
  return world;
}

bool rep_same_obj(const World& world,
                  const std::pair<std::string, std::string>& a,
                  const std::pair<std::string, std::string>& b) {
  const MentalRepresentation* ra = world.agent(a.first).find_rep(a.second);
  if (!ra) throw UnknownRep(a.first, a.second);
  const MentalRepresentation* rb = world.agent(b.first).find_rep(b.second);
  if (!rb) throw UnknownRep(b.first, b.second);
  return ra->world_anchor == rb->world_anchor;
}

FormulaPtr refer_goal(const std::string& speaker, const std::string& addressee,
                      const std::string& rep_id) {
  return Formula::atom("refer", {Term::constant(speaker), Term::constant(addressee),
                                 Term::constant(rep_id)});
}

std::pair<FormulaPtr, FormulaPtr> meta_goals(const std::string& speaker,
                                             const std::string& addressee,
                                             const std::string& rep_id) {
  FormulaPtr first = Formula::coll_int(
      speaker, addressee,
      Formula::mb(speaker, addressee,
                  Formula::intend(speaker, refer_goal(speaker, addressee, rep_id))));
  FormulaPtr second = Formula::coll_int(
      speaker, addressee,
      Formula::exists(
          "D", Formula::coll_acc(speaker, addressee,
                                 Formula::atom("referedBy",
                                               {Term::variable("D"),
                                                Term::constant(rep_id)}))));
  return {normalize(first), normalize(second)};
}

namespace {

bool refer_goal_satisfied(const World& world, const AgentState& s,
                          const FormulaPtr& goal) {
  // refer(speaker, addressee, rep): grounded once a pact names the rep
  // (or, in mutual-belief mode, the understanding fact is in place).
  const std::string& speaker = goal->terms[0]->name;
  const std::string& addressee = goal->terms[1]->name;
  const std::string& rep = goal->terms[2]->name;
  for (const auto& p : s.pacts()) {
    if (p.context != world.context) continue;
    const FormulaPtr& c = p.content;
    if (c->kind == FormulaKind::Atom && c->pred == "referedBy" &&
        c->terms.size() == 2 && c->terms[1]->kind == TermKind::Constant &&
        c->terms[1]->name == rep)
      return true;
  }
  if (world.mode == CcgMode::MutualBelief) {
    FormulaPtr understanding = Formula::mb(
        s.id(), world.other(s.id()),
        Formula::intend(speaker, refer_goal(speaker, addressee, rep)));
    return entails(s, understanding);
  }
  return false;
}

}  // namespace

bool goal_satisfied(const World& world, const std::string& agent_id,
                    const FormulaPtr& goal) {
  const AgentState& s = world.agent(agent_id);
  FormulaPtr n = normalize(goal);
  if (n->kind == FormulaKind::Atom && n->pred == "refer" && n->terms.size() == 3 &&
      n->terms[0]->kind == TermKind::Constant)
    return refer_goal_satisfied(world, s, n);
  if (n->kind == FormulaKind::CollInt && n->agent1 == agent_id)
    return goal_satisfied(world, agent_id, n->kids[0]);
  if (n->kind == FormulaKind::Exists) {
    // Witnesses include agreed descriptions.
    std::vector<TermPtr> universe;
    for (const auto& p : s.pacts()) collect_ground_terms(*p.content, universe);
    for (const auto& f : s.facts()) collect_ground_terms(*f, universe);
    std::map<std::string, TermPtr> dedup;
    for (const auto& t : universe) dedup.emplace(print(*t), t);
    for (const auto& [_, t] : dedup)
      if (goal_satisfied(world, agent_id, substitute(n->kids[0], n->var, t)))
        return true;
    return false;
  }
  if (n->kind == FormulaKind::CollAcc && n->agent1 == agent_id) {
    std::string key = render(n->kids[0]);
    for (const auto& p : s.pacts())
      if (p.counterpart == n->agent2 && render(p.content) == key) return true;
    if (world.mode == CcgMode::MutualBelief)
      return entails(s, Formula::mb(n->agent1, n->agent2, n->kids[0]));
    return false;
  }
  if (n->kind == FormulaKind::And) {
    for (const auto& k : n->kids)
      if (!goal_satisfied(world, agent_id, k)) return false;
    return true;
  }
  return presumes(s, n, world.context);
}

}  // namespace pact
