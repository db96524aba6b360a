#include "pact/mental_state.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "pact/digest.hpp"
#include "pact/errors.hpp"
#include "pact/logic.hpp"

namespace pact {

namespace {

constexpr size_t kClosureCap = 50000;

std::string origin_name(GoalOrigin o) {
  return o == GoalOrigin::Task ? "task" : "reaction";
}

// ---- nesting truncation ----------------------------------------------

bool is_modal(FormulaKind k) {
  return k == FormulaKind::Bel || k == FormulaKind::Int || k == FormulaKind::MB ||
         k == FormulaKind::CollInt || k == FormulaKind::CollAcc;
}

ActExprPtr drop_innermost_act(const ActExprPtr& a);

// Replaces modal nodes whose content carries no further modality by
// their content: one "layer" peeled off the inside.
FormulaPtr drop_innermost(const FormulaPtr& f) {
  if (is_modal(f->kind) && modal_depth(*f->kids[0]) == 0) return f->kids[0];
  auto g = std::make_shared<Formula>(*f);
  for (auto& k : g->kids) k = drop_innermost(k);
  if (g->act) g->act = drop_innermost_act(g->act);
  return g;
}

ActExprPtr drop_innermost_act(const ActExprPtr& a) {
  if (a->kind != ActExprKind::Atomic) {
    auto lhs = drop_innermost_act(a->lhs);
    auto rhs = drop_innermost_act(a->rhs);
    return a->kind == ActExprKind::Seq ? ActExpr::seq(lhs, rhs)
                                       : ActExpr::choice(lhs, rhs);
  }
  std::vector<ActParam> params;
  params.reserve(a->params.size());
  for (const auto& p : a->params) {
    if (std::holds_alternative<FormulaPtr>(p))
      params.emplace_back(drop_innermost(std::get<FormulaPtr>(p)));
    else
      params.push_back(p);
  }
  return ActExpr::atomic(a->act_type, a->actor, std::move(params));
}

// ---- bounded closure --------------------------------------------------

struct Closure {
  std::map<std::string, FormulaPtr> members;
  std::vector<FormulaPtr> equalities;  // Equals members, for substitution
};

void close_add(Closure& c, std::vector<FormulaPtr>& work, const FormulaPtr& f) {
  std::string key = render(f);
  if (c.members.count(key) || c.members.size() >= kClosureCap) return;
  FormulaPtr n = normalize(f);
  c.members.emplace(std::move(key), n);
  work.push_back(n);
}

std::vector<FormulaPtr> equality_variants(const FormulaPtr& m, const FormulaPtr& eq) {
  std::vector<FormulaPtr> out;
  if (m->kind != FormulaKind::Atom && m->kind != FormulaKind::Equals) return out;
  const TermPtr& l = eq->terms[0];
  const TermPtr& r = eq->terms[1];
  for (size_t i = 0; i < m->terms.size(); ++i) {
    TermPtr repl;
    if (equal(*m->terms[i], *l))
      repl = r;
    else if (equal(*m->terms[i], *r))
      repl = l;
    else
      continue;
    auto g = std::make_shared<Formula>(*m);
    g->terms[i] = repl;
    out.push_back(g);
  }
  return out;
}

Closure build_closure(const std::string& self, int max_nesting,
                      const std::vector<FormulaPtr>& facts) {
  Closure c;
  std::vector<FormulaPtr> work;
  for (const auto& f : facts) close_add(c, work, f);
  while (!work.empty()) {
    FormulaPtr f = work.back();
    work.pop_back();
    switch (f->kind) {
      case FormulaKind::And:
        for (const auto& k : f->kids) close_add(c, work, k);
        break;
      case FormulaKind::Bel:
        if (f->kids[0]->kind == FormulaKind::And)
          for (const auto& k : f->kids[0]->kids)
            close_add(c, work, Formula::bel(f->agent1, k));
        if (f->agent1 == self) close_add(c, work, f->kids[0]);
        break;
      case FormulaKind::MB: {
        if (f->kids[0]->kind == FormulaKind::And)
          for (const auto& k : f->kids[0]->kids)
            close_add(c, work, Formula::mb(f->agent1, f->agent2, k));
        FormulaPtr unfolded = Formula::bel(
            f->agent1,
            Formula::conj({f->kids[0], Formula::mb(f->agent2, f->agent1, f->kids[0])}));
        if (modal_depth(*unfolded) <= max_nesting) close_add(c, work, unfolded);
        break;
      }
      default:
        break;
    }
    if (f->kind == FormulaKind::Atom || f->kind == FormulaKind::Equals) {
      for (const auto& eq : c.equalities)
        for (const auto& v : equality_variants(f, eq)) close_add(c, work, v);
    }
    if (f->kind == FormulaKind::Equals) {
      c.equalities.push_back(f);
      // Revisit existing members with the new equality.
      std::vector<FormulaPtr> snapshot;
      snapshot.reserve(c.members.size());
      for (const auto& [_, m] : c.members) snapshot.push_back(m);
      for (const auto& m : snapshot)
        for (const auto& v : equality_variants(m, f)) close_add(c, work, v);
    }
    // First-person positive introspection, bounded by the budget.
    if (modal_depth(*f) < max_nesting) {
      FormulaPtr wrapped = Formula::bel(self, f);
      close_add(c, work, wrapped);
    }
  }
  return c;
}

bool member(const Closure& c, const FormulaPtr& f) {
  return c.members.count(render(f)) != 0;
}

// ---- query evaluation ---------------------------------------------------

std::vector<TermPtr> witness_terms(const AgentState& s, const Closure& c) {
  std::vector<TermPtr> all;
  for (const auto& [_, m] : c.members) collect_ground_terms(*m, all);
  for (const auto& p : s.pacts()) collect_ground_terms(*p.content, all);
  all.push_back(Term::constant(s.id()));
  std::map<std::string, TermPtr> dedup;
  for (const auto& t : all) dedup.emplace(print(*t), t);
  std::vector<TermPtr> out;
  out.reserve(dedup.size());
  for (auto& [_, t] : dedup) out.push_back(t);
  return out;
}

bool eval(const AgentState& s, const Closure& c, const FormulaPtr& f) {
  switch (f->kind) {
    case FormulaKind::True:
      return true;
    case FormulaKind::False:
      return false;
    case FormulaKind::And:
      return std::all_of(f->kids.begin(), f->kids.end(),
                         [&](const FormulaPtr& k) { return eval(s, c, k); });
    case FormulaKind::Or:
      return std::any_of(f->kids.begin(), f->kids.end(),
                         [&](const FormulaPtr& k) { return eval(s, c, k); });
    case FormulaKind::Exists: {
      if (member(c, f)) return true;
      for (const auto& t : witness_terms(s, c))
        if (eval(s, c, normalize(substitute(f->kids[0], f->var, t)))) return true;
      return false;
    }
    case FormulaKind::Not: {
      const FormulaPtr& inner = f->kids[0];
      // Unique names: distinct constants are unequal.
      if (inner->kind == FormulaKind::Equals &&
          inner->terms[0]->kind == TermKind::Constant &&
          inner->terms[1]->kind == TermKind::Constant &&
          inner->terms[0]->name != inner->terms[1]->name)
        return true;
      return member(c, f);
    }
    case FormulaKind::Bel:
      if (f->agent1 == s.id() && eval(s, c, f->kids[0])) return true;
      return member(c, f);
    case FormulaKind::Int: {
      if (f->agent1 == s.id()) {
        std::string key = render(f->kids[0]);
        for (const auto& item : s.agenda())
          if (render(item.goal) == key) return true;
      }
      return member(c, f);
    }
    case FormulaKind::CollAcc: {
      if (f->agent1 == s.id()) {
        std::string key = render(f->kids[0]);
        for (const auto& p : s.pacts())
          if (p.counterpart == f->agent2 && render(p.content) == key) return true;
      }
      return member(c, f);
    }
    default:
      return member(c, f);
  }
}

std::optional<ConsistencyReport::Conflict> find_clash(const Closure& c) {
  // Ranked so the reported witness is the informative pair (a direct
  // negation or two bindings of the same term), not derived trivia.
  std::optional<ConsistencyReport::Conflict> best;
  int best_rank = 99;
  auto offer = [&](int rank, ConsistencyReport::Conflict conflict) {
    if (rank < best_rank) {
      best_rank = rank;
      best = std::move(conflict);
    }
  };
  for (const auto& [key, m] : c.members) {
    if (m->kind == FormulaKind::Not && member(c, m->kids[0]))
      offer(0, {render(m->kids[0]), key});
    if (m->kind == FormulaKind::Equals) {
      const TermPtr& l = m->terms[0];
      const TermPtr& r = m->terms[1];
      for (const auto& eq : c.equalities) {
        if (equal(*eq->terms[0], *eq->terms[1])) continue;
        if (!equal(*eq->terms[0], *l) || equal(*eq, *m)) continue;
        if (eq->terms[1]->kind == TermKind::Constant &&
            r->kind == TermKind::Constant && eq->terms[1]->name != r->name)
          offer(l->kind == TermKind::Constant ? 2 : 1, {render(eq), key});
      }
      if (l->kind == TermKind::Constant && r->kind == TermKind::Constant &&
          l->name != r->name)
        offer(3, {key, "unique names"});
    }
  }
  return best;
}

}  // namespace

// ---- AgentState ---------------------------------------------------------

const MentalRepresentation* AgentState::find_rep(const std::string& rep_id) const {
  for (const auto& r : reps_)
    if (r.id == rep_id) return &r;
  return nullptr;
}

AgentState AgentState::push_goal(FormulaPtr goal, GoalOrigin origin) const {
  FormulaPtr n = normalize(goal);
  std::string key = render(n);
  for (const auto& item : agenda_)
    if (render(item.goal) == key) return *this;
  AgentState out = *this;
  if (origin == GoalOrigin::Reaction) {
    auto it = out.agenda_.begin();
    while (it != out.agenda_.end() && it->origin == GoalOrigin::Reaction) ++it;
    out.agenda_.insert(it, {n, origin});
  } else {
    out.agenda_.push_back({n, origin});
  }
  return out;
}

AgentState AgentState::remove_goal(const FormulaPtr& goal) const {
  std::string key = render(goal);
  AgentState out = *this;
  out.agenda_.erase(std::remove_if(out.agenda_.begin(), out.agenda_.end(),
                                   [&](const AgendaItem& item) {
                                     return render(item.goal) == key;
                                   }),
                    out.agenda_.end());
  return out;
}

std::string AgentState::dump() const {
  std::ostringstream out;
  out << "agent " << id_ << " nesting=" << max_nesting_ << '\n';
  for (const auto& f : facts_) out << "fact " << render(f) << '\n';
  for (const auto& p : pacts_)
    out << "pact " << p.context << ' ' << p.counterpart << ' ' << render(p.content)
        << '\n';
  for (const auto& g : agenda_)
    out << "goal " << origin_name(g.origin) << ' ' << render(g.goal) << '\n';
  for (const auto& r : reps_) {
    out << "rep " << r.id << " anchor=" << r.world_anchor << " [";
    for (size_t i = 0; i < r.descriptors.size(); ++i) {
      if (i) out << "; ";
      out << render(r.descriptors[i]);
    }
    out << "]\n";
  }
  return out.str();
}

AgentState with_fact_unchecked(AgentState s, FormulaPtr fact) {
  std::string key = render(fact);
  auto it = std::lower_bound(
      s.facts_.begin(), s.facts_.end(), key,
      [](const FormulaPtr& f, const std::string& k) { return render(f) < k; });
  if (it != s.facts_.end() && render(*it) == key) return s;
  s.facts_.insert(it, normalize(fact));
  return s;
}

AgentState with_pact(AgentState s, Pact pact) {
  auto key = [](const Pact& p) {
    return p.context + '\x1f' + p.counterpart + '\x1f' + render(p.content);
  };
  std::string k = key(pact);
  for (const auto& p : s.pacts_)
    if (key(p) == k) return s;
  s.pacts_.push_back(std::move(pact));
  std::sort(s.pacts_.begin(), s.pacts_.end(),
            [&](const Pact& a, const Pact& b) { return key(a) < key(b); });
  return s;
}

AgentState without_context(AgentState s, const std::string& context) {
  s.pacts_.erase(std::remove_if(s.pacts_.begin(), s.pacts_.end(),
                                [&](const Pact& p) { return p.context == context; }),
                 s.pacts_.end());
  return s;
}

// ---- operations ----------------------------------------------------------

AgentState assert_fact(const AgentState& s, const FormulaPtr& f,
                       AssertOutcome* outcome) {
  if (!is_ground(*f)) throw Error("assert_fact: formula not ground: " + print(*f));
  // Split conjunctions and strip first-person wrappers until fixpoint.
  std::vector<FormulaPtr> pending{normalize(f)};
  std::vector<FormulaPtr> to_add;
  std::vector<std::string> warnings;
  while (!pending.empty()) {
    FormulaPtr g = pending.back();
    pending.pop_back();
    if (g->kind == FormulaKind::True) continue;
    if (g->kind == FormulaKind::And) {
      for (const auto& k : g->kids) pending.push_back(k);
      continue;
    }
    if (g->kind == FormulaKind::Bel && g->agent1 == s.id()) {
      pending.push_back(g->kids[0]);
      continue;
    }
    if (modal_depth(*g) > s.max_nesting()) {
      std::string before = render(g);
      while (modal_depth(*g) > s.max_nesting()) g = normalize(drop_innermost(g));
      warnings.push_back("nesting truncated: " + before + " -> " + render(g));
      pending.push_back(g);
      continue;
    }
    to_add.push_back(g);
  }
  // Validate the whole batch against the closure before committing.
  std::vector<FormulaPtr> tentative = s.facts();
  for (const auto& g : to_add) tentative.push_back(g);
  Closure c = build_closure(s.id(), s.max_nesting(), tentative);
  if (auto clash = find_clash(c))
    throw InconsistentBelief(clash->first, clash->second);
  AgentState out = s;
  std::sort(to_add.begin(), to_add.end(), formula_less);
  for (const auto& g : to_add) {
    out = with_fact_unchecked(std::move(out), g);
    if (outcome) outcome->added.push_back(g);
  }
  if (outcome)
    outcome->warnings.insert(outcome->warnings.end(), warnings.begin(),
                             warnings.end());
  return out;
}

bool entails(const AgentState& s, const FormulaPtr& f) {
  Closure c = build_closure(s.id(), s.max_nesting(), s.facts());
  return eval(s, c, normalize(f));
}

bool contradicts(const AgentState& s, const FormulaPtr& f) {
  FormulaPtr n = normalize(f);
  if (n->kind == FormulaKind::True) return false;
  if (n->kind == FormulaKind::False) return true;
  if (n->kind == FormulaKind::And)
    return std::any_of(n->kids.begin(), n->kids.end(),
                       [&](const FormulaPtr& k) { return contradicts(s, k); });
  if (n->kind == FormulaKind::Not) return entails(s, n->kids[0]);
  if (entails(s, normalize(Formula::negate(n)))) return true;
  if (n->kind == FormulaKind::Equals) {
    Closure c = build_closure(s.id(), s.max_nesting(), s.facts());
    for (const auto& [_, m] : c.members) {
      if (m->kind != FormulaKind::Equals) continue;
      for (int flip = 0; flip < 2; ++flip) {
        const TermPtr& lhs = m->terms[flip];
        const TermPtr& rhs = m->terms[1 - flip];
        for (int qflip = 0; qflip < 2; ++qflip) {
          const TermPtr& ql = n->terms[qflip];
          const TermPtr& qr = n->terms[1 - qflip];
          if (equal(*lhs, *ql) && rhs->kind == TermKind::Constant &&
              qr->kind == TermKind::Constant && rhs->name != qr->name)
            return true;
        }
      }
    }
  }
  return false;
}

AgentState accept(const AgentState& s, const FormulaPtr& content,
                  const std::string& counterpart, const std::string& context) {
  if (!is_ground(*content))
    throw Error("accept: content not ground: " + print(*content));
  FormulaPtr n = normalize(content);
  std::string negated = render(normalize(Formula::negate(n)));
  for (const auto& p : s.pacts())
    if (p.context == context && render(p.content) == negated)
      throw InconsistentAcceptance(render(n), context);
  return with_pact(s, Pact{n, counterpart, context});
}

AgentState end_context(const AgentState& s, const std::string& context) {
  return without_context(s, context);
}

bool pact_entails(const AgentState& s, const FormulaPtr& f, const std::string& context) {
  FormulaPtr n = normalize(f);
  // The pact contents of the context, split into conjuncts, act as a
  // small premiss store.
  std::vector<FormulaPtr> premises;
  for (const auto& p : s.pacts()) {
    if (p.context != context) continue;
    premises.push_back(p.content);
    if (p.content->kind == FormulaKind::And)
      for (const auto& k : p.content->kids) premises.push_back(k);
  }
  if (n->kind == FormulaKind::CollAcc && n->agent1 == s.id()) {
    std::string key = render(n->kids[0]);
    for (const auto& p : s.pacts())
      if (p.context == context && p.counterpart == n->agent2 &&
          render(p.content) == key)
        return true;
  }
  if (n->kind == FormulaKind::And)
    return std::all_of(n->kids.begin(), n->kids.end(), [&](const FormulaPtr& k) {
      return pact_entails(s, k, context);
    });
  std::string key = render(n);
  for (const auto& p : premises)
    if (render(p) == key) return true;
  return false;
}

bool presumes(const AgentState& s, const FormulaPtr& f, const std::string& context) {
  return pact_entails(s, f, context) || entails(s, f);
}

std::optional<TermPtr> rep_denotation(const AgentState& s,
                                      const MentalRepresentation& rep) {
  std::vector<TermPtr> all;
  for (const auto& f : s.facts()) collect_ground_terms(*f, all);
  std::map<std::string, TermPtr> constants;
  for (const auto& t : all)
    if (t->kind == TermKind::Constant) constants.emplace(t->name, t);
  std::vector<TermPtr> hits;
  for (const auto& [_, c] : constants) {
    bool ok = true;
    for (const auto& d : rep.descriptors) {
      if (!entails(s, substitute(d, kSelfVar, c))) {
        ok = false;
        break;
      }
    }
    if (ok) hits.push_back(c);
  }
  if (hits.size() == 1) return hits[0];
  return std::nullopt;
}

namespace {

// Splits a pact's content into belief-comparable ground conjuncts. For
// referedBy contents the description body is grounded at the
// representation's denotation when one exists; conjuncts that stay
// open are skipped.
std::vector<FormulaPtr> pact_ground_conjuncts(const AgentState& s, const Pact& p) {
  std::vector<FormulaPtr> out;
  const FormulaPtr& content = p.content;
  if (content->kind == FormulaKind::Atom && content->pred == "referedBy" &&
      content->terms.size() == 2 &&
      content->terms[0]->kind == TermKind::Description) {
    const TermPtr& descr = content->terms[0];
    std::optional<TermPtr> denot;
    if (content->terms[1]->kind == TermKind::Constant) {
      if (const auto* rep = s.find_rep(content->terms[1]->name))
        denot = rep_denotation(s, *rep);
    }
    FormulaPtr body = normalize(descr->body);
    std::vector<FormulaPtr> conjuncts =
        body->kind == FormulaKind::And ? body->kids : std::vector<FormulaPtr>{body};
    for (const auto& c : conjuncts) {
      FormulaPtr grounded = denot ? substitute(c, descr->name, *denot) : c;
      if (is_ground(*grounded)) out.push_back(normalize(grounded));
    }
    return out;
  }
  FormulaPtr n = normalize(content);
  if (n->kind == FormulaKind::And) {
    for (const auto& k : n->kids) out.push_back(k);
  } else {
    out.push_back(n);
  }
  return out;
}

std::optional<std::string> conflict_witness(const AgentState& s, const FormulaPtr& f) {
  if (!contradicts(s, f)) return std::nullopt;
  // Prefer the stored fact that carries the clash.
  if (f->kind == FormulaKind::Equals) {
    for (const auto& fact : s.facts()) {
      if (fact->kind != FormulaKind::Equals) continue;
      for (int flip = 0; flip < 2; ++flip) {
        if (equal(*fact->terms[0], *f->terms[flip]) &&
            fact->terms[1]->kind == TermKind::Constant &&
            f->terms[1 - flip]->kind == TermKind::Constant &&
            fact->terms[1]->name != f->terms[1 - flip]->name)
          return render(fact);
      }
    }
  }
  FormulaPtr neg = normalize(Formula::negate(f));
  for (const auto& fact : s.facts())
    if (render(fact) == render(neg)) return render(fact);
  if (f->kind == FormulaKind::Not)
    for (const auto& fact : s.facts())
      if (render(fact) == render(f->kids[0])) return render(fact);
  return std::string("derived");
}

}  // namespace

ConsistencyReport consistency_report(const AgentState& s) {
  ConsistencyReport report;
  const auto& facts = s.facts();
  for (size_t i = 0; i < facts.size(); ++i) {
    for (size_t j = i + 1; j < facts.size(); ++j) {
      const FormulaPtr& a = facts[i];
      const FormulaPtr& b = facts[j];
      if (b->kind == FormulaKind::Not && equal(*b->kids[0], *a))
        report.belief_violations.push_back({render(a), render(b)});
      else if (a->kind == FormulaKind::Not && equal(*a->kids[0], *b))
        report.belief_violations.push_back({render(b), render(a)});
      else if (a->kind == FormulaKind::Equals && b->kind == FormulaKind::Equals &&
               equal(*a->terms[0], *b->terms[0]) &&
               a->terms[1]->kind == TermKind::Constant &&
               b->terms[1]->kind == TermKind::Constant &&
               a->terms[1]->name != b->terms[1]->name)
        report.belief_violations.push_back({render(a), render(b)});
    }
  }
  // Acceptance stores must stay consistent per context.
  for (size_t i = 0; i < s.pacts().size(); ++i) {
    for (size_t j = i + 1; j < s.pacts().size(); ++j) {
      const Pact& a = s.pacts()[i];
      const Pact& b = s.pacts()[j];
      if (a.context != b.context) continue;
      if ((b.content->kind == FormulaKind::Not && equal(*b.content->kids[0], *a.content)) ||
          (a.content->kind == FormulaKind::Not && equal(*a.content->kids[0], *b.content)))
        report.acceptance_violations.push_back({a.context, render(a.content)});
    }
  }
  std::set<std::string> seen;
  for (const auto& p : s.pacts()) {
    for (const auto& g : pact_ground_conjuncts(s, p)) {
      if (auto winner = conflict_witness(s, g)) {
        std::string key = *winner + '\x1f' + render(g);
        if (seen.insert(key).second)
          report.cross_conflicts.push_back({*winner, render(g)});
      }
    }
  }
  std::sort(report.cross_conflicts.begin(), report.cross_conflicts.end(),
            [](const auto& a, const auto& b) {
              return std::tie(a.first, a.second) < std::tie(b.first, b.second);
            });
  return report;
}

std::vector<std::string> ConsistencyReport::serialize(const std::string& agent) const {
  std::vector<std::string> lines;
  std::ostringstream head;
  head << "report " << agent << " belief_violations=" << belief_violations.size()
       << " acceptance_violations=" << acceptance_violations.size()
       << " cross_conflicts=" << cross_conflicts.size();
  lines.push_back(head.str());
  for (const auto& v : belief_violations)
    lines.push_back("violation " + agent + " belief[" + v.first + "] belief[" +
                    v.second + "]");
  for (const auto& v : acceptance_violations)
    lines.push_back("violation " + agent + " context[" + v.first + "] content[" +
                    v.second + "]");
  for (const auto& v : cross_conflicts)
    lines.push_back("conflict " + agent + " belief[" + v.first + "] acceptance[" +
                    v.second + "]");
  return lines;
}

}  // namespace pact
