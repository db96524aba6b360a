#include "pact/logic.hpp"

#include <algorithm>

#include "pact/errors.hpp"

namespace pact {

namespace {

FormulaPtr normalize_in(const FormulaPtr& f, bool negated);

TermPtr normalize_term(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Constant:
    case TermKind::Variable:
      return t;
    case TermKind::FunctionApp: {
      std::vector<TermPtr> args;
      args.reserve(t->args.size());
      for (const auto& a : t->args) args.push_back(normalize_term(a));
      return Term::function(t->name, std::move(args));
    }
    case TermKind::Description:
      return Term::description(t->name, normalize_in(t->body, false));
  }
  return t;
}

ActExprPtr normalize_act(const ActExprPtr& a);

ActParam normalize_param(const ActParam& p) {
  if (std::holds_alternative<TermPtr>(p))
    return ActParam(normalize_term(std::get<TermPtr>(p)));
  FormulaPtr f = normalize_in(std::get<FormulaPtr>(p), false);
  // Zero-ary payloads canonicalize to constants, matching the parse.
  if (f->kind == FormulaKind::Atom && f->terms.empty())
    return ActParam(TermPtr(Term::constant(f->pred)));
  return ActParam(f);
}

// Seq/Choice chains re-associate to the left.
void flatten_act(const ActExprPtr& a, ActExprKind kind, std::vector<ActExprPtr>& out) {
  if (a->kind == kind) {
    flatten_act(a->lhs, kind, out);
    flatten_act(a->rhs, kind, out);
  } else {
    out.push_back(normalize_act(a));
  }
}

ActExprPtr normalize_act(const ActExprPtr& a) {
  switch (a->kind) {
    case ActExprKind::Atomic: {
      std::vector<ActParam> params;
      params.reserve(a->params.size());
      for (const auto& p : a->params) params.push_back(normalize_param(p));
      return ActExpr::atomic(a->act_type, a->actor, std::move(params));
    }
    case ActExprKind::Seq:
    case ActExprKind::Choice: {
      std::vector<ActExprPtr> parts;
      flatten_act(a, a->kind, parts);
      ActExprPtr acc = parts[0];
      for (size_t i = 1; i < parts.size(); ++i)
        acc = a->kind == ActExprKind::Seq ? ActExpr::seq(acc, parts[i])
                                          : ActExpr::choice(acc, parts[i]);
      return acc;
    }
  }
  return a;
}

FormulaPtr junction(FormulaKind kind, std::vector<FormulaPtr> kids) {
  const bool is_and = kind == FormulaKind::And;
  std::vector<FormulaPtr> flat;
  for (auto& k : kids) {
    if (k->kind == kind) {
      for (const auto& g : k->kids) flat.push_back(g);
    } else {
      flat.push_back(k);
    }
  }
  std::vector<std::pair<std::string, FormulaPtr>> keyed;
  keyed.reserve(flat.size());
  for (auto& k : flat) {
    if (is_and) {
      if (k->kind == FormulaKind::False) return Formula::falsity();
      if (k->kind == FormulaKind::True) continue;
    } else {
      if (k->kind == FormulaKind::True) return Formula::truth();
      if (k->kind == FormulaKind::False) continue;
    }
    keyed.emplace_back(print(*k), k);
  }
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  keyed.erase(std::unique(keyed.begin(), keyed.end(),
                          [](const auto& a, const auto& b) { return a.first == b.first; }),
              keyed.end());
  if (keyed.empty()) return is_and ? Formula::truth() : Formula::falsity();
  if (keyed.size() == 1) return keyed[0].second;
  std::vector<FormulaPtr> out;
  out.reserve(keyed.size());
  for (auto& [_, k] : keyed) out.push_back(k);
  return is_and ? Formula::conj(std::move(out)) : Formula::disj(std::move(out));
}

FormulaPtr normalize_in(const FormulaPtr& f, bool negated) {
  switch (f->kind) {
    case FormulaKind::True:
      return negated ? Formula::falsity() : f;
    case FormulaKind::False:
      return negated ? Formula::truth() : f;
    case FormulaKind::Not:
      return normalize_in(f->kids[0], !negated);
    case FormulaKind::And:
    case FormulaKind::Or: {
      FormulaKind kind = f->kind;
      if (negated)  // De Morgan
        kind = kind == FormulaKind::And ? FormulaKind::Or : FormulaKind::And;
      std::vector<FormulaPtr> kids;
      kids.reserve(f->kids.size());
      for (const auto& k : f->kids) kids.push_back(normalize_in(k, negated));
      return junction(kind, std::move(kids));
    }
    case FormulaKind::Implies: {
      if (negated)  // not (a => b)  ==  a and not b
        return junction(FormulaKind::And, {normalize_in(f->kids[0], false),
                                           normalize_in(f->kids[1], true)});
      return Formula::implies(normalize_in(f->kids[0], false),
                              normalize_in(f->kids[1], false));
    }
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      FormulaKind kind = f->kind;
      if (negated)
        kind = kind == FormulaKind::Exists ? FormulaKind::Forall : FormulaKind::Exists;
      FormulaPtr body = normalize_in(f->kids[0], negated);
      return kind == FormulaKind::Exists ? Formula::exists(f->var, body)
                                         : Formula::forall(f->var, body);
    }
    default: {
      // Atoms, equalities, modal operators, Done, Possible, FVar:
      // negation stops here.
      FormulaPtr inner;
      switch (f->kind) {
        case FormulaKind::Atom: {
          std::vector<TermPtr> args;
          args.reserve(f->terms.size());
          for (const auto& t : f->terms) args.push_back(normalize_term(t));
          inner = Formula::atom(f->pred, std::move(args));
          break;
        }
        case FormulaKind::Equals:
          inner = Formula::equals(normalize_term(f->terms[0]),
                                  normalize_term(f->terms[1]));
          break;
        case FormulaKind::Bel:
          inner = Formula::bel(f->agent1, normalize_in(f->kids[0], false));
          break;
        case FormulaKind::Int:
          inner = Formula::intend(f->agent1, normalize_in(f->kids[0], false));
          break;
        case FormulaKind::MB:
          inner = Formula::mb(f->agent1, f->agent2, normalize_in(f->kids[0], false));
          break;
        case FormulaKind::CollInt:
          inner = Formula::coll_int(f->agent1, f->agent2,
                                    normalize_in(f->kids[0], false));
          break;
        case FormulaKind::CollAcc:
          inner = Formula::coll_acc(f->agent1, f->agent2,
                                    normalize_in(f->kids[0], false));
          break;
        case FormulaKind::Done:
          inner = Formula::done(normalize_act(f->act), normalize_in(f->kids[0], false));
          break;
        case FormulaKind::Possible:
          inner = Formula::possible(normalize_in(f->kids[0], false));
          break;
        default:
          inner = f;
          break;
      }
      return negated ? Formula::negate(inner) : inner;
    }
  }
}

}  // namespace

FormulaPtr normalize(FormulaPtr f) { return normalize_in(f, false); }

std::string render(const FormulaPtr& f) { return print(*normalize(f)); }

std::string render(const TermPtr& t) { return print(*normalize_term(t)); }

std::string render(const ActExprPtr& a) { return print(*normalize_act(a)); }

bool formula_less(const FormulaPtr& a, const FormulaPtr& b) {
  return render(a) < render(b);
}

FormulaPtr unfold_mb(FormulaPtr f, int depth) {
  if (depth <= 0) return f;
  switch (f->kind) {
    case FormulaKind::MB: {
      FormulaPtr content = unfold_mb(f->kids[0], depth);
      FormulaPtr inner_mb =
          unfold_mb(Formula::mb(f->agent2, f->agent1, f->kids[0]), depth - 1);
      return Formula::bel(f->agent1,
                          Formula::conj({content, inner_mb}));
    }
    case FormulaKind::True:
    case FormulaKind::False:
    case FormulaKind::FVar:
      return f;
    default: {
      auto g = std::make_shared<Formula>(*f);
      for (auto& k : g->kids) k = unfold_mb(k, depth);
      return g;
    }
  }
}

namespace {

TermPtr subst_term(const TermPtr& t, const std::string& var, const TermPtr& value) {
  switch (t->kind) {
    case TermKind::Constant:
      return t;
    case TermKind::Variable:
      return t->name == var ? value : t;
    case TermKind::FunctionApp: {
      std::vector<TermPtr> args;
      args.reserve(t->args.size());
      for (const auto& a : t->args) args.push_back(subst_term(a, var, value));
      return Term::function(t->name, std::move(args));
    }
    case TermKind::Description:
      if (t->name == var) return t;  // shadowed
      return Term::description(t->name, substitute(t->body, var, value));
  }
  return t;
}

ActExprPtr subst_act(const ActExprPtr& a, const std::string& var, const TermPtr& value) {
  if (a->kind != ActExprKind::Atomic) {
    auto lhs = subst_act(a->lhs, var, value);
    auto rhs = subst_act(a->rhs, var, value);
    return a->kind == ActExprKind::Seq ? ActExpr::seq(lhs, rhs)
                                       : ActExpr::choice(lhs, rhs);
  }
  std::string actor = a->actor;
  if (actor == "?" + var && value->kind == TermKind::Constant) actor = value->name;
  std::vector<ActParam> params;
  params.reserve(a->params.size());
  for (const auto& p : a->params) {
    if (std::holds_alternative<TermPtr>(p))
      params.emplace_back(subst_term(std::get<TermPtr>(p), var, value));
    else
      params.emplace_back(substitute(std::get<FormulaPtr>(p), var, value));
  }
  return ActExpr::atomic(a->act_type, actor, std::move(params));
}

}  // namespace

FormulaPtr substitute(FormulaPtr f, const std::string& var, TermPtr value) {
  if (!is_ground(*value)) throw NonGroundSubstitution(print(*value));
  switch (f->kind) {
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      if (f->var == var) return f;  // shadowed
      break;
    default:
      break;
  }
  auto g = std::make_shared<Formula>(*f);
  // Modal agent slots written ?name participate in substitution.
  if (g->agent1 == "?" + var && value->kind == TermKind::Constant)
    g->agent1 = value->name;
  if (g->agent2 == "?" + var && value->kind == TermKind::Constant)
    g->agent2 = value->name;
  for (auto& t : g->terms) t = subst_term(t, var, value);
  for (auto& k : g->kids) k = substitute(k, var, value);
  if (g->act) g->act = subst_act(g->act, var, value);
  return g;
}

TermPtr substitute_term(TermPtr t, const std::string& var, TermPtr value) {
  if (!is_ground(*value)) throw NonGroundSubstitution(print(*value));
  return subst_term(t, var, value);
}

namespace {

TermPtr gen_term(const TermPtr& t, const std::string& constant, const std::string& var) {
  switch (t->kind) {
    case TermKind::Constant:
      return t->name == constant ? Term::variable(var) : t;
    case TermKind::FunctionApp: {
      std::vector<TermPtr> args;
      args.reserve(t->args.size());
      for (const auto& a : t->args) args.push_back(gen_term(a, constant, var));
      return Term::function(t->name, std::move(args));
    }
    case TermKind::Description:
      return Term::description(t->name, generalize(t->body, constant, var));
    default:
      return t;
  }
}

}  // namespace

FormulaPtr generalize(const FormulaPtr& f, const std::string& constant,
                      const std::string& var) {
  auto g = std::make_shared<Formula>(*f);
  for (auto& t : g->terms) t = gen_term(t, constant, var);
  for (auto& k : g->kids) k = generalize(k, constant, var);
  return g;
}

namespace {

TermPtr rename_term(const TermPtr& t, const std::string& from, const std::string& to) {
  switch (t->kind) {
    case TermKind::Variable:
      return t->name == from ? Term::variable(to) : t;
    case TermKind::FunctionApp: {
      std::vector<TermPtr> args;
      args.reserve(t->args.size());
      for (const auto& a : t->args) args.push_back(rename_term(a, from, to));
      return Term::function(t->name, std::move(args));
    }
    case TermKind::Description:
      if (t->name == from) return t;  // shadowed
      return Term::description(t->name, rename_var(t->body, from, to));
    default:
      return t;
  }
}

}  // namespace

FormulaPtr rename_var(const FormulaPtr& f, const std::string& from,
                      const std::string& to) {
  if ((f->kind == FormulaKind::Exists || f->kind == FormulaKind::Forall) &&
      f->var == from)
    return f;
  auto g = std::make_shared<Formula>(*f);
  for (auto& t : g->terms) t = rename_term(t, from, to);
  for (auto& k : g->kids) k = rename_var(k, from, to);
  return g;
}

std::string Bindings::agent(const std::string& name) const {
  auto it = terms.find(name);
  if (it != terms.end() && it->second->kind == TermKind::Constant)
    return it->second->name;
  return "?" + name;
}

namespace {

bool unify_term(const TermPtr& pattern, const TermPtr& ground, Bindings& b);
bool unify(const FormulaPtr& pattern, const FormulaPtr& ground, Bindings& b);

bool bind_term(const std::string& var, const TermPtr& value, Bindings& b) {
  auto [it, inserted] = b.terms.emplace(var, value);
  return inserted || equal(*it->second, *value);
}

bool bind_formula(const std::string& var, const FormulaPtr& value, Bindings& b) {
  auto [it, inserted] = b.formulas.emplace(var, value);
  return inserted || equal(*it->second, *value);
}

bool unify_agent(const std::string& pattern, const std::string& ground, Bindings& b) {
  if (pattern.rfind('?', 0) == 0)
    return bind_term(pattern.substr(1), Term::constant(ground), b);
  return pattern == ground;
}

bool unify_param(const ActParam& pattern, const ActParam& ground, Bindings& b) {
  if (std::holds_alternative<FormulaPtr>(pattern)) {
    const auto& pf = std::get<FormulaPtr>(pattern);
    if (pf->kind == FormulaKind::FVar) {
      // A bare placeholder accepts either payload shape.
      if (std::holds_alternative<FormulaPtr>(ground))
        return bind_formula(pf->pred, std::get<FormulaPtr>(ground), b);
      return bind_term(pf->pred, std::get<TermPtr>(ground), b);
    }
    if (!std::holds_alternative<FormulaPtr>(ground)) return false;
    return unify(pf, std::get<FormulaPtr>(ground), b);
  }
  const auto& pt = std::get<TermPtr>(pattern);
  if (pt->kind == TermKind::Variable) {
    if (!std::holds_alternative<TermPtr>(ground)) return false;
    return bind_term(pt->name, std::get<TermPtr>(ground), b);
  }
  if (!std::holds_alternative<TermPtr>(ground)) return false;
  return unify_term(pt, std::get<TermPtr>(ground), b);
}

bool unify_act(const ActExprPtr& pattern, const ActExprPtr& ground, Bindings& b) {
  if (pattern->kind != ground->kind) return false;
  if (pattern->kind != ActExprKind::Atomic)
    return unify_act(pattern->lhs, ground->lhs, b) &&
           unify_act(pattern->rhs, ground->rhs, b);
  if (pattern->act_type != ground->act_type) return false;
  if (!unify_agent(pattern->actor, ground->actor, b)) return false;
  if (pattern->params.size() != ground->params.size()) return false;
  for (size_t i = 0; i < pattern->params.size(); ++i)
    if (!unify_param(pattern->params[i], ground->params[i], b)) return false;
  return true;
}

bool unify_term(const TermPtr& pattern, const TermPtr& ground, Bindings& b) {
  if (pattern->kind == TermKind::Variable) return bind_term(pattern->name, ground, b);
  if (pattern->kind != ground->kind || pattern->name != ground->name) return false;
  switch (pattern->kind) {
    case TermKind::Constant:
      return true;
    case TermKind::FunctionApp:
      if (pattern->args.size() != ground->args.size()) return false;
      for (size_t i = 0; i < pattern->args.size(); ++i)
        if (!unify_term(pattern->args[i], ground->args[i], b)) return false;
      return true;
    case TermKind::Description:
      return unify(pattern->body, ground->body, b);
    default:
      return false;
  }
}

bool unify(const FormulaPtr& pattern, const FormulaPtr& ground, Bindings& b) {
  if (pattern->kind == FormulaKind::FVar)
    return bind_formula(pattern->pred, ground, b);
  if (pattern->kind != ground->kind) return false;
  switch (pattern->kind) {
    case FormulaKind::Atom:
      if (pattern->pred != ground->pred) return false;
      break;
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      if (pattern->var != ground->var) return false;
      break;
    case FormulaKind::Bel:
    case FormulaKind::Int:
      if (!unify_agent(pattern->agent1, ground->agent1, b)) return false;
      break;
    case FormulaKind::MB:
    case FormulaKind::CollInt:
    case FormulaKind::CollAcc:
      if (!unify_agent(pattern->agent1, ground->agent1, b) ||
          !unify_agent(pattern->agent2, ground->agent2, b))
        return false;
      break;
    case FormulaKind::Done:
      if (!unify_act(pattern->act, ground->act, b)) return false;
      break;
    default:
      break;
  }
  if (pattern->terms.size() != ground->terms.size()) return false;
  for (size_t i = 0; i < pattern->terms.size(); ++i)
    if (!unify_term(pattern->terms[i], ground->terms[i], b)) return false;
  if (pattern->kids.size() != ground->kids.size()) return false;
  for (size_t i = 0; i < pattern->kids.size(); ++i)
    if (!unify(pattern->kids[i], ground->kids[i], b)) return false;
  return true;
}

}  // namespace

std::optional<Bindings> match(const FormulaPtr& pattern, const FormulaPtr& ground) {
  Bindings b;
  if (unify(pattern, ground, b)) return b;
  return std::nullopt;
}

std::optional<Bindings> match_act(const ActExprPtr& pattern, const ActExprPtr& ground) {
  Bindings b;
  if (unify_act(pattern, ground, b)) return b;
  return std::nullopt;
}

namespace {

TermPtr inst_term(const TermPtr& t, const Bindings& b) {
  switch (t->kind) {
    case TermKind::Constant:
      return t;
    case TermKind::Variable: {
      auto it = b.terms.find(t->name);
      return it != b.terms.end() ? it->second : t;
    }
    case TermKind::FunctionApp: {
      std::vector<TermPtr> args;
      args.reserve(t->args.size());
      for (const auto& a : t->args) args.push_back(inst_term(a, b));
      return Term::function(t->name, std::move(args));
    }
    case TermKind::Description: {
      Bindings shadowed = b;
      shadowed.terms.erase(t->name);
      shadowed.formulas.erase(t->name);
      return Term::description(t->name, instantiate(t->body, shadowed));
    }
  }
  return t;
}

std::string inst_agent(const std::string& slot, const Bindings& b) {
  if (slot.rfind('?', 0) != 0) return slot;
  auto it = b.terms.find(slot.substr(1));
  if (it != b.terms.end() && it->second->kind == TermKind::Constant)
    return it->second->name;
  return slot;
}

}  // namespace

ActExprPtr instantiate_act(const ActExprPtr& a, const Bindings& b) {
  if (a->kind != ActExprKind::Atomic) {
    auto lhs = instantiate_act(a->lhs, b);
    auto rhs = instantiate_act(a->rhs, b);
    return a->kind == ActExprKind::Seq ? ActExpr::seq(lhs, rhs)
                                       : ActExpr::choice(lhs, rhs);
  }
  std::vector<ActParam> params;
  params.reserve(a->params.size());
  for (const auto& p : a->params) {
    if (std::holds_alternative<TermPtr>(p)) {
      params.emplace_back(inst_term(std::get<TermPtr>(p), b));
    } else {
      const auto& pf = std::get<FormulaPtr>(p);
      if (pf->kind == FormulaKind::FVar) {
        auto ft = b.terms.find(pf->pred);
        if (ft != b.terms.end()) {
          params.emplace_back(ft->second);
          continue;
        }
      }
      params.emplace_back(instantiate(pf, b));
    }
  }
  return ActExpr::atomic(a->act_type, inst_agent(a->actor, b), std::move(params));
}

FormulaPtr instantiate(const FormulaPtr& f, const Bindings& b) {
  if (f->kind == FormulaKind::FVar) {
    auto it = b.formulas.find(f->pred);
    if (it != b.formulas.end()) return it->second;
    return f;
  }
  if (f->kind == FormulaKind::Exists || f->kind == FormulaKind::Forall) {
    Bindings shadowed = b;
    shadowed.terms.erase(f->var);
    shadowed.formulas.erase(f->var);
    auto g = std::make_shared<Formula>(*f);
    g->kids = {instantiate(f->kids[0], shadowed)};
    return g;
  }
  auto g = std::make_shared<Formula>(*f);
  g->agent1 = inst_agent(g->agent1, b);
  g->agent2 = inst_agent(g->agent2, b);
  for (auto& t : g->terms) t = inst_term(t, b);
  for (auto& k : g->kids) k = instantiate(k, b);
  if (g->act) g->act = instantiate_act(g->act, b);
  return g;
}

}  // namespace pact
