#include "pact/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

#include "pact/errors.hpp"
#include "pact/logic.hpp"
#include "pact/parse.hpp"
#include "pact/reference.hpp"

namespace pact {

namespace {

[[noreturn]] void schema_fail(const std::string& origin, const YAML::Node& node,
                              const std::string& detail) {
  std::ostringstream out;
  out << origin << ":" << (node.Mark().line + 1) << ": " << detail;
  throw SchemaError(out.str());
}

FormulaPtr parse_located(const std::string& origin, const YAML::Node& node) {
  try {
    return parse_formula(node.as<std::string>());
  } catch (const SyntaxError& e) {
    std::ostringstream out;
    out << origin << ":" << (node.Mark().line + 1) << ":" << e.column << ": "
        << e.what();
    throw SyntaxError(node.Mark().line + 1, e.column, e.expected, out.str());
  }
}

// Modal agent slots must name declared agents.
void check_agents(const FormulaPtr& f, const std::set<std::string>& agents,
                  const std::string& origin, const YAML::Node& node) {
  switch (f->kind) {
    case FormulaKind::Bel:
    case FormulaKind::Int:
      if (f->agent1.rfind('?', 0) != 0 && !agents.count(f->agent1))
        throw UnknownAgentReference(origin + ":" +
                                    std::to_string(node.Mark().line + 1) + ": " +
                                    f->agent1);
      break;
    case FormulaKind::MB:
    case FormulaKind::CollInt:
    case FormulaKind::CollAcc:
      for (const std::string& a : {f->agent1, f->agent2})
        if (a.rfind('?', 0) != 0 && !agents.count(a))
          throw UnknownAgentReference(origin + ":" +
                                      std::to_string(node.Mark().line + 1) + ": " + a);
      break;
    default:
      break;
  }
  for (const auto& k : f->kids) check_agents(k, agents, origin, node);
  for (const auto& t : f->terms)
    if (t->kind == TermKind::Description) check_agents(t->body, agents, origin, node);
}

}  // namespace

World load_scenario_text(const std::string& text, const std::string& origin) {
  YAML::Node doc;
  try {
    doc = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw SchemaError(origin + ":" + std::to_string(e.mark.line + 1) + ": " +
                      e.msg);
  }
  if (!doc.IsMap()) throw SchemaError(origin + ": document is not a mapping");
  if (!doc["schema"] || doc["schema"].as<int>(0) != 1)
    schema_fail(origin, doc, "missing or unsupported schema (expected: 1)");

  World world;
  if (doc["name"]) world.scenario_name = doc["name"].as<std::string>();
  world.context = doc["context"] ? doc["context"].as<std::string>() : "dialogue";
  world.max_turns = doc["maxTurns"] ? doc["maxTurns"].as<int>() : 20;
  if (world.max_turns <= 0) schema_fail(origin, doc["maxTurns"], "maxTurns must be positive");
  int nesting = doc["nestingDepth"] ? doc["nestingDepth"].as<int>() : 2;
  if (nesting < 0) schema_fail(origin, doc["nestingDepth"], "nestingDepth must be >= 0");
  std::string mode = doc["ccgMode"] ? doc["ccgMode"].as<std::string>()
                                    : "collective-acceptance";
  if (mode == "collective-acceptance")
    world.mode = CcgMode::CollectiveAcceptance;
  else if (mode == "mutual-belief")
    world.mode = CcgMode::MutualBelief;
  else
    schema_fail(origin, doc["ccgMode"], "ccgMode must be collective-acceptance or mutual-belief");

  const YAML::Node agents = doc["agents"];
  if (!agents || !agents.IsMap() || agents.size() == 0)
    schema_fail(origin, doc, "agents section missing or empty");
  if (agents.size() != 2)
    schema_fail(origin, agents, "exactly two agents are supported");

  std::set<std::string> agent_names;
  std::vector<std::string> declared_order;
  for (const auto& entry : agents) {
    std::string name = entry.first.as<std::string>();
    if (!agent_names.insert(name).second)
      schema_fail(origin, entry.first, "duplicate agent " + name);
    declared_order.push_back(name);
  }

  if (!doc["initiator"]) schema_fail(origin, doc, "initiator missing");
  std::string initiator = doc["initiator"].as<std::string>();
  if (!agent_names.count(initiator)) throw UnknownAgentReference(initiator);
  world.turn_order.push_back(initiator);
  for (const auto& name : declared_order)
    if (name != initiator) world.turn_order.push_back(name);

  std::set<std::string> truth_preds;
  if (doc["truthCritical"]) {
    for (const auto& entry : doc["truthCritical"]) {
      if (!entry.IsMap() || !entry["predicate"] || !entry["authority"])
        schema_fail(origin, entry, "truthCritical entries need predicate and authority");
      TruthCritical tc{entry["predicate"].as<std::string>(),
                       entry["authority"].as<std::string>()};
      if (!agent_names.count(tc.authority)) throw UnknownAgentReference(tc.authority);
      truth_preds.insert(tc.predicate);
      world.truth_critical.push_back(tc);
    }
  }
  if (doc["taskFact"]) {
    FormulaPtr task = parse_located(origin, doc["taskFact"]);
    check_agents(task, agent_names, origin, doc["taskFact"]);
    world.task_fact = task;
  }

  for (const auto& entry : agents) {
    std::string name = entry.first.as<std::string>();
    const YAML::Node spec = entry.second;
    if (!spec.IsMap()) schema_fail(origin, spec, "agent body must be a mapping");
    AgentState state(name, nesting);
    state.set_truth_critical(truth_preds);

    std::set<std::string> rep_ids;
    if (spec["reps"]) {
      for (const auto& rep_node : spec["reps"]) {
        if (!rep_node["id"] || !rep_node["anchor"])
          schema_fail(origin, rep_node, "rep needs id and anchor");
        MentalRepresentation rep;
        rep.id = rep_node["id"].as<std::string>();
        rep.world_anchor = rep_node["anchor"].as<std::string>();
        if (!rep_ids.insert(rep.id).second)
          schema_fail(origin, rep_node, "duplicate rep id " + rep.id);
        if (!rep_node["descriptors"] || rep_node["descriptors"].size() == 0)
          schema_fail(origin, rep_node, "rep " + rep.id + " needs descriptors");
        for (const auto& d : rep_node["descriptors"]) {
          FormulaPtr descr = parse_located(origin, d);
          check_agents(descr, agent_names, origin, d);
          rep.descriptors.push_back(normalize(descr));
        }
        state.add_rep(std::move(rep));
      }
    }
    if (spec["beliefs"]) {
      for (const auto& b : spec["beliefs"]) {
        FormulaPtr f = parse_located(origin, b);
        check_agents(f, agent_names, origin, b);
        if (!is_ground(*f))
          schema_fail(origin, b, "belief not ground: " + render(f));
        state = assert_fact(state, f);
      }
    }
    if (spec["intentions"]) {
      for (const auto& g : spec["intentions"]) {
        FormulaPtr f = parse_located(origin, g);
        check_agents(f, agent_names, origin, g);
        if (!is_ground(*f))
          schema_fail(origin, g, "intention not ground: " + render(f));
        state = state.push_goal(f, GoalOrigin::Task);
      }
    }
    if (spec["refer"]) {
      for (const auto& r : spec["refer"]) {
        if (!r["to"] || !r["rep"]) schema_fail(origin, r, "refer needs to and rep");
        std::string to = r["to"].as<std::string>();
        std::string rep = r["rep"].as<std::string>();
        if (!agent_names.count(to)) throw UnknownAgentReference(to);
        if (!rep_ids.count(rep))
          schema_fail(origin, r, "refer names unknown rep " + rep);
        if (to == name) schema_fail(origin, r, "refer addressee is the speaker");
        state = state.push_goal(refer_goal(name, to, rep), GoalOrigin::Task);
        // The twin meta-goals speak the collective-acceptance
        // vocabulary; the mutual-belief contrast mode replays grounding
        // without them.
        if (world.mode == CcgMode::CollectiveAcceptance) {
          auto [first, second] = meta_goals(name, to, rep);
          state = state.push_goal(first, GoalOrigin::Task);
          state = state.push_goal(second, GoalOrigin::Task);
        }
      }
    }
    if (spec["reactions"]) {
      for (const auto& r : spec["reactions"]) {
        if (!r["on"] || !r["push"])
          schema_fail(origin, r, "reaction needs on and push");
        ReactionRule rule;
        try {
          rule.trigger = parse_act_expr(r["on"].as<std::string>());
        } catch (const SyntaxError& e) {
          schema_fail(origin, r["on"], e.what());
        }
        rule.response = parse_located(origin, r["push"]);
        world.reactions[name].push_back(rule);
      }
    }
    world.agents.emplace(name, std::move(state));
  }
  for (const auto& a : world.turn_order) world.perceived[a] = 0;
  return world;
}

World load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_scenario_text(buf.str(), path);
}

}  // namespace pact
