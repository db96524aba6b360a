#include "pact/world.hpp"

#include <sstream>

#include "pact/digest.hpp"
#include "pact/errors.hpp"

namespace pact {

std::string to_string(CcgMode mode) {
  return mode == CcgMode::CollectiveAcceptance ? "collective-acceptance"
                                               : "mutual-belief";
}

std::string to_hex(uint64_t value) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[value & 0xf];
    value >>= 4;
  }
  return out;
}

std::string Event::line() const {
  std::ostringstream out;
  out << index << '\t' << turn << '\t' << actor << '\t' << addressee << '\t'
      << act_type << '\t' << payload << '\t' << digest;
  return out.str();
}

std::string Event::transcript() const {
  return actor + " -> " + addressee + " : " + act_type + "(" + payload + ")";
}

const AgentState& World::agent(const std::string& id) const {
  auto it = agents.find(id);
  if (it == agents.end()) throw UnknownAgentReference(id);
  return it->second;
}

std::string World::other(const std::string& id) const {
  for (const auto& a : turn_order)
    if (a != id) return a;
  throw UnknownAgentReference("counterpart of " + id);
}

const TruthCritical* World::truth_critical_for(const std::string& predicate) const {
  for (const auto& tc : truth_critical)
    if (tc.predicate == predicate) return &tc;
  return nullptr;
}

bool World::is_truth_critical(const std::string& predicate) const {
  return truth_critical_for(predicate) != nullptr;
}

std::string serialize_trace(const World& world) {
  std::ostringstream out;
  out << "# pactsim-trace 1\n";
  out << "# scenario " << world.scenario_name << '\n';
  out << "# context " << world.context << '\n';
  out << "# mode " << to_string(world.mode) << '\n';
  size_t note_idx = 0;
  auto flush_notes = [&](int up_to_turn) {
    while (note_idx < world.trace.notes.size() &&
           world.trace.notes[note_idx].turn <= up_to_turn) {
      const Note& n = world.trace.notes[note_idx++];
      out << "# note " << n.turn << ' ' << n.text << '\n';
    }
  };
  for (const auto& e : world.trace.events) {
    flush_notes(e.turn - 1);
    out << e.line() << '\n';
    // Notes raised by this very turn follow its event line.
    while (note_idx < world.trace.notes.size() &&
           world.trace.notes[note_idx].turn == e.turn) {
      out << "# note " << e.turn << ' ' << world.trace.notes[note_idx++].text << '\n';
    }
  }
  flush_notes(world.turn + 1000000);
  for (const auto& id : world.turn_order) {
    const AgentState& s = world.agent(id);
    out << "# final " << id << " digest=" << to_hex(fnv1a64(s.dump())) << '\n';
    for (const auto& line : consistency_report(s).serialize(id))
      out << "# " << line << '\n';
  }
  out << "# end\n";
  return out.str();
}

std::vector<std::string> diff_lines(const std::string& expected,
                                    const std::string& actual) {
  auto split = [](const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
  };
  std::vector<std::string> a = split(expected);
  std::vector<std::string> b = split(actual);
  std::vector<std::string> out;
  size_t n = std::max(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    const std::string* ea = i < a.size() ? &a[i] : nullptr;
    const std::string* eb = i < b.size() ? &b[i] : nullptr;
    if (ea && eb && *ea == *eb) continue;
    std::string prefix = "line " + std::to_string(i + 1) + ": ";
    if (ea) out.push_back(prefix + "- " + *ea);
    if (eb) out.push_back(prefix + "+ " + *eb);
  }
  return out;
}

}  // namespace pact
