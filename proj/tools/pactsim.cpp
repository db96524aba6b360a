// pactsim: batch front end for the dialogue engine. Runs scenarios to
// deterministic trace files, validates scenario documents, and renders
// traces as readable transcripts.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pact/engine.hpp"
#include "pact/errors.hpp"
#include "pact/scenario.hpp"
#include "pact/simulator.hpp"
#include "pact/world.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kMismatch = 1;  // semantic failure / golden mismatch
constexpr int kUsage = 2;     // unreadable input, schema or parse errors

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw pact::Error("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int cmd_run(const std::string& scenario_path, const std::string& out_path,
            const std::string& golden_path) {
  pact::World world;
  try {
    world = pact::load_scenario_file(scenario_path);
  } catch (const pact::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  world = pact::run(std::move(world));
  std::string trace = pact::serialize_trace(world);
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return kUsage;
    }
    out << trace;
  } else if (golden_path.empty()) {
    std::cout << trace;
  }
  if (!golden_path.empty()) {
    std::string golden;
    try {
      golden = read_file(golden_path);
    } catch (const pact::Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kUsage;
    }
    std::vector<std::string> diff = pact::diff_lines(golden, trace);
    if (!diff.empty()) {
      std::cerr << "trace mismatch against " << golden_path << ":\n";
      for (const auto& line : diff) std::cerr << "  " << line << "\n";
      return kMismatch;
    }
    std::cout << "trace matches " << golden_path << "\n";
  }
  return kOk;
}

int cmd_validate(const std::string& scenario_path) {
  std::string text;
  try {
    text = read_file(scenario_path);
  } catch (const pact::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  try {
    pact::load_scenario_text(text, scenario_path);
  } catch (const pact::Error& e) {
    std::cerr << e.what() << "\n";
    return kMismatch;
  }
  std::cout << scenario_path << ": ok\n";
  return kOk;
}

struct TraceFile {
  std::vector<pact::Event> events;
  std::vector<std::string> header;
  std::vector<std::string> footer;  // final/report lines
  std::vector<std::string> notes;
  std::string scenario_ref;
};

TraceFile parse_trace(const std::string& text) {
  TraceFile t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      if (line != "# pactsim-trace 1") throw pact::Error("not a pactsim trace file");
      first = false;
      continue;
    }
    if (line.rfind("# scenario ", 0) == 0) {
      t.scenario_ref = line.substr(11);
      t.header.push_back(line);
      continue;
    }
    if (line.rfind("# note ", 0) == 0) {
      t.notes.push_back(line.substr(7));
      continue;
    }
    if (line.rfind("# final", 0) == 0 || line.rfind("# report", 0) == 0 ||
        line.rfind("# conflict", 0) == 0 || line.rfind("# violation", 0) == 0 ||
        line == "# end") {
      t.footer.push_back(line);
      continue;
    }
    if (line.rfind("# ", 0) == 0) {
      t.header.push_back(line);
      continue;
    }
    pact::Event e;
    std::istringstream cols(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(cols, field, '\t')) fields.push_back(field);
    if (fields.size() != 7) throw pact::Error("malformed event line: " + line);
    e.index = std::stoi(fields[0]);
    e.turn = std::stoi(fields[1]);
    e.actor = fields[2];
    e.addressee = fields[3];
    e.act_type = fields[4];
    e.payload = fields[5];
    e.digest = fields[6];
    t.events.push_back(e);
  }
  if (first) throw pact::Error("empty trace file");
  return t;
}

// The trace header names the scenario, not a path; look for the file
// next to the trace, under ./scenarios, or take the explicit override.
std::string resolve_scenario(const std::string& ref, const std::string& trace_path,
                             const std::string& override_path) {
  if (!override_path.empty()) return override_path;
  auto readable = [](const std::string& p) {
    std::ifstream in(p);
    return in.good();
  };
  std::string dir = ".";
  size_t slash = trace_path.find_last_of('/');
  if (slash != std::string::npos) dir = trace_path.substr(0, slash);
  for (const std::string& candidate :
       {ref, "scenarios/" + ref + ".yaml", dir + "/" + ref + ".yaml",
        dir + "/../scenarios/" + ref + ".yaml"})
    if (readable(candidate)) return candidate;
  return "";
}

int cmd_show(const std::string& trace_path, int verbosity,
             const std::string& scenario_override) {
  TraceFile t;
  try {
    t = parse_trace(read_file(trace_path));
  } catch (const pact::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  std::cout << "trace " << trace_path << " (" << t.events.size() << " acts)\n";
  for (const auto& e : t.events)
    std::cout << "U" << (e.index + 1) << " " << e.transcript() << "\n";
  for (const auto& n : t.notes) std::cout << "note " << n << "\n";
  if (verbosity >= 1) {
    // Replay the scenario the trace names to recover per-event
    // consistency reports.
    pact::World world;
    bool have_world = false;
    std::string path = resolve_scenario(t.scenario_ref, trace_path, scenario_override);
    if (!path.empty()) {
      try {
        world = pact::load_scenario_file(path);
        have_world = true;
      } catch (const pact::Error& e) {
        std::cerr << "note: cannot replay scenario " << path << ": " << e.what()
                  << "\n";
      }
    } else {
      std::cerr << "note: scenario '" << t.scenario_ref
                << "' not found for replay; pass --scenario\n";
    }
    if (have_world) {
      size_t next_event = 0;
      while (world.turn < world.max_turns && next_event < t.events.size()) {
        const std::string agent =
            world.turn_order[world.turn % world.turn_order.size()];
        auto [next, event] = pact::step_turn(std::move(world), agent);
        world = std::move(next);
        if (!event) continue;
        if (event->line() != t.events[next_event].line()) {
          std::cerr << "error: replay diverges at event " << next_event << "\n";
          return kMismatch;
        }
        ++next_event;
        std::cout << "after U" << next_event << ":";
        for (const auto& id : world.turn_order) {
          auto report = pact::consistency_report(world.agent(id));
          std::cout << " " << id << "[b=" << report.belief_violations.size()
                    << " a=" << report.acceptance_violations.size()
                    << " x=" << report.cross_conflicts.size() << "]";
        }
        std::cout << "\n";
        if (verbosity >= 2) {
          for (const auto& id : world.turn_order)
            for (const auto& line :
                 pact::consistency_report(world.agent(id)).serialize(id))
              std::cout << "  " << line << "\n";
        }
      }
    }
  }
  for (const auto& line : t.footer)
    if (line != "# end") std::cout << line.substr(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic goal-oriented dialogue simulator"};
  app.require_subcommand(1);
  bool log_times = false;
  app.add_flag("--log-times", log_times,
               "print elapsed wall time to stderr (never on stdout)");

  std::string scenario_path, out_path, golden_path, trace_path;
  int verbosity = 0;

  CLI::App* run = app.add_subcommand("run", "run a scenario and emit its trace");
  run->add_option("--scenario", scenario_path, "scenario file")->required();
  run->add_option("--out", out_path, "write the trace here instead of stdout");
  run->add_option("--golden", golden_path, "compare byte-exactly against this trace");

  CLI::App* validate =
      app.add_subcommand("validate", "check a scenario file and all its formulas");
  validate->add_option("--scenario", scenario_path, "scenario file")->required();

  CLI::App* show = app.add_subcommand("show", "render a trace as a transcript");
  show->add_option("--trace", trace_path, "trace file")->required();
  show->add_option("-v,--verbosity", verbosity,
                   "1: per-event report summaries (replays the scenario); 2: details");
  show->add_option("--scenario", scenario_path,
                   "scenario file for the replay, when the trace's name "
                   "cannot be resolved");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  auto start = std::chrono::steady_clock::now();
  int rc = kUsage;
  if (run->parsed()) rc = cmd_run(scenario_path, out_path, golden_path);
  if (validate->parsed()) rc = cmd_validate(scenario_path);
  if (show->parsed()) rc = cmd_show(trace_path, verbosity, scenario_path);
  if (log_times) {
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    std::cerr << "elapsed " << ms << " ms\n";
  }
  return rc;
}
