#include "pact/simulator.hpp"

#include "pact/engine.hpp"

namespace pact {

World run(World world) {
  while (world.turn < world.max_turns) {
    const std::string agent = world.turn_order[world.turn % world.turn_order.size()];
    auto [next, event] = step_turn(std::move(world), agent);
    world = std::move(next);
    bool all_quiet = true;
    for (const auto& a : world.turn_order)
      if (!quiescent(world, a)) all_quiet = false;
    if (all_quiet) return world;
  }
  bool all_quiet = true;
  for (const auto& a : world.turn_order)
    if (!quiescent(world, a)) all_quiet = false;
  if (!all_quiet)
    world.trace.notes.push_back({world.turn, "turn limit reached"});
  return world;
}

}  // namespace pact
