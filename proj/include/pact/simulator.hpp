#pragma once

#include "pact/world.hpp"

namespace pact {

// Alternates turns from the initiator until both agents are quiescent
// (empty agenda, every event perceived) or the turn budget runs out, in
// which case a turn-limit note is flagged in the trace.
World run(World world);

}  // namespace pact
