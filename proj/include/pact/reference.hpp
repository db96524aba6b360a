#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pact/ast.hpp"
#include "pact/world.hpp"

namespace pact {

struct IdentificationOutcome {
  enum class Kind { Unique, Ambiguous, NoMatch } kind;
  std::vector<std::string> rep_ids;  // one for Unique, >=2 for Ambiguous

  bool unique() const { return kind == Kind::Unique; }
  const std::string& rep() const { return rep_ids.front(); }
};

// Matches a definite description against the agent's representation
// store. A representation matches when every conjunct of the body,
// with the bound variable mapped to the representation, is supported
// by its descriptors together with pact vocabulary of the context.
// Truth-critical equality descriptors match on predicate shape: a
// wrong value still picks the object out, it just cannot be accepted
// as it stands.
IdentificationOutcome identify(const AgentState& state, const TermPtr& description,
                               const std::string& context,
                               const std::set<std::string>& truth_critical = {});

// Speaker-side description choice: the smallest descriptor subset (by
// count, then canonical text) that is uniquely identifying against the
// speaker's nested model of the addressee. Prior pact descriptions for
// the representation are preferred; when the representation's own
// descriptors cannot distinguish, descriptors derived from the nested
// model of the addressee extend the pool. Throws
// NoDistinguishingDescription.
TermPtr choose_description(const AgentState& state, const std::string& rep_id,
                           const std::string& addressee, const std::string& context,
                           const std::set<std::string>& exclude_rendered = {});

// Forms the conceptual pact after a propose/accept pair on the same
// description: both acceptance stores gain referedBy(description,
// own-rep), both bases gain the mutual-understanding fact, and the
// scenario task fact (if any) is asserted as shared belief. In
// mutual-belief mode the pact is replayed as MB assertions of the
// grounded description content instead; refusals become trace notes.
// Throws MissingPactPreconditions when the trace lacks the pair.
World register_pact(World world, const std::string& proposer,
                    const std::string& acceptor, const TermPtr& description,
                    const std::string& rep_proposer, const std::string& rep_acceptor);

// Plain-content pact (no conceptualization involved).
World register_content_pact(World world, const std::string& proposer,
                            const std::string& acceptor, const FormulaPtr& content);

// Harness oracle: do two private representations anchor the same world
// object? Never consulted by agent-side operations.
bool rep_same_obj(const World& world,
                  const std::pair<std::string, std::string>& a,
                  const std::pair<std::string, std::string>& b);

// The twin goals that govern referring, seeded onto the speaker's
// agenda alongside the refer intention.
std::pair<FormulaPtr, FormulaPtr> meta_goals(const std::string& speaker,
                                             const std::string& addressee,
                                             const std::string& rep_id);

// The refer intention content: an uninterpreted atom.
FormulaPtr refer_goal(const std::string& speaker, const std::string& addressee,
                      const std::string& rep_id);

// Satisfaction of agenda goals beyond plain entailment: refer goals and
// collective goals are grounded in pacts (or, in mutual-belief mode, in
// the replayed shared-belief facts).
bool goal_satisfied(const World& world, const std::string& agent_id,
                    const FormulaPtr& goal);

}  // namespace pact
