#pragma once

#include <stdexcept>
#include <string>

namespace pact {

// Base class for all engine errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Formula text could not be parsed. Carries 1-based position and the
// token set the parser would have accepted.
struct SyntaxError : Error {
  int line;
  int column;
  std::string expected;

  SyntaxError(int line_, int column_, const std::string& expected_,
              const std::string& found)
      : Error("syntax error at " + std::to_string(line_) + ":" +
              std::to_string(column_) + ": expected " + expected_ +
              ", found " + found),
        line(line_),
        column(column_),
        expected(expected_) {}
};

struct NonGroundSubstitution : Error {
  explicit NonGroundSubstitution(const std::string& term)
      : Error("substitution term is not ground: " + term) {}
};

// Asserting the fact would make the belief base inconsistent.
struct InconsistentBelief : Error {
  std::string fact;
  std::string conflict;

  InconsistentBelief(const std::string& fact_, const std::string& conflict_)
      : Error("inconsistent belief: " + fact_ + " conflicts with " + conflict_),
        fact(fact_),
        conflict(conflict_) {}
};

// The same context already holds the negation of the accepted content.
struct InconsistentAcceptance : Error {
  InconsistentAcceptance(const std::string& content, const std::string& context)
      : Error("inconsistent acceptance in context '" + context + "': " + content) {}
};

struct UnknownActType : Error {
  explicit UnknownActType(const std::string& type)
      : Error("unknown act type: " + type) {}
};

struct InfeasibleAct : Error {
  std::string unsatisfied;

  InfeasibleAct(const std::string& act, const std::string& unsatisfied_)
      : Error("infeasible act " + act + ": unsatisfied precondition " + unsatisfied_),
        unsatisfied(unsatisfied_) {}
};

struct NoDistinguishingDescription : Error {
  explicit NoDistinguishingDescription(const std::string& rep)
      : Error("no distinguishing description for representation " + rep) {}
};

struct MissingPactPreconditions : Error {
  explicit MissingPactPreconditions(const std::string& detail)
      : Error("pact preconditions not met: " + detail) {}
};

struct UnknownRep : Error {
  UnknownRep(const std::string& agent, const std::string& rep)
      : Error("agent " + agent + " has no representation " + rep) {}
};

struct SchemaError : Error {
  explicit SchemaError(const std::string& detail)
      : Error("scenario schema error: " + detail) {}
};

struct UnknownAgentReference : Error {
  explicit UnknownAgentReference(const std::string& name)
      : Error("reference to undeclared agent: " + name) {}
};

}  // namespace pact
