#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "actions/kinds.hpp"

namespace socsim {

struct ActionCall {
  std::string name;                // as written on the wire
  std::optional<ActionKind> kind;  // empty when the name is unknown
  nlohmann::json arguments;        // raw value; validated at execution
};

struct ActionEnvelope {
  std::string reason;
  std::vector<ActionCall> calls;
  // Set when the input could not be read as the response format and was
  // replaced by a single do_nothing call.
  bool parse_failed = false;
};

// Total over arbitrary bytes. A response is readable when it is a JSON
// object with a "functions" array; each entry keeps its position even when
// malformed, so results line up call by call. Anything else degrades to the
// fallback envelope, never an exception.
ActionEnvelope parse_action_envelope(std::string_view text);

// Wire form of an envelope, for backends that compose responses directly.
std::string envelope_to_json(const ActionEnvelope& env);

}  // namespace socsim
