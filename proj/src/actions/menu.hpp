#pragma once

#include <string>
#include <string_view>

#include "actions/kinds.hpp"

namespace socsim {

// Decision-prompt fragments. The menu offers only the scenario's subset;
// do_nothing is always on it so an agent can decline without breaking the
// format.

std::string_view menu_objective();
std::string_view menu_self_description_header();
std::string_view menu_response_format();

// Description lines for each action on the subset, in the fixed menu order.
// Auto-adds do_nothing. Throws std::invalid_argument on an empty subset.
std::string menu_actions_text(const ActionSet& subset);

// Full decision prompt without a feed: objective, action list, persona under
// the self-description header, then the response format contract.
std::string render_action_menu(const ActionSet& subset, std::string_view persona);

}  // namespace socsim
