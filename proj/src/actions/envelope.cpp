#include "actions/envelope.hpp"

namespace socsim {
namespace {

ActionEnvelope fallback(std::string reason) {
  ActionEnvelope env;
  env.reason = std::move(reason);
  env.parse_failed = true;
  ActionCall call;
  call.name = action_name(ActionKind::do_nothing);
  call.kind = ActionKind::do_nothing;
  call.arguments = nlohmann::json::object();
  env.calls.push_back(std::move(call));
  return env;
}

}  // namespace

ActionEnvelope parse_action_envelope(std::string_view text) {
  nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) return fallback("");

  std::string reason;
  if (auto it = doc.find("reason"); it != doc.end() && it->is_string()) {
    reason = it->get<std::string>();
  }

  auto fit = doc.find("functions");
  if (fit == doc.end() || !fit->is_array()) return fallback(std::move(reason));

  ActionEnvelope env;
  env.reason = std::move(reason);
  env.calls.reserve(fit->size());
  for (const auto& entry : *fit) {
    ActionCall call;
    if (entry.is_object()) {
      if (auto n = entry.find("name"); n != entry.end() && n->is_string()) {
        call.name = n->get<std::string>();
      }
      if (auto a = entry.find("arguments"); a != entry.end()) {
        call.arguments = *a;
      } else {
        call.arguments = nlohmann::json::object();
      }
    } else {
      // Keep the malformed entry so the rejection trace shows what arrived.
      call.arguments = entry;
    }
    call.kind = action_from_name(call.name);
    env.calls.push_back(std::move(call));
  }
  return env;
}

std::string envelope_to_json(const ActionEnvelope& env) {
  nlohmann::ordered_json doc;
  doc["reason"] = env.reason;
  auto& fns = doc["functions"] = nlohmann::ordered_json::array();
  for (const ActionCall& call : env.calls) {
    nlohmann::ordered_json entry;
    entry["name"] = call.name;
    entry["arguments"] = call.arguments;
    fns.push_back(std::move(entry));
  }
  return doc.dump();
}

}  // namespace socsim
