#include "agent/backend.hpp"

#include <stdexcept>

#include "httplib.h"
#include "json.hpp"

namespace socsim {

RemoteBackend::RemoteBackend(RemoteBackendConfig cfg) : cfg_(std::move(cfg)) {
  if (cfg_.max_retries < 1) cfg_.max_retries = 1;
}

std::string RemoteBackend::identity() const {
  return "remote:" + cfg_.model + "@" + cfg_.host + ":" + std::to_string(cfg_.port);
}

std::string RemoteBackend::decide(const std::string& prompt) {
  // The persona half rides as the system message, the feed and format half
  // as the user message; a prompt without a feed goes whole as user content.
  nlohmann::json messages = nlohmann::json::array();
  const std::size_t split = prompt.find("\n\n# POSTS\n");
  if (split != std::string::npos) {
    messages.push_back({{"role", "system"}, {"content", prompt.substr(0, split)}});
    messages.push_back({{"role", "user"}, {"content", prompt.substr(split + 2)}});
  } else {
    messages.push_back({{"role", "user"}, {"content", prompt}});
  }
  nlohmann::json body{{"model", cfg_.model},
                      {"messages", messages},
                      {"temperature", cfg_.temperature}};
  const std::string payload = body.dump();

  std::string last_error = "no attempt made";
  for (int attempt = 0; attempt < cfg_.max_retries; ++attempt) {
    httplib::Client cli(cfg_.host, cfg_.port);
    cli.set_connection_timeout(0, cfg_.timeout_ms * 1000LL);
    cli.set_read_timeout(cfg_.timeout_ms / 1000, (cfg_.timeout_ms % 1000) * 1000);
    cli.set_write_timeout(cfg_.timeout_ms / 1000, (cfg_.timeout_ms % 1000) * 1000);

    auto res = cli.Post(cfg_.path.c_str(), payload, "application/json");
    if (!res) {
      last_error = "transport error " + httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "http status " + std::to_string(res->status);
      continue;
    }
    nlohmann::json doc = nlohmann::json::parse(res->body, nullptr, false);
    if (doc.is_discarded()) {
      last_error = "unparseable response body";
      continue;
    }
    try {
      return doc.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      last_error = std::string("unexpected response shape: ") + e.what();
    }
  }
  throw std::runtime_error("remote backend failed: " + last_error);
}

}  // namespace socsim
