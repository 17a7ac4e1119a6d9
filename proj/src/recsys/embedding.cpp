#include "recsys/embedding.hpp"

#include <cmath>
#include <stdexcept>

#include "httplib.h"
#include "json.hpp"
#include "util/hash.hpp"
#include "util/text.hpp"

namespace socsim {

std::vector<double> EmbeddingProvider::embed(const std::string& text) {
  return embed_batch({text})[0];
}

HashedEmbeddingProvider::HashedEmbeddingProvider(int dim) : dim_(dim) {
  if (dim <= 0) throw std::invalid_argument("embedding dim must be positive");
}

std::vector<std::vector<double>> HashedEmbeddingProvider::embed_batch(
    const std::vector<std::string>& texts) {
  std::vector<std::vector<double>> out;
  out.reserve(texts.size());
  for (const std::string& text : texts) {
    std::vector<double> v(static_cast<std::size_t>(dim_), 0.0);
    for (const std::string& token : tokenize(text)) {
      // FNV then avalanche: raw FNV of counter-like tokens lands in
      // arithmetic progressions, which would correlate unrelated texts.
      const std::uint64_t h = mix64(fnv1a64(token));
      const std::size_t idx = static_cast<std::size_t>(h % static_cast<std::uint64_t>(dim_));
      v[idx] += (h >> 63) ? 1.0 : -1.0;
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    if (norm > 0.0) {
      norm = std::sqrt(norm);
      for (double& x : v) x /= norm;
    }
    out.push_back(std::move(v));
  }
  return out;
}

RemoteEmbeddingProvider::RemoteEmbeddingProvider(std::string host, int port,
                                                 std::string path, int dim,
                                                 int timeout_ms)
    : host_(std::move(host)), port_(port), path_(std::move(path)), dim_(dim),
      timeout_ms_(timeout_ms) {}

std::vector<std::vector<double>> RemoteEmbeddingProvider::embed_batch(
    const std::vector<std::string>& texts) {
  httplib::Client client(host_, port_);
  client.set_connection_timeout(0, timeout_ms_ * 1000);
  client.set_read_timeout(timeout_ms_ / 1000, (timeout_ms_ % 1000) * 1000);

  nlohmann::json body;
  body["texts"] = texts;
  auto res = client.Post(path_, body.dump(), "application/json");
  if (!res || res->status != 200)
    throw std::runtime_error("embedding endpoint unreachable or non-200");
  nlohmann::json parsed = nlohmann::json::parse(res->body, nullptr, false);
  if (!parsed.is_object() || !parsed.contains("vectors"))
    throw std::runtime_error("embedding endpoint returned malformed body");

  std::vector<std::vector<double>> out;
  for (const auto& vec : parsed["vectors"]) {
    std::vector<double> v;
    for (const auto& x : vec) v.push_back(x.get<double>());
    if (static_cast<int>(v.size()) != dim_)
      throw std::runtime_error("embedding endpoint returned wrong dimension");
    out.push_back(std::move(v));
  }
  if (out.size() != texts.size())
    throw std::runtime_error("embedding endpoint returned wrong count");
  return out;
}

std::string user_embedding_text(const std::string& bio,
                                const std::vector<std::string>& recent_posts) {
  std::string text = bio;
  for (const std::string& p : recent_posts) {
    text += '\n';
    text += p;
  }
  return text;
}

}  // namespace socsim
