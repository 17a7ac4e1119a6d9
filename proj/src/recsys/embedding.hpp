#pragma once

#include <memory>
#include <string>
#include <vector>

namespace socsim {

// Text embedding contract. embed_batch throws std::runtime_error when the
// provider cannot produce vectors (remote transport failure or bad payload).
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual int dim() const = 0;
  virtual std::vector<std::vector<double>> embed_batch(
      const std::vector<std::string>& texts) = 0;
  std::vector<double> embed(const std::string& text);
};

// Feature-hashed bag of tokens, L2-normalized; bit-stable across platforms.
// Texts with no tokens map to the zero vector.
class HashedEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit HashedEmbeddingProvider(int dim = 384);
  int dim() const override { return dim_; }
  std::vector<std::vector<double>> embed_batch(
      const std::vector<std::string>& texts) override;

 private:
  int dim_;
};

// Posts JSON {"texts": [...]} to an HTTP endpoint, expects {"vectors": [[..]]}.
class RemoteEmbeddingProvider : public EmbeddingProvider {
 public:
  RemoteEmbeddingProvider(std::string host, int port, std::string path, int dim,
                          int timeout_ms = 30000);
  int dim() const override { return dim_; }
  std::vector<std::vector<double>> embed_batch(
      const std::vector<std::string>& texts) override;

 private:
  std::string host_;
  int port_;
  std::string path_;
  int dim_;
  int timeout_ms_;
};

// The user-side embedding input: bio plus the most recent posts (newest last),
// joined with newlines.
std::string user_embedding_text(const std::string& bio,
                                const std::vector<std::string>& recent_posts);

}  // namespace socsim
