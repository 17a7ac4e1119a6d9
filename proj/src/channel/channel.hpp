#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

namespace socsim {

// Correlates a submission with its response slot. hi is a per-run nonce, lo
// a strictly increasing issue counter, so ids never repeat within a run.
struct RequestId {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;
  bool operator==(const RequestId& o) const { return hi == o.hi && lo == o.lo; }
};

struct RequestIdHash {
  std::size_t operator()(const RequestId& id) const;
};

enum class RequestKind { env_action, llm_decide, embed };

struct ChannelResponse {
  enum class Status { ok, failed, timeout };
  Status status = Status::failed;
  std::string payload;  // ok only
  std::string error;    // failure tag: no_worker, no_writer, worker_failed, closed
  bool ok() const { return status == Status::ok; }
};

// Synchronous service call. Returns false on failure and fills *error.
using Handler = std::function<bool(RequestKind kind, const std::string& payload,
                                   std::string* out, std::string* error)>;

struct WorkerConfig {
  Handler handler;
  int max_concurrent = 1;
  std::string name;  // diagnostics only
};

struct ChannelConfig {
  std::vector<WorkerConfig> workers;
  // Serialized consumer for env_action messages; they never touch the pool.
  Handler writer;
  // Failed messages are re-dispatched at most this many times, on a
  // different worker whenever one is available.
  int retry_bound = 3;
  // Consecutive failures that mark a worker unhealthy.
  int failure_health_threshold = 3;
  std::uint64_t seed = 0;
};

// Asynchronous request spine: many producers, one balancing dispatcher over
// the worker pool, plus one strictly ordered writer lane. Submissions never
// block; awaits suspend only the calling thread; each slot resolves exactly
// once and is consumed by the read.
class Channel {
 public:
  explicit Channel(ChannelConfig cfg);
  ~Channel();

  Channel(const Channel&) = delete;
  Channel& operator=(const Channel&) = delete;

  // Nullopt once the channel is shut down.
  std::optional<RequestId> send_request(RequestKind kind, std::string payload);

  // Blocks until the slot fills or the timeout passes. A timeout leaves the
  // slot in place for a later await; a delivered response removes it.
  // Throws std::invalid_argument for an id that was never issued or was
  // already consumed.
  ChannelResponse await_response(const RequestId& id,
                                 std::chrono::milliseconds timeout);

  // Fails whatever is still queued and joins all threads. Idempotent.
  void shutdown();

  int worker_count() const { return static_cast<int>(workers_.size()); }
  bool worker_healthy(int index) const;
  void set_worker_healthy(int index, bool healthy);
  int worker_in_flight(int index) const;
  std::uint64_t issued_count() const;

 private:
  struct Message {
    RequestId id;
    RequestKind kind = RequestKind::llm_decide;
    std::string payload;
    std::int64_t enqueued_at = 0;  // steady-clock ns, diagnostics
    int attempts = 0;              // executions so far
    int last_worker = -1;
  };

  struct Slot {
    std::mutex m;
    std::condition_variable cv;
    bool done = false;
    ChannelResponse resp;
  };

  struct Worker {
    Handler handler;
    int max_concurrent = 1;
    std::string name;
    int in_flight = 0;              // guarded by ctrl_m_
    bool healthy = true;            // guarded by ctrl_m_
    int consecutive_failures = 0;   // guarded by ctrl_m_
    std::deque<Message> queue;      // guarded by m
    std::mutex m;
    std::condition_variable cv;
    std::vector<std::thread> threads;
  };

  void make_slot(const RequestId& id);
  void resolve_slot(const RequestId& id, ChannelResponse resp);
  void dispatch_loop();
  void worker_loop(int index);
  void writer_loop();
  void requeue_or_fail(Message msg, const std::string& error);

  ChannelConfig cfg_;
  std::uint64_t nonce_ = 0;
  std::atomic<std::uint64_t> next_lo_{1};

  std::mutex slots_m_;
  std::unordered_map<RequestId, std::shared_ptr<Slot>, RequestIdHash> slots_;

  // Pool lane state: queue, closed flag, worker capacity bookkeeping.
  mutable std::mutex ctrl_m_;
  std::condition_variable ctrl_cv_;
  std::deque<Message> pool_queue_;
  bool closed_ = false;

  std::mutex writer_m_;
  std::condition_variable writer_cv_;
  std::deque<Message> writer_queue_;

  std::vector<std::unique_ptr<Worker>> workers_;
  std::thread dispatcher_;
  std::thread writer_thread_;
  bool joined_ = false;
};

}  // namespace socsim
