#include "channel/channel.hpp"

#include <stdexcept>

#include "util/hash.hpp"
#include "util/rng.hpp"

namespace socsim {

namespace {

std::int64_t steady_ns() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

}  // namespace

std::size_t RequestIdHash::operator()(const RequestId& id) const {
  return static_cast<std::size_t>(mix64(id.lo ^ (id.hi * 0x9e3779b97f4a7c15ULL)));
}

Channel::Channel(ChannelConfig cfg) : cfg_(std::move(cfg)) {
  nonce_ = mix_seed(cfg_.seed, 0x6368616e6e656cULL);
  workers_.reserve(cfg_.workers.size());
  for (const WorkerConfig& wc : cfg_.workers) {
    auto w = std::make_unique<Worker>();
    w->handler = wc.handler;
    w->max_concurrent = wc.max_concurrent < 1 ? 1 : wc.max_concurrent;
    w->name = wc.name;
    workers_.push_back(std::move(w));
  }
  for (std::size_t i = 0; i < workers_.size(); ++i) {
    Worker& w = *workers_[i];
    w.threads.reserve(w.max_concurrent);
    for (int t = 0; t < w.max_concurrent; ++t) {
      w.threads.emplace_back([this, i] { worker_loop(static_cast<int>(i)); });
    }
  }
  dispatcher_ = std::thread([this] { dispatch_loop(); });
  if (cfg_.writer) {
    writer_thread_ = std::thread([this] { writer_loop(); });
  }
}

Channel::~Channel() { shutdown(); }

void Channel::make_slot(const RequestId& id) {
  std::lock_guard<std::mutex> lk(slots_m_);
  slots_.emplace(id, std::make_shared<Slot>());
}

void Channel::resolve_slot(const RequestId& id, ChannelResponse resp) {
  std::shared_ptr<Slot> slot;
  {
    std::lock_guard<std::mutex> lk(slots_m_);
    auto it = slots_.find(id);
    if (it == slots_.end()) return;  // already consumed, a late write is dropped
    slot = it->second;
  }
  std::lock_guard<std::mutex> lk(slot->m);
  if (slot->done) return;  // first writer wins, exactly once
  slot->done = true;
  slot->resp = std::move(resp);
  slot->cv.notify_all();
}

std::optional<RequestId> Channel::send_request(RequestKind kind,
                                               std::string payload) {
  Message msg;
  msg.kind = kind;
  msg.payload = std::move(payload);
  msg.enqueued_at = steady_ns();
  msg.id.hi = nonce_;
  msg.id.lo = next_lo_.fetch_add(1, std::memory_order_relaxed);

  make_slot(msg.id);
  const RequestId id = msg.id;

  if (kind == RequestKind::env_action) {
    if (!cfg_.writer) {
      {
        std::lock_guard<std::mutex> lk(ctrl_m_);
        if (closed_) {
          std::lock_guard<std::mutex> sl(slots_m_);
          slots_.erase(id);
          return std::nullopt;
        }
      }
      resolve_slot(id, {ChannelResponse::Status::failed, "", "no_writer"});
      return id;
    }
    std::lock_guard<std::mutex> lk(writer_m_);
    {
      std::lock_guard<std::mutex> clk(ctrl_m_);
      if (closed_) {
        std::lock_guard<std::mutex> sl(slots_m_);
        slots_.erase(id);
        return std::nullopt;
      }
    }
    writer_queue_.push_back(std::move(msg));
    writer_cv_.notify_one();
    return id;
  }

  {
    std::lock_guard<std::mutex> lk(ctrl_m_);
    if (closed_) {
      std::lock_guard<std::mutex> sl(slots_m_);
      slots_.erase(id);
      return std::nullopt;
    }
    pool_queue_.push_back(std::move(msg));
  }
  ctrl_cv_.notify_all();
  return id;
}

ChannelResponse Channel::await_response(const RequestId& id,
                                        std::chrono::milliseconds timeout) {
  std::shared_ptr<Slot> slot;
  {
    std::lock_guard<std::mutex> lk(slots_m_);
    auto it = slots_.find(id);
    if (it == slots_.end()) {
      throw std::invalid_argument("await_response: id not issued or already consumed");
    }
    slot = it->second;
  }
  std::unique_lock<std::mutex> lk(slot->m);
  if (!slot->cv.wait_for(lk, timeout, [&] { return slot->done; })) {
    return {ChannelResponse::Status::timeout, "", "timeout"};
  }
  ChannelResponse resp = slot->resp;
  lk.unlock();
  {
    std::lock_guard<std::mutex> mlk(slots_m_);
    slots_.erase(id);
  }
  return resp;
}

void Channel::dispatch_loop() {
  for (;;) {
    Message msg;
    int target = -1;
    {
      std::unique_lock<std::mutex> lk(ctrl_m_);
      ctrl_cv_.wait(lk, [&] {
        if (closed_) return true;
        if (pool_queue_.empty()) return false;
        bool any_healthy = false;
        bool any_capacity = false;
        for (const auto& w : workers_) {
          if (!w->healthy) continue;
          any_healthy = true;
          if (w->in_flight < w->max_concurrent) any_capacity = true;
        }
        return !any_healthy || any_capacity;
      });
      if (closed_) {
        // Everything still queued fails; nothing is silently dropped.
        while (!pool_queue_.empty()) {
          Message m = std::move(pool_queue_.front());
          pool_queue_.pop_front();
          lk.unlock();
          resolve_slot(m.id, {ChannelResponse::Status::failed, "", "closed"});
          lk.lock();
        }
        return;
      }
      msg = std::move(pool_queue_.front());
      pool_queue_.pop_front();

      // Least in-flight healthy worker, lowest index on ties. A retry avoids
      // the worker that just failed it when any other candidate has capacity.
      int fallback = -1;
      for (int i = 0; i < static_cast<int>(workers_.size()); ++i) {
        const Worker& w = *workers_[i];
        if (!w.healthy || w.in_flight >= w.max_concurrent) continue;
        if (i == msg.last_worker) {
          if (fallback < 0) fallback = i;
          continue;
        }
        if (target < 0 || w.in_flight < workers_[target]->in_flight) target = i;
      }
      if (target < 0) target = fallback;
      if (target < 0) {
        // Healthy workers exist but none has capacity right now; or none are
        // healthy at all.
        bool any_healthy = false;
        for (const auto& w : workers_) any_healthy |= w->healthy;
        if (!any_healthy) {
          lk.unlock();
          resolve_slot(msg.id, {ChannelResponse::Status::failed, "", "no_worker"});
          continue;
        }
        pool_queue_.push_front(std::move(msg));
        continue;  // loop back to wait for capacity
      }
      ++workers_[target]->in_flight;
    }
    Worker& w = *workers_[target];
    {
      std::lock_guard<std::mutex> wlk(w.m);
      w.queue.push_back(std::move(msg));
    }
    w.cv.notify_one();
  }
}

void Channel::requeue_or_fail(Message msg, const std::string& error) {
  if (msg.attempts - 1 < cfg_.retry_bound) {
    {
      std::lock_guard<std::mutex> lk(ctrl_m_);
      if (!closed_) {
        pool_queue_.push_back(std::move(msg));
        ctrl_cv_.notify_all();
        return;
      }
    }
    resolve_slot(msg.id, {ChannelResponse::Status::failed, "", "closed"});
    return;
  }
  resolve_slot(msg.id, {ChannelResponse::Status::failed, "",
                        error.empty() ? "worker_failed" : error});
}

void Channel::worker_loop(int index) {
  Worker& w = *workers_[index];
  for (;;) {
    Message msg;
    {
      std::unique_lock<std::mutex> lk(w.m);
      w.cv.wait(lk, [&] {
        if (!w.queue.empty()) return true;
        std::lock_guard<std::mutex> clk(ctrl_m_);
        return closed_;
      });
      if (w.queue.empty()) return;  // closed and drained
      msg = std::move(w.queue.front());
      w.queue.pop_front();
    }

    msg.attempts += 1;
    msg.last_worker = index;
    std::string out;
    std::string err;
    bool ok = false;
    try {
      ok = w.handler && w.handler(msg.kind, msg.payload, &out, &err);
    } catch (const std::exception& e) {
      err = e.what();
    } catch (...) {
      err = "handler_exception";
    }

    {
      std::lock_guard<std::mutex> lk(ctrl_m_);
      --w.in_flight;
      if (ok) {
        w.consecutive_failures = 0;
      } else {
        if (++w.consecutive_failures >= cfg_.failure_health_threshold) {
          w.healthy = false;
        }
      }
    }
    ctrl_cv_.notify_all();

    if (ok) {
      resolve_slot(msg.id, {ChannelResponse::Status::ok, std::move(out), ""});
    } else {
      requeue_or_fail(std::move(msg), "worker_failed");
    }
  }
}

void Channel::writer_loop() {
  for (;;) {
    Message msg;
    {
      std::unique_lock<std::mutex> lk(writer_m_);
      writer_cv_.wait(lk, [&] {
        if (!writer_queue_.empty()) return true;
        std::lock_guard<std::mutex> clk(ctrl_m_);
        return closed_;
      });
      if (writer_queue_.empty()) return;
      msg = std::move(writer_queue_.front());
      writer_queue_.pop_front();
    }
    {
      std::lock_guard<std::mutex> clk(ctrl_m_);
      if (closed_) {
        resolve_slot(msg.id, {ChannelResponse::Status::failed, "", "closed"});
        continue;
      }
    }
    std::string out;
    std::string err;
    bool ok = false;
    try {
      ok = cfg_.writer(msg.kind, msg.payload, &out, &err);
    } catch (const std::exception& e) {
      err = e.what();
    } catch (...) {
      err = "handler_exception";
    }
    if (ok) {
      resolve_slot(msg.id, {ChannelResponse::Status::ok, std::move(out), ""});
    } else {
      resolve_slot(msg.id, {ChannelResponse::Status::failed, "",
                            err.empty() ? "worker_failed" : err});
    }
  }
}

void Channel::shutdown() {
  bool do_join = false;
  {
    std::lock_guard<std::mutex> lk(ctrl_m_);
    closed_ = true;
    if (!joined_) {
      joined_ = true;
      do_join = true;
    }
  }
  ctrl_cv_.notify_all();
  writer_cv_.notify_all();
  for (auto& w : workers_) w->cv.notify_all();

  if (do_join) {
    if (dispatcher_.joinable()) dispatcher_.join();
    if (writer_thread_.joinable()) writer_thread_.join();
    for (auto& w : workers_) {
      for (std::thread& t : w->threads) {
        if (t.joinable()) t.join();
      }
      // Anything a worker never started fails rather than vanishing.
      for (Message& m : w->queue) {
        resolve_slot(m.id, {ChannelResponse::Status::failed, "", "closed"});
      }
      w->queue.clear();
    }
    std::deque<Message> leftover;
    {
      std::lock_guard<std::mutex> lk(writer_m_);
      leftover.swap(writer_queue_);
    }
    for (Message& m : leftover) {
      resolve_slot(m.id, {ChannelResponse::Status::failed, "", "closed"});
    }
  }
}

bool Channel::worker_healthy(int index) const {
  std::lock_guard<std::mutex> lk(ctrl_m_);
  return workers_[index]->healthy;
}

void Channel::set_worker_healthy(int index, bool healthy) {
  {
    std::lock_guard<std::mutex> lk(ctrl_m_);
    workers_[index]->healthy = healthy;
    if (healthy) workers_[index]->consecutive_failures = 0;
  }
  ctrl_cv_.notify_all();
}

int Channel::worker_in_flight(int index) const {
  std::lock_guard<std::mutex> lk(ctrl_m_);
  return workers_[index]->in_flight;
}

std::uint64_t Channel::issued_count() const {
  return next_lo_.load(std::memory_order_relaxed) - 1;
}

}  // namespace socsim
