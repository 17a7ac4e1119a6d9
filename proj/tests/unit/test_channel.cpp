#include "doctest.h"

#include <atomic>
#include <chrono>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "channel/channel.hpp"

using namespace socsim;
using namespace std::chrono_literals;

namespace {

Handler echo_handler() {
  return [](RequestKind, const std::string& p, std::string* out, std::string*) {
    *out = "echo:" + p;
    return true;
  };
}

ChannelConfig echo_config(int workers = 1, int max_concurrent = 1) {
  ChannelConfig cfg;
  for (int i = 0; i < workers; ++i) {
    cfg.workers.push_back({echo_handler(), max_concurrent, "w" + std::to_string(i)});
  }
  return cfg;
}

}  // namespace

TEST_CASE("echo round trip correlates payload with id") {
  Channel ch(echo_config());
  auto a = ch.send_request(RequestKind::llm_decide, "alpha");
  auto b = ch.send_request(RequestKind::llm_decide, "beta");
  REQUIRE(a.has_value());
  REQUIRE(b.has_value());
  CHECK_FALSE(*a == *b);
  auto rb = ch.await_response(*b, 5000ms);
  auto ra = ch.await_response(*a, 5000ms);
  CHECK(ra.ok());
  CHECK(rb.ok());
  CHECK(ra.payload == "echo:alpha");
  CHECK(rb.payload == "echo:beta");
}

TEST_CASE("a response resolved before the await returns immediately") {
  Channel ch(echo_config());
  auto id = ch.send_request(RequestKind::llm_decide, "x");
  REQUIRE(id.has_value());
  std::this_thread::sleep_for(50ms);
  auto r = ch.await_response(*id, 1ms);
  CHECK(r.ok());
  CHECK(r.payload == "echo:x");
}

TEST_CASE("interleaved request and await pairs all match") {
  Channel ch(echo_config(1, 2));
  for (int i = 0; i < 500; ++i) {
    auto id = ch.send_request(RequestKind::llm_decide, std::to_string(i));
    REQUIRE(id.has_value());
    auto r = ch.await_response(*id, 5000ms);
    REQUIRE(r.ok());
    CHECK(r.payload == "echo:" + std::to_string(i));
  }
  // Batched: all submissions first, then all awaits.
  std::vector<RequestId> ids;
  for (int i = 0; i < 500; ++i) {
    ids.push_back(*ch.send_request(RequestKind::llm_decide, std::to_string(i)));
  }
  for (int i = 0; i < 500; ++i) {
    auto r = ch.await_response(ids[i], 5000ms);
    REQUIRE(r.ok());
    CHECK(r.payload == "echo:" + std::to_string(i));
  }
  CHECK(ch.worker_in_flight(0) == 0);
}

TEST_CASE("concurrent producers get distinct ids and matching payloads") {
  Channel ch(echo_config(2, 2));
  std::mutex m;
  std::vector<std::uint64_t> los;
  std::atomic<int> failures{0};
  auto producer = [&](int base) {
    for (int i = 0; i < 500; ++i) {
      const std::string body = std::to_string(base + i);
      auto id = ch.send_request(RequestKind::llm_decide, body);
      if (!id) {
        ++failures;
        continue;
      }
      {
        std::lock_guard<std::mutex> lk(m);
        los.push_back(id->lo);
      }
      auto r = ch.await_response(*id, 5000ms);
      if (!r.ok() || r.payload != "echo:" + body) ++failures;
    }
  };
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) threads.emplace_back(producer, t * 1000000);
  for (auto& t : threads) t.join();
  CHECK(failures.load() == 0);
  REQUIRE(los.size() == 2000);
  std::sort(los.begin(), los.end());
  CHECK(std::adjacent_find(los.begin(), los.end()) == los.end());
  CHECK(ch.issued_count() == 2000);
}

TEST_CASE("timeout leaves the slot; delivery consumes it") {
  ChannelConfig cfg;
  cfg.workers.push_back(
      {[](RequestKind, const std::string& p, std::string* out, std::string*) {
         std::this_thread::sleep_for(150ms);
         *out = "late:" + p;
         return true;
       },
       1, "slow"});
  Channel ch(std::move(cfg));
  auto id = ch.send_request(RequestKind::llm_decide, "z");
  REQUIRE(id.has_value());
  auto r1 = ch.await_response(*id, 10ms);
  CHECK(r1.status == ChannelResponse::Status::timeout);
  auto r2 = ch.await_response(*id, 5000ms);
  CHECK(r2.ok());
  CHECK(r2.payload == "late:z");
  CHECK_THROWS_AS(ch.await_response(*id, 1ms), std::invalid_argument);
}

TEST_CASE("awaiting an id that was never issued is a usage error") {
  Channel ch(echo_config());
  RequestId bogus{123, 456};
  CHECK_THROWS_AS(ch.await_response(bogus, 1ms), std::invalid_argument);
}

TEST_CASE("submissions after shutdown are refused") {
  Channel ch(echo_config());
  auto ok_id = ch.send_request(RequestKind::llm_decide, "pre");
  REQUIRE(ok_id.has_value());
  CHECK(ch.await_response(*ok_id, 5000ms).ok());
  ch.shutdown();
  CHECK_FALSE(ch.send_request(RequestKind::llm_decide, "post").has_value());
  CHECK_FALSE(ch.send_request(RequestKind::env_action, "post").has_value());
}

TEST_CASE("two even workers split the load about evenly") {
  std::atomic<int> c0{0};
  std::atomic<int> c1{0};
  ChannelConfig cfg;
  auto counting = [](std::atomic<int>& c) {
    return [&c](RequestKind, const std::string& p, std::string* out, std::string*) {
      ++c;
      std::this_thread::sleep_for(1ms);
      *out = p;
      return true;
    };
  };
  cfg.workers.push_back({counting(c0), 1, "w0"});
  cfg.workers.push_back({counting(c1), 1, "w1"});
  Channel ch(std::move(cfg));
  std::vector<RequestId> ids;
  for (int i = 0; i < 100; ++i) {
    ids.push_back(*ch.send_request(RequestKind::llm_decide, "p"));
  }
  for (const RequestId& id : ids) {
    CHECK(ch.await_response(id, 10000ms).ok());
  }
  CHECK(c0.load() + c1.load() == 100);
  CHECK(c0.load() >= 45);
  CHECK(c0.load() <= 55);
  CHECK(ch.worker_in_flight(0) == 0);
  CHECK(ch.worker_in_flight(1) == 0);
}

TEST_CASE("a dead worker with a healthy peer loses nothing") {
  std::atomic<bool> dead{true};
  ChannelConfig cfg;
  cfg.workers.push_back(
      {[&dead](RequestKind, const std::string& p, std::string* out,
               std::string* err) {
         if (dead.load()) {
           *err = "connection refused";
           return false;
         }
         *out = "echo:" + p;
         return true;
       },
       1, "dying"});
  cfg.workers.push_back({echo_handler(), 1, "peer"});
  cfg.retry_bound = 3;
  Channel ch(std::move(cfg));

  std::vector<RequestId> ids;
  std::vector<std::string> want;
  for (int i = 0; i < 300; ++i) {
    want.push_back(std::to_string(i));
    ids.push_back(*ch.send_request(RequestKind::llm_decide, want.back()));
  }
  for (std::size_t i = 0; i < ids.size(); ++i) {
    auto r = ch.await_response(ids[i], 10000ms);
    REQUIRE(r.ok());
    CHECK(r.payload == "echo:" + want[i]);
  }
  CHECK_FALSE(ch.worker_healthy(0));
  CHECK(ch.worker_healthy(1));
}

TEST_CASE("with no healthy worker requests fail instead of hanging") {
  ChannelConfig cfg;
  cfg.workers.push_back(
      {[](RequestKind, const std::string&, std::string*, std::string* err) {
         *err = "boom";
         return false;
       },
       1, "hopeless"});
  cfg.retry_bound = 1;
  Channel ch(std::move(cfg));
  int no_worker = 0;
  for (int i = 0; i < 5; ++i) {
    auto id = ch.send_request(RequestKind::llm_decide, "x");
    auto r = ch.await_response(*id, 10000ms);
    CHECK_FALSE(r.ok());
    CHECK(r.status == ChannelResponse::Status::failed);
    if (r.error == "no_worker") ++no_worker;
  }
  CHECK_FALSE(ch.worker_healthy(0));
  CHECK(no_worker >= 1);

  Channel empty(ChannelConfig{});
  auto id = empty.send_request(RequestKind::llm_decide, "x");
  REQUIRE(id.has_value());
  auto r = empty.await_response(*id, 10000ms);
  CHECK_FALSE(r.ok());
  CHECK(r.error == "no_worker");
}

TEST_CASE("env_action messages reach the writer in submission order") {
  std::mutex m;
  std::vector<std::string> seen;
  ChannelConfig cfg = echo_config(1);
  cfg.writer = [&](RequestKind kind, const std::string& p, std::string* out,
                   std::string*) {
    CHECK(kind == RequestKind::env_action);
    {
      std::lock_guard<std::mutex> lk(m);
      seen.push_back(p);
    }
    *out = "done:" + p;
    return true;
  };
  Channel ch(std::move(cfg));
  std::vector<RequestId> ids;
  for (int i = 0; i < 500; ++i) {
    ids.push_back(*ch.send_request(RequestKind::env_action, std::to_string(i)));
  }
  for (int i = 0; i < 500; ++i) {
    auto r = ch.await_response(ids[i], 10000ms);
    REQUIRE(r.ok());
    CHECK(r.payload == "done:" + std::to_string(i));
  }
  std::lock_guard<std::mutex> lk(m);
  REQUIRE(seen.size() == 500);
  for (int i = 0; i < 500; ++i) CHECK(seen[i] == std::to_string(i));
}

TEST_CASE("env_action without a writer fails cleanly") {
  Channel ch(echo_config(1));
  auto id = ch.send_request(RequestKind::env_action, "x");
  REQUIRE(id.has_value());
  auto r = ch.await_response(*id, 1000ms);
  CHECK_FALSE(r.ok());
  CHECK(r.error == "no_writer");
}

TEST_CASE("mixed lanes under concurrency resolve exactly once each") {
  ChannelConfig cfg = echo_config(2, 2);
  cfg.writer = [](RequestKind, const std::string& p, std::string* out,
                  std::string*) {
    *out = "w:" + p;
    return true;
  };
  Channel ch(std::move(cfg));
  std::atomic<int> failures{0};
  auto producer = [&](int t) {
    for (int i = 0; i < 400; ++i) {
      const bool env = (i % 2) == 0;
      const std::string body = std::to_string(t) + ":" + std::to_string(i);
      auto id = ch.send_request(
          env ? RequestKind::env_action : RequestKind::llm_decide, body);
      if (!id) {
        ++failures;
        continue;
      }
      auto r = ch.await_response(*id, 10000ms);
      const std::string want = (env ? "w:" : "echo:") + body;
      if (!r.ok() || r.payload != want) ++failures;
      // The slot was consumed, so a second await must refuse the id.
      try {
        ch.await_response(*id, 1ms);
        ++failures;
      } catch (const std::invalid_argument&) {
      }
    }
  };
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) threads.emplace_back(producer, t);
  for (auto& t : threads) t.join();
  CHECK(failures.load() == 0);
  CHECK(ch.issued_count() == 1600);
}

TEST_CASE("echo throughput stays well above the floor") {
  Channel ch(echo_config(1, 2));
  const int n = 10000;
  const auto start = std::chrono::steady_clock::now();
  std::vector<RequestId> ids;
  ids.reserve(n);
  for (int i = 0; i < n; ++i) {
    ids.push_back(*ch.send_request(RequestKind::llm_decide, "t"));
  }
  for (const RequestId& id : ids) {
    REQUIRE(ch.await_response(id, 10000ms).ok());
  }
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  MESSAGE("10k echo round trips in ", ms, " ms");
  CHECK(ms < 2000);  // 5000/s floor
}
