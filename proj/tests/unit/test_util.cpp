#include <cmath>
#include <set>
#include <sstream>

#include "doctest.h"
#include "util/csv.hpp"
#include "util/hash.hpp"
#include "util/rng.hpp"
#include "util/stats.hpp"
#include "util/text.hpp"

using namespace socsim;

TEST_CASE("fnv1a64 reference vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
  CHECK(to_hex(0xcbf29ce484222325ULL) == "cbf29ce484222325");
}

TEST_CASE("rng determinism and stream independence") {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  bool differs = false;
  Rng a2(42);
  for (int i = 0; i < 100; ++i)
    if (a2.next_u64() != c.next_u64()) differs = true;
  CHECK(differs);
  CHECK(mix_seed(1, 2) != mix_seed(1, 3));
  CHECK(mix_seed(1, 2) != mix_seed(2, 2));
  CHECK(mix_seed(1, 2) == mix_seed(1, 2));
}

TEST_CASE("rng bounded draws stay in range and cover values") {
  Rng r(7);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    std::uint64_t v = r.below(10);
    CHECK(v < 10);
    seen.insert(v);
  }
  CHECK(seen.size() == 10);
}

TEST_CASE("rng u01 in range, bernoulli frequency near p") {
  Rng r(11);
  int hits = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    double u = r.next_u01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    if (u < 0.3) ++hits;
  }
  double freq = static_cast<double>(hits) / n;
  CHECK(std::fabs(freq - 0.3) < 0.01);
}

TEST_CASE("rng sample draws distinct elements from the pool") {
  Rng r(5);
  std::vector<int> pool;
  for (int i = 0; i < 50; ++i) pool.push_back(i);
  auto got = r.sample(std::span<const int>(pool), 10);
  CHECK(got.size() == 10);
  std::set<int> uniq(got.begin(), got.end());
  CHECK(uniq.size() == 10);
  for (int v : got) CHECK(v < 50);

  auto all = r.sample(std::span<const int>(pool), 60);
  CHECK(all.size() == 50);
}

TEST_CASE("text helpers") {
  CHECK(to_lower_ascii("MiXeD 123!") == "mixed 123!");
  CHECK(contains_ci("Hello World", "world"));
  CHECK(contains_ci("Hello World", ""));
  CHECK_FALSE(contains_ci("short", "longer needle"));
  CHECK(tokenize("The cat, the HAT!") ==
        std::vector<std::string>{"the", "cat", "the", "hat"});
  CHECK(truncate("abcdef", 4) == "abcd...");
  CHECK(truncate("abc", 4) == "abc");
  CHECK(format_double(3.0) == "3");
  CHECK(format_double(-2.5) == "-2.5");
  CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("csv escape and round trip") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");

  std::vector<std::vector<std::string>> rows = {
      {"id", "text"},
      {"1", "comma, inside"},
      {"2", "quote \" and\nnewline"},
      {"3", ""},
  };
  std::string doc;
  for (const auto& row : rows) write_csv_row(doc, row);
  auto parsed = parse_csv(doc);
  CHECK(parsed == rows);
}

TEST_CASE("csv parse handles crlf and final line without newline") {
  auto rows = parse_csv("a,b\r\nc,d");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"a", "b"});
  CHECK(rows[1] == std::vector<std::string>{"c", "d"});
}

TEST_CASE("mean stddev and normal ci") {
  std::vector<double> xs = {1, 2, 3, 4, 5};
  CHECK(mean_of(xs) == doctest::Approx(3.0));
  CHECK(sample_stddev(xs) == doctest::Approx(std::sqrt(2.5)));
  auto ci = normal_ci(xs);
  double half = 1.959963984540054 * std::sqrt(2.5) / std::sqrt(5.0);
  CHECK(ci.mean == doctest::Approx(3.0));
  CHECK(ci.lo == doctest::Approx(3.0 - half));
  CHECK(ci.hi == doctest::Approx(3.0 + half));

  std::vector<double> one = {7.0};
  auto ci1 = normal_ci(one);
  CHECK(ci1.lo == 7.0);
  CHECK(ci1.hi == 7.0);
}
