#include <cmath>
#include <numeric>

#include "doctest.h"
#include "oracles.hpp"
#include "zaremba/errors.hpp"
#include "zaremba/korobov.hpp"
#include "zaremba/number_theory.hpp"

using namespace zaremba;

TEST_CASE("min_hyperbola_product examples") {
  const auto w = min_hyperbola_product(5, 7);
  CHECK(w.product == oracle::min_product(5, 7));
  CHECK(w.product == 2);  // x = 1, y = -2
  CHECK(w.x == 1);
  CHECK(w.y == -2);

  const auto one = min_hyperbola_product(1, 7);
  CHECK(one.x == 1);
  CHECK(one.y == 1);
  CHECK(one.product == 1);

  const auto neg = min_hyperbola_product(6, 7);
  CHECK(neg.x == 1);
  CHECK(neg.y == -1);
  CHECK(neg.product == 1);

  CHECK_THROWS_AS(min_hyperbola_product(2, 8), std::invalid_argument);
}

TEST_CASE("witness invariants and oracle agreement for q <= 300") {
  for (std::int64_t q = 2; q <= 300; ++q) {
    for (std::int64_t a = 1; a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      const auto w = min_hyperbola_product(a, q);
      REQUIRE(w.x >= 1);
      REQUIRE(w.x < q);
      REQUIRE(std::llabs(w.y) >= 1);
      REQUIRE(std::llabs(w.y) < q);
      REQUIRE(mod_floor(a * w.x - w.y, q) == 0);
      REQUIRE(w.product == w.x * std::llabs(w.y));
      REQUIRE(w.product == oracle::min_product(a, q));
    }
  }
}

TEST_CASE("property: symmetry a -> q - a") {
  for (std::int64_t q = 3; q <= 400; ++q) {
    for (std::int64_t a = 1; a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      REQUIRE(min_hyperbola_product(a, q).product == min_hyperbola_product(q - a, q).product);
    }
  }
}

TEST_CASE("korobov_forward") {
  CHECK_FALSE(korobov_forward(5, 7, 3));  // min product 2 < 7/3
  CHECK(korobov_forward(5, 7, 4));        // 2 >= 7/4
  CHECK_FALSE(korobov_forward(1, 7, 6));
  const bool f = korobov_forward(3, 8, 4);
  CHECK(f == (oracle::min_product(3, 8) * 4 >= 8));
}

TEST_CASE("korobov_backward") {
  const auto b = korobov_backward(5, 7);
  CHECK(b.M == 2);
  CHECK(b.min_product == 2);
  CHECK(b.ratio <= 4.0);
  const auto t = korobov_backward(1, 50);
  CHECK(t.M == 50);
  CHECK(t.min_product == 1);
  CHECK(t.ratio == doctest::Approx(1.0));
}

TEST_CASE("property: both directions of the criterion on the grid q <= 1000") {
  const auto s = sweep_hyperbola_criterion(1000);
  CHECK(s.forward_failures == 0);
  CHECK(s.backward_failures == 0);
  CHECK(s.worst_ratio <= 4.0);
  CHECK(s.worst_ratio > 1.0);
  std::int64_t pairs = 0;
  for (std::int64_t q = 2; q <= 1000; ++q) {
    for (std::int64_t a = 1; a < q; ++a) pairs += std::gcd(a, q) == 1;
  }
  CHECK(s.pairs == pairs);
}

TEST_CASE("property: oracle form of the criterion for q <= 150") {
  for (std::int64_t q = 2; q <= 150; ++q) {
    for (std::int64_t a = 1; a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      const std::int64_t P = oracle::min_product(a, q);
      const std::int64_t M = oracle::max_quotient(a, q);
      REQUIRE(4 * M * P >= q);
      for (std::int64_t m = 1; m <= q; ++m) {
        if (P * m >= q) REQUIRE(M <= m);
      }
    }
  }
}

TEST_CASE("search_exhaustive examples") {
  const auto r7 = search_exhaustive(7);
  std::int64_t best_a = 0, best_m = 1 << 30;
  for (std::int64_t a = 1; a < 7; ++a) {
    const auto m = oracle::max_quotient(a, 7);
    if (m < best_m) {
      best_m = m;
      best_a = a;
    }
  }
  CHECK(r7.a == best_a);
  CHECK(r7.m_min == best_m);
  CHECK(r7.m_min == 2);

  const auto r2 = search_exhaustive(2);
  CHECK(r2.a == 1);
  CHECK(r2.m_min == 2);
  CHECK(search_exhaustive(5).m_min == 2);
}

TEST_CASE("property: early exit equals the reference scan for q <= 500") {
  for (std::int64_t q = 2; q <= 500; ++q) {
    const auto e = search_exhaustive(q);
    const auto r = search_exhaustive_reference(q);
    REQUIRE(e.a == r.a);
    REQUIRE(e.m_min == r.m_min);
    REQUIRE(std::gcd(e.a, q) == 1);
    REQUIRE(oracle::max_quotient(e.a, q) == e.m_min);
  }
}

TEST_CASE("guided search") {
  CHECK_THROWS_AS(search_guided(100, 5), std::invalid_argument);
  CHECK_FALSE(search_guided(3, 2).has_value());

  if (const auto r = search_guided(101, 5)) {
    CHECK(oracle::max_quotient(r->a, 101) <= 20);
    CHECK(search_exhaustive(101).m_min <= r->m_min);
  }
}

TEST_CASE("property: guided results obey the 4M bound") {
  int successes = 0;
  for (std::int64_t q = 1009; q < 6000; q += 1) {
    if (!is_prime(static_cast<std::uint64_t>(q))) continue;
    for (std::int64_t M = 2; M <= 6; ++M) {
      const auto g = search_guided_detailed(q, M);
      REQUIRE(g.t == static_cast<std::int64_t>(std::floor(std::sqrt(double(q) / (4.0 * M)))));
      if (!g.result) continue;
      ++successes;
      REQUIRE(oracle::max_quotient(g.result->a, q) <= 4 * M);
      REQUIRE(g.result->m_min == oracle::max_quotient(g.result->a, q));
      REQUIRE(g.result->a * g.partner % q == 1);
      REQUIRE(oracle::in_ZM(g.result->a, q, M, g.t));
      REQUIRE(oracle::in_ZM(g.partner, q, M, g.t));
      REQUIRE(search_exhaustive(q).m_min <= g.result->m_min);
    }
  }
  CHECK(successes > 100);
}

TEST_CASE("bound_table") {
  const auto rows = bound_table(2, 10000, QFilter::primes);
  CHECK(rows.size() == primes_up_to(10000).size());
  CHECK(rows.front().q == 2);
  CHECK(rows.front().m_min == 2);
  for (const auto& r : rows) REQUIRE(r.m_min <= 5);
  for (std::size_t i = 1; i < rows.size(); ++i) REQUIRE(rows[i - 1].q < rows[i].q);

  const auto all = bound_table(2, 30, QFilter::all);
  CHECK(all.size() == 29);
  const auto sf = bound_table(2, 30, QFilter::square_free);
  for (const auto& r : sf) REQUIRE(is_square_free(static_cast<std::uint64_t>(r.q)));
  const auto skipped = bound_table(2, 30, QFilter::all, 1, {4, 9});
  CHECK(skipped.size() == 27);
}

TEST_CASE("ratios and slope") {
  SearchResult r{1024, 1, 5, Strategy::exhaustive, 0};
  CHECK(korobov_ratio(r) == doctest::Approx(0.5));
  CHECK(log_log_ratio(r) == doctest::Approx(5.0 * std::log2(10.0) / 10.0));
  CHECK(ols_slope({1, 2, 3, 4}, {3, 5, 7, 9}) == doctest::Approx(2.0));
}
