#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "zaremba/errors.hpp"
#include "zaremba/number_theory.hpp"
#include "zaremba/rng.hpp"
#include "zaremba/sl2.hpp"

using namespace zaremba;

namespace {

GroupElement power(const GroupElement& g, std::int64_t k) {
  GroupElement r = identity(g.modulus);
  for (std::int64_t i = 0; i < k; ++i) r = r * g;
  return r;
}

std::vector<std::int64_t> random_subset(std::int64_t p, std::int64_t size, std::uint64_t stream) {
  StreamRng rng(123, stream);
  std::set<std::int64_t> s;
  while (static_cast<std::int64_t>(s.size()) < size) s.insert(rng.uniform(0, p - 1));
  return {s.begin(), s.end()};
}

}  // namespace

TEST_CASE("group element arithmetic") {
  const GroupElement g(1, 1, 0, 1, 7);
  CHECK(g.det() == 1);
  CHECK(g.trace() == 2);
  CHECK(power(g, 7).is_identity());
  CHECK((g * inverse(g)).is_identity());
  const GroupElement h(-1, 3, 9, 5, 7);
  CHECK(h.e == std::array<std::int64_t, 4>{6, 3, 2, 5});
  CHECK(GroupElement(2, 0, 0, 4, 7).key() != GroupElement(4, 0, 0, 2, 7).key());
}

TEST_CASE("generator families") {
  const auto G = generator_family(5, 101);
  REQUIRE(G.size() == 5);
  CHECK(G[0] == GroupElement(1, -2, 2, -3, 101));
  const GroupElement u(1, 2, 0, 1, 101), v(1, 0, 2, 1, 101);
  for (std::int64_t j = 1; j <= 5; ++j) {
    const auto expect = power(v, j) * power(inverse(u), j);
    REQUIRE(G[static_cast<std::size_t>(j - 1)] == expect);
    REQUIRE(G[static_cast<std::size_t>(j - 1)].det() == 1);
  }
  for (const auto& g : generator_family_det_minus(6, 13)) REQUIRE(g.det() == 12);
}

TEST_CASE("integer entry bound") {
  for (std::int64_t N = 1; N <= 30; ++N) {
    std::int64_t m = 0;
    for (std::int64_t j = 1; j <= N; ++j) {
      // v^j u^-j over Z, multiplied out by hand.
      const std::int64_t e[4] = {1, -2 * j, 2 * j, 1 - 4 * j * j};
      for (auto x : e) m = std::max<std::int64_t>(m, std::llabs(x));
    }
    REQUIRE(generator_entry_bound(N) == m);
    REQUIRE(m <= 5 * N * N);
  }
}

TEST_CASE("girth") {
  const auto g11 = girth(11, 2, 12);
  const auto g101 = girth(101, 2, 12);
  const auto g1009 = girth(1009, 2, 12);
  CHECK(g11.value >= 1);
  CHECK(g11.value <= g101.value);
  CHECK(g101.value <= g1009.value);
  CHECK_FALSE(g1009.exact);
  CHECK(g1009.str() == ">= 13");
  CHECK_THROWS_AS(girth(12, 2, 8), std::invalid_argument);
  const auto z = girth_over_integers(2, 8);
  CHECK_FALSE(z.exact);
  CHECK(z.value >= 9);
}

TEST_CASE("exact girth agrees with a direct cycle search at p = 3") {
  // Over F_3 the generator j = 1 equals (1 1 | 2 0), whose order is small.
  const auto g = girth(3, 1, 12);
  REQUIRE(g.exact);
  const GroupElement s = generator_family(1, 3)[0];
  std::int64_t order = 1;
  while (!power(s, order).is_identity()) ++order;
  CHECK(g.value == order);
}

TEST_CASE("freeness over the integers") {
  const auto f = distinct_words_over_integers(2, 6);
  CHECK(f.all_distinct());
  // Reduced words of length 1..6 over 4 letters.
  std::int64_t words = 0, layer = 4;
  for (int L = 1; L <= 6; ++L, layer *= 3) words += layer;
  CHECK(f.words == words + 1);  // plus the empty word
}

TEST_CASE("action count examples") {
  const auto c = action_count(5, {1}, {1}, 1);
  CHECK(c.count == 0);
  CHECK(c.main_term == doctest::Approx(0.2));
  CHECK(action_count_bruteforce(5, {1}, {1}, 1) == 0);
}

TEST_CASE("property: the det -1 action solves (a + 2j)(b + 2j) = 1") {
  const std::int64_t p = 101;
  const auto gs = generator_family_det_minus(10, p);
  for (std::int64_t j = 1; j <= 10; ++j) {
    const auto& g = gs[static_cast<std::size_t>(j - 1)];
    for (std::int64_t b = 0; b < p; ++b) {
      const std::int64_t den = mod_floor(g.c() * b + g.d(), p);
      if (den == 0) continue;
      const std::int64_t a = mod_floor((g.a() * b + g.b()) % p * modinv(den, p), p);
      REQUIRE(mod_floor((a + 2 * j) * (b + 2 * j), p) == 1);
    }
  }
}

TEST_CASE("property: action_count matches the triple loop and is symmetric") {
  for (std::uint64_t k = 0; k < 20; ++k) {
    const std::int64_t p = k % 2 == 0 ? 101 : 401;
    const auto A = random_subset(p, 30, 2 * k);
    const auto B = random_subset(p, 45, 2 * k + 1);
    const std::int64_t N = 1 + static_cast<std::int64_t>(k) * 3;
    const auto c = action_count(p, A, B, N);
    REQUIRE(c.count == oracle::triple_count(p, A, B, N));
    REQUIRE(c.count == action_count_bruteforce(p, A, B, N));
    REQUIRE(action_count(p, B, A, N).count == c.count);
    REQUIRE(c.deviation ==
            doctest::Approx(std::abs(double(c.count) - double(N) * 30 * 45 / double(p)) /
                            (std::sqrt(30.0 * 45.0) * double(N))));
  }
}

TEST_CASE("action experiment is independent of the worker count") {
  const auto a = action_experiment(101, 10, 20, 12, 8, 1);
  const auto b = action_experiment(101, 10, 20, 12, 8, 3);
  REQUIRE(a.counts.size() == 12);
  for (std::size_t i = 0; i < a.counts.size(); ++i) CHECK(a.counts[i].count == b.counts[i].count);
  CHECK(a.mean_deviation == b.mean_deviation);
}

TEST_CASE("walk statistics") {
  const auto w1 = walk_stats(11, 3, 1);
  CHECK(w1.total == 9);
  const auto id = std::find_if(w1.r_counts.begin(), w1.r_counts.end(),
                               [](const auto& kv) { return kv.first.is_identity(); });
  REQUIRE(id != w1.r_counts.end());
  CHECK(id->second == 3);
  CHECK(w1.group_order == 11 * (11 * 11 - 1));

  double prev = 2.0;
  for (std::int64_t m = 1; m <= 3; ++m) {
    const auto w = walk_stats(101, 4, m);
    std::uint64_t sum = 0, energy = 0;
    for (const auto& [g, r] : w.r_counts) {
      sum += r;
      energy += r * r;
    }
    CHECK(sum == w.total);
    CHECK(w.total == static_cast<std::uint64_t>(std::pow(4.0, 2.0 * double(m))));
    CHECK(energy == w.energy);
    CHECK(double(w.energy) >= w.cauchy_schwarz_floor);
    CHECK(w.energy_ratio < prev);
    CHECK(w.max_coset_mass_num <= w.max_coset_mass_den);
    CHECK(w.max_coset.mass >= 1);
    prev = w.energy_ratio;
  }
  CHECK_THROWS_AS(walk_stats(101, 16, 4), BudgetExceeded);
}

TEST_CASE("p-adic decomposition") {
  const auto id = padic_decompose(identity(27), 3, 3);
  CHECK(id.central);
  CHECK(id.r == 3);
  const auto d = padic_decompose(GroupElement(1, 1, 0, 1, 3), 3, 1);
  CHECK(d.half_trace == 1);
  CHECK(d.r == 0);
  CHECK(d.gprime == std::array<std::int64_t, 3>{0, 1, 0});
  CHECK_THROWS_AS(padic_decompose(identity(8), 2, 3), std::invalid_argument);
}

TEST_CASE("property: p-adic reconstruction on random elements") {
  for (auto [p, n] : {std::pair<std::int64_t, std::int64_t>{3, 3}, {5, 2}}) {
    std::int64_t m = 1;
    for (std::int64_t i = 0; i < n; ++i) m *= p;
    const auto& group = special_linear_group(m);
    for (std::uint64_t k = 0; k < 1000; ++k) {
      StreamRng rng(42, k);
      const auto& g = group[rng.below(group.size())];
      const auto d = padic_decompose(g, p, n);
      REQUIRE(d.reconstruct() == g);
      REQUIRE(d.trace_congruence());
      if (!d.central) {
        REQUIRE((d.gprime[0] % p != 0 || d.gprime[1] % p != 0 || d.gprime[2] % p != 0));
      }
    }
  }
}

TEST_CASE("special linear group orders") {
  CHECK(special_linear_group(3).size() == 24);
  CHECK(special_linear_group(9).size() == 648);
  CHECK(special_linear_group(5).size() == 120);
  CHECK_THROWS_AS(special_linear_group(256), std::invalid_argument);
}

TEST_CASE("stabilizer sizes") {
  const auto s = stab_sizes(GroupElement(1, 1, 0, 1, 3), 3, 1);
  CHECK(s.centralizer == 6);
  CHECK(s.centralizer_bound == 24);
  CHECK(s.within_bounds());
  std::uint64_t brute = 0;
  const GroupElement g(1, 1, 0, 1, 3);
  for (const auto& h : special_linear_group(3)) brute += (g * h == h * g);
  CHECK(brute == 6);

  const auto i = stab_sizes(identity(9), 3, 2);
  CHECK(i.r == 2);
  CHECK(i.centralizer == 648);
  CHECK(i.within_bounds());
}

TEST_CASE("stabilizer sweep over SL2(Z/9Z)") {
  const auto s = stab_sweep(3, 2);
  CHECK(s.group_order == 648);
  CHECK(s.elements_checked == 648);
  CHECK(s.violations == 0);
  CHECK(s.max_centralizer_ratio <= 1.0);
  CHECK(s.max_normalizer_ratio <= 1.0);
}
