#include <numeric>

#include "doctest.h"
#include "oracles.hpp"
#include "zaremba/cf.hpp"

using namespace zaremba;

TEST_CASE("cf_expand small fractions") {
  CHECK(cf_expand(Fraction(1, 7)) == CFWord{7});
  CHECK(cf_expand(Fraction(5, 7)) == CFWord(oracle::euclid(5, 7)));
  CHECK(cf_expand(Fraction(5, 7)) == CFWord{1, 2, 2});
  CHECK(cf_expand(Fraction(2, 5)) == CFWord{2, 2});
  CHECK(cf_expand(Fraction(2, 5)).str() == "[0;2,2]");
  CHECK(CFWord().str() == "[0]");
}

TEST_CASE("cf_expand rejects bad input") {
  CHECK_THROWS_AS(cf_expand(BigInt(0), BigInt(5)), std::invalid_argument);
  CHECK_THROWS_AS(cf_expand(BigInt(5), BigInt(5)), std::invalid_argument);
  CHECK_THROWS_AS(cf_expand(BigInt(7), BigInt(5)), std::invalid_argument);
  CHECK_THROWS_AS(cf_expand(BigInt(2), BigInt(6)), std::invalid_argument);
  CHECK_THROWS_AS(Fraction(2, 4), std::invalid_argument);
  CHECK_THROWS_AS(CFWord({1, 0, 2}), std::invalid_argument);
}

TEST_CASE("cf_eval") {
  CHECK(cf_eval(CFWord{2, 2}) == Fraction(2, 5));
  CHECK(cf_eval(CFWord{13}) == Fraction(1, 13));
  CHECK(cf_eval(CFWord()) == Fraction(0, 1));
  const auto sv = cf_eval_signed(CFWord{2, -2});
  CHECK(sv.magnitude == Fraction(2, 3));
  CHECK(sv.sign == 1);
  // [0; 1, -1] has tail 1 + 1/(-1) = 0.
  CHECK_THROWS_AS(cf_eval_signed(CFWord{1, -1}), std::domain_error);
}

TEST_CASE("continuant base cases and recursion") {
  CHECK(continuant({}) == 1);
  CHECK(continuant({5}) == 5);
  CHECK(continuant({2, 3}) == 7);
  CHECK(continuant({3, 2}) == 7);
  CHECK(continuant({1, 1, 1}) == 3);
  CHECK(continuant({2, 1, 1, 1}) == oracle::continuant({2, 1, 1, 1}));
}

TEST_CASE("convergents") {
  const auto t = convergents(CFWord{1, 2, 2});
  REQUIRE(t.size() == 4);
  CHECK(t.q(0) == 1);
  CHECK(t.q(1) == 1);
  CHECK(t.q(2) == 3);
  CHECK(t.q(3) == 7);
  const auto t2 = convergents(CFWord{2});
  CHECK(t2.q(1) == 2);
  const auto t3 = convergents(CFWord{2, 2});
  CHECK(t3.p(2) * t3.q(1) - t3.p(1) * t3.q(2) == -1);
  CHECK_THROWS_AS(convergents(CFWord{2, 1}), std::invalid_argument);
}

TEST_CASE("cf_reverse") {
  {
    const auto [w, f] = cf_reverse(CFWord{2, 2});
    CHECK(w == CFWord{2, 2});
    CHECK(f == Fraction(2, 5));
    CHECK((2 * 2) % 5 == 4);  // -1 mod 5 with s = 2
  }
  {
    const auto [w, f] = cf_reverse(CFWord{7});
    CHECK(w == CFWord{7});
    CHECK(f == Fraction(1, 7));
  }
  {
    const auto [w, f] = cf_reverse(CFWord{1, 2, 2});
    CHECK(w == CFWord{2, 3});
    CHECK(f == Fraction(3, 7));
    CHECK((5 * 3) % 7 == 1);
  }
}

TEST_CASE("normalize") {
  CHECK(normalize(CFWord{2, 1, 1}) == CFWord{2, 2});
  CHECK(normalize(CFWord{3}) == CFWord{3});
  CHECK(normalize(CFWord{1, 1}) == CFWord{2});
}

TEST_CASE("property: round trip and canonical form for q <= 5000") {
  std::int64_t checked = 0;
  for (std::int64_t q = 2; q <= 5000; q += (q < 400 ? 1 : 7)) {
    for (std::int64_t a = 1; a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      const CFWord w = cf_expand(Fraction(a, q));
      REQUIRE(w.canonical());
      REQUIRE(cf_eval(w) == Fraction(a, q));
      REQUIRE(w.quotients() == oracle::euclid(a, q));
      ++checked;
    }
  }
  CHECK(checked > 100000);
}

TEST_CASE("property: mirror symmetry and supermultiplicativity") {
  std::vector<std::int64_t> w;
  std::int64_t words = 0;
  auto walk = [&](auto&& self) -> void {
    if (!w.empty()) {
      ++words;
      std::vector<std::int64_t> r(w.rbegin(), w.rend());
      REQUIRE(continuant(w) == continuant(r));
      REQUIRE(continuant(w) == oracle::continuant(w));
      for (std::size_t cut = 1; cut < w.size(); ++cut) {
        std::vector<std::int64_t> u(w.begin(), w.begin() + static_cast<long>(cut));
        std::vector<std::int64_t> v(w.begin() + static_cast<long>(cut), w.end());
        REQUIRE(continuant(w) > continuant(u) * continuant(v));
      }
    }
    if (w.size() == 8) return;
    for (std::int64_t c = 1; c <= 4; ++c) {
      if (w.size() >= 6 && c > 2) break;  // keep the tree small at depth 7-8
      w.push_back(c);
      self(self);
      w.pop_back();
    }
  };
  walk(walk);
  CHECK(words > 10000);
}

TEST_CASE("property: reversal law a q_{s-1} = (-1)^{s-1} mod q for q <= 2000") {
  for (std::int64_t q = 2; q <= 2000; ++q) {
    for (std::int64_t a = 1; a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      const CFWord w = cf_expand(Fraction(a, q));
      const auto [rw, rv] = cf_reverse(w);
      REQUIRE(rv.den() == q);
      const BigInt lhs = BigInt(a) * rv.num() % q;
      const BigInt rhs = (w.size() % 2 == 1) ? BigInt(1 % q) : BigInt(q - 1);
      REQUIRE(lhs == rhs);
    }
  }
}

TEST_CASE("property: normalization keeps value and drops one entry") {
  for (std::int64_t q = 3; q <= 300; ++q) {
    for (std::int64_t a = 1; a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      auto raw = oracle::euclid(a, q);
      raw.back() -= 1;
      raw.push_back(1);
      const CFWord n = normalize(CFWord(raw));
      REQUIRE(n.size() + 1 == raw.size());
      REQUIRE(cf_eval(n) == Fraction(a, q));
      REQUIRE(oracle::nested_value(raw) == mpq_class(a, q));
    }
  }
}

TEST_CASE("machine-word helpers agree with the big-integer path") {
  for (std::uint64_t q = 2; q <= 400; ++q) {
    for (std::uint64_t a = 1; a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      const auto w = expand_u64(a, q);
      const auto e = oracle::euclid(static_cast<std::int64_t>(a), static_cast<std::int64_t>(q));
      REQUIRE(w.size() == e.size());
      REQUIRE(max_partial_quotient(a, q) ==
              static_cast<std::uint64_t>(oracle::max_quotient(static_cast<std::int64_t>(a),
                                                               static_cast<std::int64_t>(q))));
    }
  }
}
