#include <gmpxx.h>

#include "doctest.h"
#include "oracles.hpp"
#include "zaremba/errors.hpp"
#include "zaremba/folding.hpp"

using namespace zaremba;

namespace {

mpz_class power(std::int64_t base, std::int64_t n) {
  mpz_class r = 1;
  for (std::int64_t i = 0; i < n; ++i) r *= static_cast<long>(base);
  return r;
}

}  // namespace

TEST_CASE("fold_step examples") {
  const FoldWord w({2});
  const auto a = fold_step(w, 1);
  CHECK(a.word() == std::vector<std::int64_t>{2, 1, 1, 1});
  CHECK(a.value() == 8);
  CHECK(oracle::continuant(a.word()) == 8);
  const auto b = fold_step(w, 3);
  CHECK(b.word() == std::vector<std::int64_t>{2, 3, 1, 1});
  CHECK(b.value() == 16);
  CHECK(b.max_entry() == 3);
}

TEST_CASE("fold_step argument checks") {
  CHECK_THROWS_AS(fold_step(FoldWord({2}), 0), std::invalid_argument);
  CHECK_THROWS_AS(fold_step(FoldWord({2, 1}), 1), std::invalid_argument);
  CHECK_THROWS_AS(FoldWord({2, 0}), std::invalid_argument);
}

TEST_CASE("merge_tail") {
  const auto m = merge_tail(FoldWord({2, 1, 1, 1}));
  CHECK(m.word() == std::vector<std::int64_t>{2, 1, 2});
  CHECK(m.value() == 8);
  CHECK(merge_tail(FoldWord({3, 4})).word() == std::vector<std::int64_t>{3, 4});
}

TEST_CASE("property: fold identity, length and max entry on many words") {
  std::vector<std::int64_t> w;
  std::int64_t checked = 0;
  auto walk = [&](auto&& self) -> void {
    if (!w.empty() && w.back() >= 2) {
      for (std::int64_t X : {1, 2, 7}) {
        const FoldWord in(w);
        const auto out = fold_step(in, X);
        REQUIRE(out.word().size() == 2 * w.size() + 2);
        REQUIRE(oracle::continuant(out.word()) == in.value() * in.value() * (X + 1));
        REQUIRE(out.max_entry() == std::max(in.max_entry(), X));
        REQUIRE(out.first() == w.front());
        ++checked;
      }
    }
    if (w.size() == 5) return;
    for (std::int64_t c = 1; c <= 3; ++c) {
      w.push_back(c);
      self(self);
      w.pop_back();
    }
  };
  walk(walk);
  CHECK(checked > 500);
}

TEST_CASE("fold_construct examples") {
  const auto c3 = fold_construct(2, 3);
  CHECK(c3.value == Fraction(3, 8));
  CHECK(c3.raw_word == std::vector<std::int64_t>{2, 1, 1, 1});
  CHECK(oracle::nested_value(c3.raw_word) == mpq_class(3, 8));
  CHECK(c3.word.max_quotient() <= 3);

  const auto c1 = fold_construct(2, 1);
  CHECK(c1.value == Fraction(1, 2));
  CHECK(c1.word == CFWord{2});

  const auto c9 = fold_construct(3, 2);
  CHECK(c9.value.den() == 9);
  CHECK(gcd(c9.value.num(), mpz_class(9)) == 1);
  CHECK(c9.word.max_quotient() <= 8);
}

TEST_CASE("fold_schedule") {
  const auto s = fold_schedule(2, 11);  // 11 <- 5 <- 2
  REQUIRE(s.size() == 3);
  CHECK(s[0] == std::pair<std::int64_t, std::int64_t>{2, 0});
  CHECK(s[1] == std::pair<std::int64_t, std::int64_t>{5, 1});
  CHECK(s[2] == std::pair<std::int64_t, std::int64_t>{11, 1});
  const auto e = fold_schedule(3, 14);  // 14 <- 6 <- 2
  REQUIRE(e.size() == 3);
  CHECK(e[1] == std::pair<std::int64_t, std::int64_t>{6, 8});
  CHECK(e[2] == std::pair<std::int64_t, std::int64_t>{14, 8});
}

TEST_CASE("fold_base_word") {
  CHECK_FALSE(fold_base_word(2, 2, true).has_value());
  const auto w = fold_base_word(2, 2, false);
  REQUIRE(w.has_value());
  CHECK(oracle::continuant(*w) == 4);
  CHECK_THROWS_AS(fold_base_word(2, 25, false), BudgetExceeded);
}

TEST_CASE("property: constructions for bases 2, 3, 5, 10 up to n = 40") {
  for (std::int64_t base : {2, 3, 5, 10}) {
    for (std::int64_t n = 1; n <= 40; ++n) {
      const auto c = fold_construct(base, n);
      const mpz_class den = power(base, n);
      REQUIRE(c.value.den() == den);
      REQUIRE(gcd(c.value.num(), den) == 1);
      REQUIRE(c.word.max_quotient() <= base * base - 1);
      for (auto x : c.raw_word) REQUIRE(x <= base * base - 1);
      REQUIRE(oracle::nested_value(c.raw_word) == mpq_class(c.value.num(), c.value.den()));
      REQUIRE(cf_expand(c.value) == c.word);
      const auto audit = fold_audit(c);
      REQUIRE(audit.ok());
      for (const auto& link : c.chain) {
        REQUIRE(oracle::continuant(link.raw_word) == power(base, link.exponent));
      }
    }
  }
}
