#include "zaremba/folding.hpp"

#include <algorithm>
#include <stdexcept>

#include "zaremba/errors.hpp"
#include "zaremba/number_theory.hpp"

namespace zaremba {

namespace {

BigInt ipow(std::int64_t base, std::int64_t n) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(n));
  return r;
}

// Plain three-term recursion, kept apart from continuant() so audits do not
// reuse the code they check.
BigInt recompute_continuant(const std::vector<std::int64_t>& w) {
  BigInt a = 1, b = static_cast<long>(w.empty() ? 1 : w[0]);
  if (w.empty()) return 1;
  for (std::size_t i = 1; i < w.size(); ++i) {
    BigInt c = b * static_cast<long>(w[i]) + a;
    a.swap(b);
    b.swap(c);
  }
  return b;
}

}  // namespace

FoldWord::FoldWord(std::vector<std::int64_t> word) : word_(std::move(word)) {
  if (word_.empty()) throw std::invalid_argument("FoldWord: empty word");
  for (auto c : word_) {
    if (c < 1) throw std::invalid_argument("FoldWord: entries must be positive");
  }
  value_ = continuant(word_);
}

std::int64_t FoldWord::max_entry() const { return *std::max_element(word_.begin(), word_.end()); }

FoldWord fold_step(const FoldWord& w, std::int64_t X) {
  if (X <= 0) throw std::invalid_argument("fold_step: X must be positive");
  if (w.last() < 2) throw std::invalid_argument("fold_step: last entry must be >= 2");
  const auto& c = w.word();
  std::vector<std::int64_t> out;
  out.reserve(2 * c.size() + 2);
  out.insert(out.end(), c.begin(), c.end());
  out.push_back(X);
  out.push_back(1);
  out.push_back(c.back() - 1);
  for (std::size_t i = c.size() - 1; i-- > 0;) out.push_back(c[i]);
  // c_t - 1 >= 1 here, so FoldWord accepts the result.
  FoldWord folded(std::move(out));
  if (folded.value() != w.value() * w.value() * (X + 1)) {
    throw InvariantViolation("fold identity fails for word of length " +
                             std::to_string(c.size()) + " and X = " + std::to_string(X));
  }
  return folded;
}

FoldWord merge_tail(const FoldWord& w) {
  const auto& c = w.word();
  if (c.size() < 2 || c.back() != 1) return w;
  std::vector<std::int64_t> out(c.begin(), c.end() - 1);
  out.back() += 1;
  return FoldWord(std::move(out));
}

std::optional<std::vector<std::int64_t>> fold_base_word(std::int64_t base, std::int64_t n,
                                                        bool both_ends) {
  if (base < 2) throw std::invalid_argument("fold_base_word: base must be >= 2");
  if (n < 1) throw std::invalid_argument("fold_base_word: n must be >= 1");
  const BigInt big_q = ipow(base, n);
  if (big_q > (1L << 24)) throw BudgetExceeded("fold_base_word: base^n exceeds 2^24");
  const std::int64_t q = big_q.get_si();
  const auto bound = static_cast<std::uint64_t>(base * base - 1);
  for (std::int64_t a = 1; a < q; ++a) {
    if (gcd64(a, base) != 1) continue;
    auto w = expand_u64(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(q));
    if (both_ends && (w.front() < 2 || w.back() < 2)) continue;
    if (*std::max_element(w.begin(), w.end()) > bound) continue;
    return std::vector<std::int64_t>(w.begin(), w.end());
  }
  return std::nullopt;
}

std::vector<std::pair<std::int64_t, std::int64_t>> fold_schedule(std::int64_t base,
                                                                 std::int64_t n) {
  if (base < 2) throw std::invalid_argument("fold_schedule: base must be >= 2");
  if (n < 1) throw std::invalid_argument("fold_schedule: n must be >= 1");
  std::vector<std::pair<std::int64_t, std::int64_t>> steps;
  while (n > 2) {
    if (n % 2 == 1) {
      steps.emplace_back(n, base - 1);
      n = (n - 1) / 2;
    } else {
      steps.emplace_back(n, base * base - 1);
      n = (n - 2) / 2;
    }
  }
  steps.emplace_back(n, 0);
  std::reverse(steps.begin(), steps.end());
  return steps;
}

FoldConstruction fold_construct(std::int64_t base, std::int64_t n) {
  const auto schedule = fold_schedule(base, n);
  FoldConstruction out;
  out.base = base;
  out.n = n;

  constexpr std::int64_t kSearchLimit = 1L << 24;
  std::size_t start = 0;
  std::optional<std::vector<std::int64_t>> base_word;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (ipow(base, schedule[i].first) > kSearchLimit) break;
    base_word = fold_base_word(base, schedule[i].first, true);
    if (base_word) {
      start = i;
      break;
    }
  }
  if (!base_word) {
    start = 0;
    base_word = fold_base_word(base, schedule.front().first, false);
    if (!base_word) {
      throw InvariantViolation("no base word for base " + std::to_string(base) + ", n = " +
                               std::to_string(schedule.front().first));
    }
  }

  FoldWord current(std::move(*base_word));
  out.chain.push_back({schedule[start].first, 0, current.word()});
  for (std::size_t i = start + 1; i < schedule.size(); ++i) {
    // A single-entry word folds to [c, X, 1, c - 1], which can end in 1.
    current = fold_step(merge_tail(current), schedule[i].second);
    out.chain.push_back({schedule[i].first, schedule[i].second, current.word()});
  }

  out.raw_word = current.word();
  const Fraction value = cf_eval(CFWord(current.word()));
  out.word = cf_expand(value);
  out.value = value;
  if (out.value.den() != ipow(base, n)) {
    throw InvariantViolation("fold_construct: denominator is not base^n");
  }
  return out;
}

FoldAudit fold_audit(const FoldConstruction& c) {
  FoldAudit audit;
  const BigInt den = ipow(c.base, c.n);
  const std::int64_t bound = c.base * c.base - 1;

  audit.denominator_exact = c.value.den() == den && recompute_continuant(c.raw_word) == den;
  if (!audit.denominator_exact) audit.problems.push_back("denominator differs from base^n");

  BigInt g;
  mpz_gcd(g.get_mpz_t(), c.value.num().get_mpz_t(), den.get_mpz_t());
  audit.coprime = g == 1;
  if (!audit.coprime) audit.problems.push_back("numerator shares a factor with base^n");

  const auto expanded = cf_expand(c.value);
  audit.max_quotient = expanded.max_quotient();
  audit.quotients_bounded = audit.max_quotient <= bound && expanded == c.word;
  if (!audit.quotients_bounded) {
    audit.problems.push_back("canonical expansion has quotient " +
                             std::to_string(audit.max_quotient) + " > " + std::to_string(bound));
  }
  audit.raw_bounded =
      *std::max_element(c.raw_word.begin(), c.raw_word.end()) <= bound &&
      *std::min_element(c.raw_word.begin(), c.raw_word.end()) >= 1;
  if (!audit.raw_bounded) audit.problems.push_back("raw word leaves [1, base^2 - 1]");

  audit.chain_consistent = !c.chain.empty();
  for (std::size_t i = 0; i < c.chain.size(); ++i) {
    const auto& link = c.chain[i];
    const BigInt k = recompute_continuant(link.raw_word);
    if (k != ipow(c.base, link.exponent)) {
      audit.chain_consistent = false;
      audit.problems.push_back("link " + std::to_string(i) + " does not evaluate to base^" +
                               std::to_string(link.exponent));
    }
    if (i > 0) {
      const BigInt prev = recompute_continuant(c.chain[i - 1].raw_word);
      if (k != prev * prev * (link.X + 1)) {
        audit.chain_consistent = false;
        audit.problems.push_back("link " + std::to_string(i) + " breaks K^2 (X + 1)");
      }
      const std::size_t prev_len = c.chain[i - 1].raw_word.size();
      const std::size_t merged = c.chain[i - 1].raw_word.back() == 1 ? prev_len - 1 : prev_len;
      if (link.raw_word.size() != 2 * merged + 2) {
        audit.chain_consistent = false;
        audit.problems.push_back("link " + std::to_string(i) + " has unexpected length");
      }
    }
  }
  return audit;
}

}  // namespace zaremba
