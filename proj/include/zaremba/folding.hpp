#pragma once

// Folding construction: fractions a_n / base^n whose partial quotients are
// all at most base^2 - 1, built from the continuant identity
//
//   K(c_1..c_t, X, 1, c_t - 1, c_{t-1}..c_1) = K(c_1..c_t)^2 (X + 1).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zaremba/cf.hpp"

namespace zaremba {

// A positive continuant word with its cached value K(word).
class FoldWord {
 public:
  explicit FoldWord(std::vector<std::int64_t> word);

  const std::vector<std::int64_t>& word() const { return word_; }
  const BigInt& value() const { return value_; }
  std::int64_t first() const { return word_.front(); }
  std::int64_t last() const { return word_.back(); }
  std::int64_t max_entry() const;

 private:
  std::vector<std::int64_t> word_;
  BigInt value_;
};

// (c_1..c_t, X, 1, c_t - 1, c_{t-1}..c_1). Rejects X <= 0 and words whose
// last entry is below 2. Throws InvariantViolation if the continuant of the
// output differs from value^2 (X + 1).
FoldWord fold_step(const FoldWord& w, std::int64_t X);

// Rewrites a trailing [..., x, 1] as [..., x + 1]; the continuant is
// unchanged. Leaves words that already end in an entry >= 2 alone.
FoldWord merge_tail(const FoldWord& w);

struct FoldLink {
  std::int64_t exponent = 0;  // exponent of base after this step
  std::int64_t X = 0;         // 0 for the base case
  std::vector<std::int64_t> raw_word;
};

struct FoldConstruction {
  std::int64_t base = 0;
  std::int64_t n = 0;
  std::vector<std::int64_t> raw_word;  // continuant word, possibly non-canonical
  CFWord word;                         // canonical form of the same value
  Fraction value;                      // a_n / base^n
  std::vector<FoldLink> chain;         // base case first
};

// Smallest a in [1, base^n) coprime to base whose expansion has every
// quotient <= base^2 - 1. With `both_ends` the first and last quotients must
// also be >= 2, which keeps every later fold inside the bound. Empty when no
// such a exists; throws BudgetExceeded when base^n > 2^24.
std::optional<std::vector<std::int64_t>> fold_base_word(std::int64_t base, std::int64_t n,
                                                        bool both_ends);

// Exponents visited on the way to n: n -> (n-1)/2 with X = base - 1 when n
// is odd, n -> (n-2)/2 with X = base^2 - 1 when n is even, down to 1 or 2.
// Returned base case first, as (exponent, X) pairs.
std::vector<std::pair<std::int64_t, std::int64_t>> fold_schedule(std::int64_t base,
                                                                 std::int64_t n);

// Folds along fold_schedule. The chain starts at the lowest exponent on the
// schedule that has a base word with both end quotients >= 2 (for base 2 the
// exponents 2 and 5 have none); if there is none it starts at the bottom.
FoldConstruction fold_construct(std::int64_t base, std::int64_t n);

struct FoldAudit {
  bool denominator_exact = false;
  bool coprime = false;
  bool quotients_bounded = false;   // canonical expansion
  bool raw_bounded = false;         // raw continuant word
  bool chain_consistent = false;    // every link recomputed independently
  std::int64_t max_quotient = 0;
  std::vector<std::string> problems;

  bool ok() const { return problems.empty(); }
};

// Re-verifies a construction from scratch: denominator, coprimality, the
// quotient bound, and each fold against a fresh continuant evaluation.
FoldAudit fold_audit(const FoldConstruction& c);

}  // namespace zaremba
