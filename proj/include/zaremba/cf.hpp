#pragma once

// Exact continued-fraction and continuant arithmetic.
//
// Every fraction handled here lies in [0, 1], so the integer part of
// [0; c_1, ..., c_s] is implicit: a CFWord stores only c_1, ..., c_s.

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace zaremba {

using BigInt = mpz_class;

std::string to_string(const BigInt& x);

// Reduced non-negative fraction num/den with den >= 1.
class Fraction {
 public:
  Fraction() : num_(0), den_(1) {}
  // Rejects den < 1, num < 0 and unreduced pairs.
  Fraction(BigInt num, BigInt den);

  // Builds the reduced form of num/den (num >= 0, den >= 1).
  static Fraction reduce(BigInt num, BigInt den);

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }

  std::string str() const;

  friend bool operator==(const Fraction& x, const Fraction& y) {
    return x.num_ == y.num_ && x.den_ == y.den_;
  }
  friend bool operator<(const Fraction& x, const Fraction& y) {
    return x.num_ * y.den_ < y.num_ * x.den_;
  }

 private:
  BigInt num_;
  BigInt den_;
};

// Partial quotients c_1, ..., c_s of [0; c_1, ..., c_s]. Entries are nonzero
// and may be negative (signed words); the canonical flag is derived.
class CFWord {
 public:
  CFWord() = default;
  // Throws std::invalid_argument on a zero entry.
  explicit CFWord(std::vector<std::int64_t> quotients);
  CFWord(std::initializer_list<std::int64_t> quotients)
      : CFWord(std::vector<std::int64_t>(quotients)) {}

  const std::vector<std::int64_t>& quotients() const { return quotients_; }
  std::span<const std::int64_t> view() const { return quotients_; }
  std::size_t size() const { return quotients_.size(); }
  bool empty() const { return quotients_.empty(); }
  std::int64_t operator[](std::size_t i) const { return quotients_[i]; }

  // All entries positive, and either s <= 1 or the last entry is >= 2.
  bool canonical() const;
  bool positive() const;
  // 0 for the empty word.
  std::int64_t max_quotient() const;

  CFWord reversed() const;
  CFWord appended(std::int64_t c) const;

  // "[0;1,2,2]"; the empty word prints as "[0]".
  std::string str() const;

  friend bool operator==(const CFWord&, const CFWord&) = default;

 private:
  std::vector<std::int64_t> quotients_;
};

struct ConvergentTable {
  // (p_nu, q_nu) for nu = 0..s; entry 0 is (0, 1).
  std::vector<std::pair<BigInt, BigInt>> pq;

  const BigInt& p(std::size_t nu) const { return pq.at(nu).first; }
  const BigInt& q(std::size_t nu) const { return pq.at(nu).second; }
  std::size_t size() const { return pq.size(); }
};

// Value of a signed word: magnitude with the sign kept apart.
struct SignedValue {
  Fraction magnitude;
  int sign = 0;  // -1, 0 or +1
};

// K() = 1, K(d_1) = d_1, K(d_1..d_k) = d_k K(d_1..d_{k-1}) + K(d_1..d_{k-2}).
BigInt continuant(std::span<const std::int64_t> d);
inline BigInt continuant(const CFWord& w) { return continuant(w.view()); }
inline BigInt continuant(std::initializer_list<std::int64_t> d) {
  return continuant(std::span<const std::int64_t>(d.begin(), d.size()));
}

// Regular expansion of a fraction in (0, 1). Throws std::invalid_argument
// for num = 0 or num >= den, std::overflow_error if a quotient does not fit
// in 64 bits.
CFWord cf_expand(const Fraction& f);
// Same, but from a raw pair; rejects unreduced input.
CFWord cf_expand(const BigInt& num, const BigInt& den);

// Value of a positive word. The empty word evaluates to 0/1.
Fraction cf_eval(const CFWord& w);

// Value of an arbitrary (possibly signed) word, evaluated from the tail.
// Throws std::domain_error when an intermediate tail value is 0.
SignedValue cf_eval_signed(const CFWord& w);

// Convergents of a canonical word.
ConvergentTable convergents(const CFWord& w);

// Replaces a trailing [..., x, 1] by [..., x + 1]. Positive words only.
CFWord normalize(const CFWord& w);

// The reversed word (c_s, ..., c_1) in canonical form together with its
// value q_{s-1}/q_s. With a the numerator of w's value this satisfies
// a * q_{s-1} = (-1)^{s-1} (mod q_s).
std::pair<CFWord, Fraction> cf_reverse(const CFWord& w);

// Machine-word helpers for the search loops.
std::vector<std::uint64_t> expand_u64(std::uint64_t a, std::uint64_t q);
std::uint64_t max_partial_quotient(std::uint64_t a, std::uint64_t q);

}  // namespace zaremba
