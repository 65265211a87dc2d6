#include "zaremba/cf.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace zaremba {

std::string to_string(const BigInt& x) { return x.get_str(); }

Fraction::Fraction(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_ < 1) throw std::invalid_argument("Fraction: denominator must be >= 1");
  if (num_ < 0) throw std::invalid_argument("Fraction: numerator must be >= 0");
  BigInt g;
  mpz_gcd(g.get_mpz_t(), num_.get_mpz_t(), den_.get_mpz_t());
  if (g != 1) {
    throw std::invalid_argument("Fraction: " + num_.get_str() + "/" + den_.get_str() +
                                " is not reduced");
  }
}

Fraction Fraction::reduce(BigInt num, BigInt den) {
  if (den < 1 || num < 0) throw std::invalid_argument("Fraction::reduce: bad sign");
  BigInt g;
  mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Fraction(std::move(num), std::move(den));
}

std::string Fraction::str() const { return num_.get_str() + "/" + den_.get_str(); }

CFWord::CFWord(std::vector<std::int64_t> quotients) : quotients_(std::move(quotients)) {
  for (auto c : quotients_) {
    if (c == 0) throw std::invalid_argument("CFWord: partial quotient 0");
  }
}

bool CFWord::positive() const {
  return std::all_of(quotients_.begin(), quotients_.end(), [](auto c) { return c > 0; });
}

bool CFWord::canonical() const {
  if (!positive()) return false;
  return quotients_.size() <= 1 || quotients_.back() >= 2;
}

std::int64_t CFWord::max_quotient() const {
  std::int64_t m = 0;
  for (auto c : quotients_) m = std::max(m, c);
  return m;
}

CFWord CFWord::reversed() const {
  return CFWord(std::vector<std::int64_t>(quotients_.rbegin(), quotients_.rend()));
}

CFWord CFWord::appended(std::int64_t c) const {
  auto q = quotients_;
  q.push_back(c);
  return CFWord(std::move(q));
}

std::string CFWord::str() const {
  std::ostringstream os;
  os << "[0";
  for (std::size_t i = 0; i < quotients_.size(); ++i) {
    os << (i == 0 ? ";" : ",") << quotients_[i];
  }
  os << "]";
  return os.str();
}

BigInt continuant(std::span<const std::int64_t> d) {
  BigInt prev = 0, cur = 1;  // K of length -1 and 0
  BigInt next;
  for (auto c : d) {
    next = cur * BigInt(static_cast<long>(c)) + prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

CFWord cf_expand(const BigInt& num, const BigInt& den) {
  if (den < 1) throw std::invalid_argument("cf_expand: denominator must be positive");
  if (num <= 0 || num >= den) throw std::invalid_argument("cf_expand: need 0 < num < den");
  BigInt g;
  mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (g != 1) throw std::invalid_argument("cf_expand: input not reduced");

  std::vector<std::int64_t> out;
  BigInt x = den, y = num, quot, rem;
  while (y != 0) {
    mpz_fdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    if (!quot.fits_slong_p()) throw std::overflow_error("cf_expand: quotient exceeds 64 bits");
    out.push_back(quot.get_si());
    x = std::move(y);
    y = std::move(rem);
  }
  return CFWord(std::move(out));
}

CFWord cf_expand(const Fraction& f) { return cf_expand(f.num(), f.den()); }

Fraction cf_eval(const CFWord& w) {
  if (!w.positive()) throw std::invalid_argument("cf_eval: word has non-positive entries");
  if (w.empty()) return Fraction(0, 1);
  // Consecutive continuants are coprime, so this is already reduced.
  return Fraction(continuant(w.view().subspan(1)), continuant(w.view()));
}

SignedValue cf_eval_signed(const CFWord& w) {
  if (w.empty()) return {Fraction(0, 1), 0};
  // Tail value c_j + 1/(...) kept as num/den.
  const auto& c = w.quotients();
  BigInt num = static_cast<long>(c.back()), den = 1;
  for (std::size_t j = c.size() - 1; j-- > 0;) {
    if (num == 0) throw std::domain_error("cf_eval_signed: vanishing intermediate denominator");
    BigInt next = BigInt(static_cast<long>(c[j])) * num + den;
    den = std::move(num);
    num = std::move(next);
  }
  if (num == 0) throw std::domain_error("cf_eval_signed: vanishing intermediate denominator");
  // value = den / num
  int sign = sgn(den) * sgn(num);
  BigInt n = abs(den), d = abs(num);
  return {Fraction::reduce(std::move(n), std::move(d)), sign};
}

ConvergentTable convergents(const CFWord& w) {
  if (!w.canonical()) throw std::invalid_argument("convergents: word is not canonical");
  ConvergentTable table;
  table.pq.reserve(w.size() + 1);
  BigInt p_prev = 1, q_prev = 0;  // nu = -1
  BigInt p = 0, q = 1;            // nu = 0
  table.pq.emplace_back(p, q);
  for (auto c : w.quotients()) {
    BigInt cc = static_cast<long>(c);
    BigInt p_next = cc * p + p_prev;
    BigInt q_next = cc * q + q_prev;
    p_prev = std::move(p);
    q_prev = std::move(q);
    p = std::move(p_next);
    q = std::move(q_next);
    table.pq.emplace_back(p, q);
  }
  return table;
}

CFWord normalize(const CFWord& w) {
  if (!w.positive()) throw std::invalid_argument("normalize: word has non-positive entries");
  auto q = w.quotients();
  if (q.size() >= 2 && q.back() == 1) {
    q.pop_back();
    q.back() += 1;
  }
  return CFWord(std::move(q));
}

std::pair<CFWord, Fraction> cf_reverse(const CFWord& w) {
  if (!w.canonical() || w.empty()) {
    throw std::invalid_argument("cf_reverse: need a nonempty canonical word");
  }
  CFWord rev = normalize(w.reversed());
  return {rev, cf_eval(rev)};
}

std::vector<std::uint64_t> expand_u64(std::uint64_t a, std::uint64_t q) {
  std::vector<std::uint64_t> out;
  while (a != 0) {
    out.push_back(q / a);
    std::uint64_t r = q % a;
    q = a;
    a = r;
  }
  return out;
}

std::uint64_t max_partial_quotient(std::uint64_t a, std::uint64_t q) {
  std::uint64_t m = 0;
  while (a != 0) {
    m = std::max(m, q / a);
    std::uint64_t r = q % a;
    q = a;
    a = r;
  }
  return m;
}

}  // namespace zaremba
