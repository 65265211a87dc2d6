#pragma once

// The hyperbola criterion relating bounded partial quotients of a/q to the
// solutions of a*x = y (mod q), and searches for numerators with small
// partial quotients.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace zaremba {

struct HyperbolaWitness {
  std::int64_t x = 0;
  std::int64_t y = 0;  // least absolute residue of a*x, 1 <= |y| < q
  std::int64_t product = 0;
};

enum class Strategy { exhaustive, guided };
std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& s);

struct SearchResult {
  std::int64_t q = 0;
  std::int64_t a = 0;
  std::int64_t m_min = 0;  // max partial quotient of a/q
  Strategy strategy = Strategy::exhaustive;
  std::int64_t elapsed_ms = 0;

  friend bool operator==(const SearchResult&, const SearchResult&) = default;
};

// Minimizes x*|y| over x in [1, x_max] where y is the residue of a*x taken
// in (-q/2, q/2]. Ties keep the smallest x. Requires gcd(a, q) = 1, 1 <= a < q.
HyperbolaWitness min_hyperbola_product(std::int64_t a, std::int64_t q,
                                       std::optional<std::int64_t> x_max = std::nullopt);

// True iff every solution has x*|y| >= q/M. When true, checks that every
// partial quotient of a/q is <= M and throws InvariantViolation otherwise.
bool korobov_forward(std::int64_t a, std::int64_t q, std::int64_t M);

struct BackwardCheck {
  std::int64_t M = 0;            // max partial quotient of a/q
  std::int64_t min_product = 0;  // min x*|y|
  double ratio = 0.0;            // q / (M * min_product), at most 4
};

// With M the largest partial quotient of a/q, checks min x*|y| >= q/(4M).
// Throws InvariantViolation when the bound fails.
BackwardCheck korobov_backward(std::int64_t a, std::int64_t q);

struct HyperbolaSweep {
  std::int64_t q_max = 0;
  std::int64_t pairs = 0;
  std::int64_t forward_failures = 0;
  std::int64_t backward_failures = 0;
  double worst_ratio = 0.0;  // max of q / (M * min product)
  std::int64_t worst_q = 0;
  std::int64_t worst_a = 0;
};

// Both directions of the criterion for every q in [2, q_max] and every a
// coprime to q. Forward is tested at the tightest admissible M = ceil(q / P).
HyperbolaSweep sweep_hyperbola_criterion(std::int64_t q_max, unsigned workers = 1);

// Numerator with the smallest maximal partial quotient; smallest a on ties.
SearchResult search_exhaustive(std::int64_t q);
// Same answer without the early exit; reference for tests.
SearchResult search_exhaustive_reference(std::int64_t q);

struct GuidedSearch {
  std::int64_t q = 0;
  std::int64_t M = 0;
  std::int64_t t = 0;
  std::int64_t zm_size = 0;
  std::int64_t pairs_seen = 0;      // z1 in Z_M(t) whose inverse also lies in Z_M(t)
  std::int64_t pairs_rejected = 0;  // of those, expansions exceeding 4M
  std::int64_t partner = 0;         // z2 = z1^{-1} mod q for the accepted pair
  std::optional<SearchResult> result;
};

// Inverse-pair search over Z_M(t) with t = floor(sqrt(q / 4M)). q must be
// prime (std::invalid_argument otherwise). Pairs are scanned by increasing
// z1 and the first whose expansion has every quotient <= 4M is returned.
GuidedSearch search_guided_detailed(std::int64_t q, std::int64_t M);
std::optional<SearchResult> search_guided(std::int64_t q, std::int64_t M);

// Smallest M in [2, M_max] at which the guided search succeeds.
std::optional<GuidedSearch> smallest_guided(std::int64_t q, std::int64_t M_max);

enum class QFilter { primes, all, square_free };
QFilter qfilter_from_string(const std::string& s);
bool admissible(std::int64_t q, QFilter filter);

// One exhaustive search per admissible q in [q_min, q_max], ordered by q.
// Values listed in `skip` are left out.
std::vector<SearchResult> bound_table(std::int64_t q_min, std::int64_t q_max, QFilter filter,
                                      unsigned workers = 1,
                                      const std::vector<std::int64_t>& skip = {});

// m_min / log2 q and m_min * log2 log2 q / log2 q.
double korobov_ratio(const SearchResult& r);
double log_log_ratio(const SearchResult& r);

// Ordinary least squares slope of ys against xs.
double ols_slope(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace zaremba
