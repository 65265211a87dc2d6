#pragma once

// Rationals with bounded partial quotients and small denominators, and the
// interval structure of the numerator set Z_M(t) modulo q.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zaremba/cf.hpp"

namespace zaremba {

struct BoundedFraction {
  CFWord word;  // canonical
  Fraction value;
};

// Q_M(t) (or its barred subset): canonical words with every quotient <= M
// and denominator < t, sorted by value.
struct BoundedFractionSet {
  std::int64_t M = 0;
  std::int64_t t = 0;
  bool barred = false;
  std::vector<BoundedFraction> members;

  std::size_t size() const { return members.size(); }
};

BoundedFractionSet enumerate_QM(std::int64_t M, std::int64_t t);
// Members of Q_M(t) with K(c_1, ..., c_s, 1) >= t.
BoundedFractionSet enumerate_QM_bar(std::int64_t M, std::int64_t t);

// |Q_M(t)| and |Q̄_M(t)| without materializing the members.
std::uint64_t count_QM(std::int64_t M, std::int64_t t);
std::uint64_t count_QM_bar(std::int64_t M, std::int64_t t);

// The nu-th convergent of a/q where nu is the largest index with q_nu < t,
// and whether c_1, ..., c_nu are all <= M. For t <= 1 the index is 0 and
// the convergent is 0/1.
struct PrefixConvergent {
  std::int64_t p = 0;
  std::int64_t q = 1;
  std::int64_t nu = 0;
  bool bounded = true;
};
PrefixConvergent prefix_convergent(std::int64_t a, std::int64_t q, std::int64_t M,
                                   std::int64_t t);

// Numerators a in [1, q) coprime to q whose prefix (as above) is bounded by
// M, ascending. Rejects t*t > q.
std::vector<std::int64_t> build_ZM(std::int64_t q, std::int64_t M, std::int64_t t);

struct IntegerInterval {
  std::int64_t lo = 0;
  std::int64_t hi = 0;  // inclusive
  std::int64_t u = 0;   // the member u/v of Q̄_M(t) the interval sits on
  std::int64_t v = 1;

  std::int64_t length() const { return hi - lo + 1; }
};

// Z_M(t) split as disjoint intervals, one per member of Q̄_M(t), plus a
// leftover set. Every element of Z_M(t) is grouped by its prefix
// convergent; groups whose convergent lies in Q̄_M(t) are the intervals.
struct IntervalDecomposition {
  std::int64_t q = 0;
  std::int64_t M = 0;
  std::int64_t t = 0;
  std::vector<IntegerInterval> intervals;
  std::vector<std::int64_t> leftover;
  std::int64_t T = 0;              // intervals.size()
  std::int64_t qbar_size = 0;      // |Q̄_M(t)|, enumerated independently
  std::int64_t min_length_bound = 0;  // floor(q / t^2)
  std::int64_t block_size = 0;        // floor(c q / t^2)
  std::int64_t zm_size = 0;
  // Sum over intervals of (length mod block_size): what is left after cutting
  // every interval into whole blocks. At most block_size * T by construction.
  std::int64_t block_remainder = 0;
  // Whether leftover.size() <= block_size * T. Measured, not enforced: the
  // leftover also holds numerators whose prefix convergent lies in
  // Q_M(t) but not in Q-bar_M(t).
  bool leftover_within_block_bound = false;
  // Empty when the decomposition has the predicted structure.
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  std::int64_t min_length() const;
};

// Never throws on a structural failure: violations are reported in the
// result. Rejects t*t > q and t < 2.
IntervalDecomposition decompose_ZM(std::int64_t q, std::int64_t M, std::int64_t t,
                                   double block_constant = 1.0);

struct DimensionFit {
  std::int64_t M = 0;
  double w_estimate = 0.0;  // slope / 2
  double residual_rms = 0.0;
  // (log2 t, log2 |Q_M(t)|) at dyadic t.
  std::vector<std::pair<double, double>> points;
};

// Least-squares slope of log |Q_M(t)| against log t over t = 2^k,
// 8 <= t <= t_max, halved. Requires M >= 2 (Q_1(t) is empty in canonical
// form) and t_max >= 64.
DimensionFit estimate_wM(std::int64_t M, std::int64_t t_max);

}  // namespace zaremba
