#include "zaremba/zm_sets.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "zaremba/korobov.hpp"
#include "zaremba/number_theory.hpp"

namespace zaremba {

namespace {

void check_mt(std::int64_t M, std::int64_t t) {
  if (M < 1) throw std::invalid_argument("M must be >= 1");
  if (t < 2) throw std::invalid_argument("t must be >= 2");
}

// Depth-first walk over words with entries in [1, M] and continuant < t,
// children in increasing order. `visit(word, p, q, q_prev)` is called for
// every word, where p/q is its value and q_prev = K(word without last).
template <typename Visit>
void walk_words(std::int64_t M, std::int64_t t, std::vector<std::int64_t>& word,
                std::int64_t p_prev, std::int64_t p, std::int64_t q_prev, std::int64_t q,
                Visit& visit) {
  for (std::int64_t c = 1; c <= M; ++c) {
    const std::int64_t q_next = c * q + q_prev;
    if (q_next >= t) break;
    const std::int64_t p_next = c * p + p_prev;
    word.push_back(c);
    visit(word, p_next, q_next, q);
    walk_words(M, t, word, p, p_next, q, q_next, visit);
    word.pop_back();
  }
}

template <typename Visit>
void walk_canonical(std::int64_t M, std::int64_t t, Visit&& visit) {
  std::vector<std::int64_t> word;
  auto filtered = [&](const std::vector<std::int64_t>& w, std::int64_t p, std::int64_t q,
                      std::int64_t q_prev) {
    // [0;1] = 1/1 is outside (0, 1); otherwise canonical means last >= 2.
    if (w.back() >= 2) visit(w, p, q, q_prev);
  };
  walk_words(M, t, word, 1, 0, 0, 1, filtered);
}

BoundedFractionSet enumerate(std::int64_t M, std::int64_t t, bool barred) {
  check_mt(M, t);
  BoundedFractionSet set{M, t, barred, {}};
  walk_canonical(M, t, [&](const std::vector<std::int64_t>& w, std::int64_t p, std::int64_t q,
                           std::int64_t q_prev) {
    if (barred && q + q_prev < t) return;
    set.members.push_back({CFWord(w), Fraction(p, q)});
  });
  std::sort(set.members.begin(), set.members.end(),
            [](const BoundedFraction& x, const BoundedFraction& y) { return x.value < y.value; });
  return set;
}

std::uint64_t pack(std::int64_t u, std::int64_t v) {
  return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint64_t>(v);
}

}  // namespace

BoundedFractionSet enumerate_QM(std::int64_t M, std::int64_t t) { return enumerate(M, t, false); }

BoundedFractionSet enumerate_QM_bar(std::int64_t M, std::int64_t t) {
  return enumerate(M, t, true);
}

std::uint64_t count_QM(std::int64_t M, std::int64_t t) {
  check_mt(M, t);
  std::uint64_t n = 0;
  walk_canonical(M, t, [&](const auto&, std::int64_t, std::int64_t, std::int64_t) { ++n; });
  return n;
}

std::uint64_t count_QM_bar(std::int64_t M, std::int64_t t) {
  check_mt(M, t);
  std::uint64_t n = 0;
  walk_canonical(M, t, [&](const auto&, std::int64_t, std::int64_t q, std::int64_t q_prev) {
    if (q + q_prev >= t) ++n;
  });
  return n;
}

PrefixConvergent prefix_convergent(std::int64_t a, std::int64_t q, std::int64_t M,
                                   std::int64_t t) {
  PrefixConvergent out;
  std::int64_t p_prev = 1, p_cur = 0, q_prev = 0, q_cur = 1;
  std::int64_t num = a, den = q;
  while (num != 0) {
    const std::int64_t c = den / num;
    const std::int64_t q_next = c * q_cur + q_prev;
    if (q_next >= t) break;
    if (c > M) {
      out.bounded = false;
      break;
    }
    const std::int64_t p_next = c * p_cur + p_prev;
    p_prev = p_cur;
    p_cur = p_next;
    q_prev = q_cur;
    q_cur = q_next;
    ++out.nu;
    const std::int64_t r = den - c * num;
    den = num;
    num = r;
  }
  out.p = p_cur;
  out.q = q_cur;
  return out;
}

std::vector<std::int64_t> build_ZM(std::int64_t q, std::int64_t M, std::int64_t t) {
  if (q < 2) throw std::invalid_argument("build_ZM: q must be >= 2");
  if (M < 1) throw std::invalid_argument("build_ZM: M must be >= 1");
  if (t < 0 || t * t > q) throw std::invalid_argument("build_ZM: need t <= sqrt(q)");
  std::vector<std::int64_t> out;
  for (std::int64_t a = 1; a < q; ++a) {
    if (gcd64(a, q) != 1) continue;
    if (prefix_convergent(a, q, M, t).bounded) out.push_back(a);
  }
  return out;
}

std::int64_t IntervalDecomposition::min_length() const {
  std::int64_t m = 0;
  for (const auto& b : intervals) {
    if (m == 0 || b.length() < m) m = b.length();
  }
  return m;
}

IntervalDecomposition decompose_ZM(std::int64_t q, std::int64_t M, std::int64_t t,
                                   double block_constant) {
  if (t < 2) throw std::invalid_argument("decompose_ZM: t must be >= 2");
  if (t * t > q) throw std::invalid_argument("decompose_ZM: need t <= sqrt(q)");
  if (M < 1) throw std::invalid_argument("decompose_ZM: M must be >= 1");

  IntervalDecomposition d;
  d.q = q;
  d.M = M;
  d.t = t;
  d.min_length_bound = q / (t * t);
  d.block_size = static_cast<std::int64_t>(std::floor(block_constant * static_cast<double>(q) /
                                                      static_cast<double>(t * t)));

  const auto qbar = enumerate_QM_bar(M, t);
  d.qbar_size = static_cast<std::int64_t>(qbar.size());
  std::unordered_map<std::uint64_t, std::size_t> slot;
  for (std::size_t i = 0; i < qbar.members.size(); ++i) {
    const auto& f = qbar.members[i].value;
    slot.emplace(pack(f.num().get_si(), f.den().get_si()), i);
  }

  struct Group {
    std::int64_t lo = 0, hi = 0, count = 0;
  };
  std::vector<Group> groups(qbar.members.size());
  for (std::int64_t a = 1; a < q; ++a) {
    if (gcd64(a, q) != 1) continue;
    const auto pc = prefix_convergent(a, q, M, t);
    if (!pc.bounded) continue;
    ++d.zm_size;
    auto it = slot.find(pack(pc.p, pc.q));
    if (it == slot.end()) {
      d.leftover.push_back(a);
      continue;
    }
    auto& g = groups[it->second];
    if (g.count == 0) g.lo = a;
    g.hi = a;
    ++g.count;
  }

  for (std::size_t i = 0; i < groups.size(); ++i) {
    const auto& g = groups[i];
    const auto& f = qbar.members[i].value;
    const std::string name = f.str() + " " + qbar.members[i].word.str();
    if (g.count == 0) {
      d.violations.push_back("no numerators attached to " + name);
      continue;
    }
    if (g.count != g.hi - g.lo + 1) {
      d.violations.push_back("numerators attached to " + name + " do not form an interval [" +
                             std::to_string(g.lo) + ", " + std::to_string(g.hi) + "]");
    }
    d.intervals.push_back({g.lo, g.hi, f.num().get_si(), f.den().get_si()});
  }
  std::sort(d.intervals.begin(), d.intervals.end(),
            [](const IntegerInterval& x, const IntegerInterval& y) { return x.lo < y.lo; });
  for (std::size_t i = 0; i + 1 < d.intervals.size(); ++i) {
    if (d.intervals[i].hi >= d.intervals[i + 1].lo) {
      d.violations.push_back("intervals overlap at " + std::to_string(d.intervals[i + 1].lo));
    }
  }
  for (const auto& b : d.intervals) {
    if (b.length() < d.min_length_bound) {
      d.violations.push_back("interval [" + std::to_string(b.lo) + ", " + std::to_string(b.hi) +
                             "] on " + std::to_string(b.u) + "/" + std::to_string(b.v) +
                             " shorter than floor(q/t^2) = " + std::to_string(d.min_length_bound));
    }
  }
  d.T = static_cast<std::int64_t>(d.intervals.size());
  if (d.block_size > 0) {
    for (const auto& b : d.intervals) d.block_remainder += b.length() % d.block_size;
  }
  d.leftover_within_block_bound =
      static_cast<std::int64_t>(d.leftover.size()) <= d.block_size * d.T;
  if (d.T != d.qbar_size) {
    d.violations.push_back("T = " + std::to_string(d.T) + " but |Q̄_M(t)| = " +
                           std::to_string(d.qbar_size));
  }
  return d;
}

DimensionFit estimate_wM(std::int64_t M, std::int64_t t_max) {
  if (M < 2) throw std::invalid_argument("estimate_wM: M must be >= 2");
  if (t_max < 64) throw std::invalid_argument("estimate_wM: t_max must be >= 64");
  DimensionFit fit;
  fit.M = M;
  std::vector<double> xs, ys;
  for (std::int64_t t = 8; t <= t_max; t *= 2) {
    const auto n = count_QM(M, t);
    if (n == 0) continue;
    xs.push_back(std::log2(static_cast<double>(t)));
    ys.push_back(std::log2(static_cast<double>(n)));
    fit.points.emplace_back(xs.back(), ys.back());
  }
  const double slope = ols_slope(xs, ys);
  fit.w_estimate = slope / 2.0;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (my + slope * (xs[i] - mx));
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / static_cast<double>(xs.size()));
  return fit;
}

}  // namespace zaremba
