#include "zaremba/korobov.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "zaremba/cf.hpp"
#include "zaremba/errors.hpp"
#include "zaremba/number_theory.hpp"
#include "zaremba/parallel.hpp"
#include "zaremba/zm_sets.hpp"

namespace zaremba {

namespace {

void require_unit(std::int64_t a, std::int64_t q) {
  if (q < 2) throw std::invalid_argument("q must be >= 2");
  if (a < 1 || a >= q) throw std::invalid_argument("need 1 <= a < q");
  if (gcd64(a, q) != 1) throw std::invalid_argument("a is not coprime to q");
}

std::int64_t elapsed_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                               start)
      .count();
}

// Largest partial quotient of a/q, giving up as soon as one reaches `stop`.
// Returns `stop` in that case.
std::uint32_t max_quotient_below(std::uint32_t a, std::uint32_t q, std::uint32_t stop) {
  std::uint32_t m = 0;
  while (a != 0) {
    std::uint32_t c = q / a;
    if (c >= stop) return stop;
    if (c > m) m = c;
    std::uint32_t r = q - c * a;
    q = a;
    a = r;
  }
  return m;
}

}  // namespace

std::string to_string(Strategy s) { return s == Strategy::exhaustive ? "exhaustive" : "guided"; }

Strategy strategy_from_string(const std::string& s) {
  if (s == "exhaustive") return Strategy::exhaustive;
  if (s == "guided") return Strategy::guided;
  throw std::invalid_argument("unknown strategy '" + s + "'");
}

HyperbolaWitness min_hyperbola_product(std::int64_t a, std::int64_t q,
                                       std::optional<std::int64_t> x_max) {
  require_unit(a, q);
  const std::int64_t last = x_max.value_or(q - 1);
  if (last < 1 || last >= q) throw std::invalid_argument("x_max must lie in [1, q)");

  HyperbolaWitness best{0, 0, 0};
  const auto qq = static_cast<unsigned __int128>(q);
  std::int64_t residue = 0;  // a*x mod q, updated incrementally
  for (std::int64_t x = 1; x <= last; ++x) {
    residue += a;
    if (residue >= q) residue -= q;
    // residue != 0 because gcd(a, q) = 1 and x < q. The complementary
    // representative residue - q has |.| = q - residue; keep the smaller.
    std::int64_t y = residue <= q / 2 ? residue : residue - q;
    auto prod = static_cast<unsigned __int128>(x) * static_cast<std::uint64_t>(y < 0 ? -y : y);
    if (best.x == 0 || prod < static_cast<unsigned __int128>(best.product)) {
      if (prod >= qq * qq) throw std::overflow_error("min_hyperbola_product: overflow");
      best = {x, y, static_cast<std::int64_t>(prod)};
    }
  }
  return best;
}

bool korobov_forward(std::int64_t a, std::int64_t q, std::int64_t M) {
  if (M < 1) throw std::invalid_argument("M must be >= 1");
  const auto w = min_hyperbola_product(a, q);
  // x|y| >= q/M  <=>  M * x|y| >= q
  const bool holds = static_cast<__int128>(w.product) * M >= q;
  if (holds) {
    auto m = max_partial_quotient(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(q));
    if (m > static_cast<std::uint64_t>(M)) {
      throw InvariantViolation("hyperbola criterion (forward) fails for a=" + std::to_string(a) +
                               " q=" + std::to_string(q) + " M=" + std::to_string(M));
    }
  }
  return holds;
}

BackwardCheck korobov_backward(std::int64_t a, std::int64_t q) {
  const auto w = min_hyperbola_product(a, q);
  const auto M = static_cast<std::int64_t>(
      max_partial_quotient(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(q)));
  BackwardCheck check{M, w.product,
                      static_cast<double>(q) / (static_cast<double>(M) * w.product)};
  if (static_cast<__int128>(4) * M * w.product < q) {
    throw InvariantViolation("hyperbola criterion (backward) fails for a=" + std::to_string(a) +
                             " q=" + std::to_string(q));
  }
  return check;
}

HyperbolaSweep sweep_hyperbola_criterion(std::int64_t q_max, unsigned workers) {
  if (q_max < 2) throw std::invalid_argument("q_max must be >= 2");
  const auto count = static_cast<std::size_t>(q_max - 1);
  auto rows = parallel_map(count, workers, [&](std::size_t i) {
    const std::int64_t q = static_cast<std::int64_t>(i) + 2;
    HyperbolaSweep s;
    s.q_max = q;
    for (std::int64_t a = 1; a < q; ++a) {
      if (gcd64(a, q) != 1) continue;
      ++s.pairs;
      const auto w = min_hyperbola_product(a, q);
      const auto M = static_cast<std::int64_t>(
          max_partial_quotient(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(q)));
      // Forward at the tightest M for which the hypothesis holds.
      const std::int64_t m_forward = (q + w.product - 1) / w.product;
      if (M > m_forward) ++s.forward_failures;
      if (static_cast<__int128>(4) * M * w.product < q) ++s.backward_failures;
      const double ratio = static_cast<double>(q) / (static_cast<double>(M) * w.product);
      if (ratio > s.worst_ratio) {
        s.worst_ratio = ratio;
        s.worst_q = q;
        s.worst_a = a;
      }
    }
    return s;
  });

  HyperbolaSweep total;
  total.q_max = q_max;
  for (const auto& s : rows) {
    total.pairs += s.pairs;
    total.forward_failures += s.forward_failures;
    total.backward_failures += s.backward_failures;
    if (s.worst_ratio > total.worst_ratio) {
      total.worst_ratio = s.worst_ratio;
      total.worst_q = s.worst_q;
      total.worst_a = s.worst_a;
    }
  }
  return total;
}

SearchResult search_exhaustive(std::int64_t q) {
  if (q < 2) throw std::invalid_argument("search_exhaustive: q must be >= 2");
  if (q > static_cast<std::int64_t>(UINT32_MAX)) {
    throw std::invalid_argument("search_exhaustive: q exceeds 32 bits");
  }
  const auto start = std::chrono::steady_clock::now();
  const auto qq = static_cast<std::uint32_t>(q);
  // a = 1 gives [0; q].
  std::uint32_t best_a = 1, best_m = qq;
  for (std::uint32_t a = 2; a < qq; ++a) {
    // Canonical expansions end in a quotient >= 2, so 2 cannot be beaten.
    if (best_m <= 2) break;
    // The first quotient is floor(q / a); skip a until it drops below best_m.
    if (qq / a >= best_m) continue;
    std::uint32_t m = max_quotient_below(a, qq, best_m);
    if (m < best_m && std::gcd(a, qq) == 1) {
      best_m = m;
      best_a = a;
    }
  }
  return {q, best_a, best_m, Strategy::exhaustive, elapsed_since(start)};
}

SearchResult search_exhaustive_reference(std::int64_t q) {
  if (q < 2) throw std::invalid_argument("search_exhaustive_reference: q must be >= 2");
  std::int64_t best_a = 0, best_m = 0;
  for (std::int64_t a = 1; a < q; ++a) {
    if (gcd64(a, q) != 1) continue;
    auto m = static_cast<std::int64_t>(
        max_partial_quotient(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(q)));
    if (best_a == 0 || m < best_m) {
      best_a = a;
      best_m = m;
    }
  }
  return {q, best_a, best_m, Strategy::exhaustive, 0};
}

GuidedSearch search_guided_detailed(std::int64_t q, std::int64_t M) {
  if (M < 2) throw std::invalid_argument("search_guided: M must be >= 2");
  if (q < 2 || !is_prime(static_cast<std::uint64_t>(q))) {
    throw std::invalid_argument("search_guided: q must be prime");
  }
  const auto start = std::chrono::steady_clock::now();
  GuidedSearch g;
  g.q = q;
  g.M = M;
  // t = floor(sqrt(q / 4M)): largest t with 4M t^2 <= q.
  g.t = static_cast<std::int64_t>(isqrt(static_cast<std::uint64_t>(q / (4 * M))));
  if (g.t < 1) return g;

  const auto zm = build_ZM(q, M, g.t);
  g.zm_size = static_cast<std::int64_t>(zm.size());
  std::vector<bool> member(static_cast<std::size_t>(q), false);
  for (auto z : zm) member[static_cast<std::size_t>(z)] = true;

  for (auto z1 : zm) {
    const std::int64_t z2 = modinv(z1, q);
    if (!member[static_cast<std::size_t>(z2)]) continue;
    ++g.pairs_seen;
    const auto m =
        max_partial_quotient(static_cast<std::uint64_t>(z1), static_cast<std::uint64_t>(q));
    if (m > static_cast<std::uint64_t>(4 * M)) {
      ++g.pairs_rejected;
      continue;
    }
    g.partner = z2;
    g.result = SearchResult{q, z1, static_cast<std::int64_t>(m), Strategy::guided,
                            elapsed_since(start)};
    break;
  }
  return g;
}

std::optional<SearchResult> search_guided(std::int64_t q, std::int64_t M) {
  return search_guided_detailed(q, M).result;
}

std::optional<GuidedSearch> smallest_guided(std::int64_t q, std::int64_t M_max) {
  for (std::int64_t M = 2; M <= M_max; ++M) {
    auto g = search_guided_detailed(q, M);
    if (g.t < 1) break;  // t only shrinks as M grows
    if (g.result) return g;
  }
  return std::nullopt;
}

QFilter qfilter_from_string(const std::string& s) {
  if (s == "primes") return QFilter::primes;
  if (s == "all") return QFilter::all;
  if (s == "square_free") return QFilter::square_free;
  throw std::invalid_argument("unknown filter '" + s + "'");
}

bool admissible(std::int64_t q, QFilter filter) {
  switch (filter) {
    case QFilter::primes:
      return is_prime(static_cast<std::uint64_t>(q));
    case QFilter::square_free:
      return is_square_free(static_cast<std::uint64_t>(q));
    case QFilter::all:
      return true;
  }
  return false;
}

std::vector<SearchResult> bound_table(std::int64_t q_min, std::int64_t q_max, QFilter filter,
                                      unsigned workers, const std::vector<std::int64_t>& skip) {
  if (q_min < 2 || q_min > q_max) throw std::invalid_argument("bound_table: need 2 <= q_min <= q_max");
  std::vector<std::int64_t> qs;
  for (std::int64_t q = q_min; q <= q_max; ++q) {
    if (!admissible(q, filter)) continue;
    if (std::binary_search(skip.begin(), skip.end(), q)) continue;
    qs.push_back(q);
  }
  // Largest q first so the expensive rows are spread across workers.
  std::vector<std::size_t> order(qs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = order.size() - 1 - i;
  auto computed = parallel_map(qs.size(), workers,
                               [&](std::size_t i) { return search_exhaustive(qs[order[i]]); });
  std::sort(computed.begin(), computed.end(),
            [](const SearchResult& x, const SearchResult& y) { return x.q < y.q; });
  return computed;
}

double korobov_ratio(const SearchResult& r) {
  return static_cast<double>(r.m_min) / std::log2(static_cast<double>(r.q));
}

double log_log_ratio(const SearchResult& r) {
  const double l = std::log2(static_cast<double>(r.q));
  return static_cast<double>(r.m_min) * std::log2(l) / l;
}

double ols_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw std::invalid_argument("ols_slope: need >= 2 points");
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0) throw std::invalid_argument("ols_slope: degenerate abscissae");
  return sxy / sxx;
}

}  // namespace zaremba
