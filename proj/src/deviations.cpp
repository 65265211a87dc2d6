#include "zaremba/deviations.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "zaremba/errors.hpp"
#include "zaremba/parallel.hpp"
#include "zaremba/rng.hpp"

namespace zaremba {

std::string to_string(DeviationMode m) {
  return m == DeviationMode::plain ? "plain" : "signed";
}

DeviationMode deviation_mode_from_string(const std::string& s) {
  if (s == "plain") return DeviationMode::plain;
  if (s == "signed") return DeviationMode::signed_alternating;
  throw std::invalid_argument("unknown mode '" + s + "' (expected plain or signed)");
}

double log_qn_plain(std::span<const std::int64_t> word) {
  long double log_q = 0.0L;
  long double ratio = 0.0L;  // q_{j-1} / q_j, in [0, 1)
  for (auto c : word) {
    if (c < 1) throw std::invalid_argument("log_qn_plain: entries must be >= 1");
    const long double denom = static_cast<long double>(c) + ratio;
    log_q += std::log2(denom);
    ratio = 1.0L / denom;
  }
  return static_cast<double>(log_q);
}

namespace {

void check_signed(std::span<const std::int64_t> word) {
  for (auto c : word) {
    if (c < 2 || c % 2 != 0) {
      throw std::invalid_argument("log_qn_signed: entries must be even and >= 2");
    }
  }
}

double log2_abs(const mpz_class& x) {
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
  return std::log2(std::fabs(mant)) + static_cast<double>(exp);
}

}  // namespace

double log_qn_signed_exact(std::span<const std::int64_t> word) {
  check_signed(word);
  mpz_class prev = 0, cur = 1;  // q_{-1}, q_0
  mpz_class next;
  for (auto c : word) {
    for (const long e : {static_cast<long>(c), -static_cast<long>(c)}) {
      next = cur * e + prev;
      if (next == 0) throw InvariantViolation("signed continuant vanished");
      prev.swap(cur);
      cur.swap(next);
    }
  }
  return log2_abs(cur);
}

double log_qn_signed_float(std::span<const std::int64_t> word) {
  check_signed(word);
  long double log_q = 0.0L;
  long double ratio = 0.0L;  // q_{j-1} / q_j, |ratio| <= 1 when |entries| >= 2
  for (auto c : word) {
    for (const long double e : {static_cast<long double>(c), -static_cast<long double>(c)}) {
      const long double denom = e + ratio;
      if (denom == 0.0L) throw InvariantViolation("signed continuant vanished");
      log_q += std::log2(std::fabs(denom));
      ratio = 1.0L / denom;
    }
  }
  return static_cast<double>(log_q);
}

double log_qn_signed(std::span<const std::int64_t> word) {
  return word.size() <= kSignedExactLimit ? log_qn_signed_exact(word) : log_qn_signed_float(word);
}

double reference_mean(std::int64_t N, DeviationMode mode) {
  if (N < 1) throw std::invalid_argument("reference_mean: N must be >= 1");
  long double s = 0.0L;
  for (std::int64_t k = 2; k <= N; ++k) s += std::log2(static_cast<long double>(k));
  const double mean = static_cast<double>(s / static_cast<long double>(N));
  return mode == DeviationMode::plain ? mean : 2.0 * mean;
}

std::vector<std::int64_t> draw_word(std::int64_t N, std::int64_t n, DeviationMode mode,
                                    std::uint64_t seed, std::uint64_t trial) {
  StreamRng rng(seed, trial);
  std::vector<std::int64_t> w(static_cast<std::size_t>(n));
  const std::int64_t scale = mode == DeviationMode::plain ? 1 : 2;
  for (auto& c : w) c = scale * rng.uniform(1, N);
  return w;
}

namespace {

std::vector<double> sample(std::int64_t N, std::int64_t n, std::int64_t trials,
                           DeviationMode mode, std::uint64_t seed, unsigned workers) {
  return parallel_map(static_cast<std::size_t>(trials), workers, [&](std::size_t k) {
    const auto w = draw_word(N, n, mode, seed, k);
    const double lq = mode == DeviationMode::plain ? log_qn_plain(w) : log_qn_signed(w);
    return lq / static_cast<double>(n);
  });
}

std::pair<double, double> mean_sd(const std::vector<double>& xs) {
  long double s = 0.0L;
  for (double x : xs) s += x;
  const long double mean = s / static_cast<long double>(xs.size());
  long double ss = 0.0L;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double sd =
      xs.size() > 1 ? static_cast<double>(std::sqrt(ss / static_cast<long double>(xs.size() - 1)))
                    : 0.0;
  return {static_cast<double>(mean), sd};
}

}  // namespace

DeviationReport run_deviation(const DeviationConfig& config) {
  if (config.N < 1) throw std::invalid_argument("run_deviation: N must be >= 1");
  if (config.n < 1) throw std::invalid_argument("run_deviation: n must be >= 1");
  if (config.trials < 100) throw std::invalid_argument("run_deviation: trials must be >= 100");
  if (!(config.delta > 0.0 && config.delta < 1.0)) {
    throw std::invalid_argument("run_deviation: delta must lie in (0, 1)");
  }
  if (config.trials > 1000000 || config.n > 1000000) {
    throw BudgetExceeded("run_deviation: trials and n are capped at 10^6");
  }

  DeviationReport r;
  r.config = config;
  r.reference_mean = reference_mean(config.N, config.mode);
  const double log_inv_delta = std::log2(1.0 / config.delta);
  const double prefactor = config.mode == DeviationMode::plain ? 2.0 : 4.0;
  r.bound = prefactor * std::exp(-config.kappa * config.delta * config.delta *
                                 static_cast<double>(config.n) / log_inv_delta);
  r.in_hypothesis_range = static_cast<double>(config.N) >=
                          config.K * log_inv_delta / (config.delta * config.delta);

  r.samples = sample(config.N, config.n, config.trials, config.mode, config.seed, config.workers);
  std::int64_t hits = 0;
  for (double x : r.samples) {
    if (std::fabs(x - r.reference_mean) >= config.delta) ++hits;
  }
  r.empirical_tail = static_cast<double>(hits) / static_cast<double>(config.trials);
  std::tie(r.sample_mean, r.sample_sd) = mean_sd(r.samples);
  return r;
}

LyapunovEstimate lyapunov_estimate(std::int64_t N, std::int64_t n, std::int64_t trials,
                                   std::uint64_t seed, unsigned workers) {
  if (N < 1 || n < 1 || trials < 1) {
    throw std::invalid_argument("lyapunov_estimate: N, n and trials must be positive");
  }
  LyapunovEstimate e;
  e.N = N;
  e.n = n;
  e.trials = trials;
  e.seed = seed;
  const auto xs = sample(N, n, trials, DeviationMode::signed_alternating, seed, workers);
  e.per_pair = mean_sd(xs).first;
  e.per_letter = e.per_pair / 2.0;
  e.reference = reference_mean(N, DeviationMode::signed_alternating);
  e.ratio_to_log2_N = N > 1 ? e.per_pair / std::log2(static_cast<double>(N)) : 0.0;
  return e;
}

double fit_kappa(double delta, double prefactor,
                 const std::vector<std::pair<std::int64_t, double>>& n_and_tail) {
  const double scale = delta * delta / std::log2(1.0 / delta);
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [n, tail] : n_and_tail) {
    if (tail <= 0.0) continue;
    const double x = scale * static_cast<double>(n);
    const double y = -std::log(tail / prefactor);
    sxy += x * y;
    sxx += x * x;
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

double fit_stirling_constant(const std::vector<std::int64_t>& Ns) {
  double C = 0.0;
  for (auto N : Ns) {
    const double Nd = static_cast<double>(N);
    const double gap = std::fabs(reference_mean(N, DeviationMode::plain) -
                                 (std::log2(Nd) - std::log2(std::exp(1.0))));
    C = std::max(C, std::exp2(gap * Nd) / Nd);
  }
  return C;
}

std::pair<double, double> expectation_envelope(std::int64_t N) {
  if (N < 1) throw std::invalid_argument("expectation_envelope: N must be >= 1");
  long double lo = 0.0L, hi = 0.0L;
  for (std::int64_t a = 1; a <= N; ++a) {
    lo += static_cast<long double>(N) * std::log2(static_cast<long double>(a));
    for (std::int64_t b = 1; b <= N; ++b) {
      hi += std::log2(static_cast<long double>(a) + 1.0L / static_cast<long double>(b));
    }
  }
  const long double n2 = static_cast<long double>(N) * static_cast<long double>(N);
  return {static_cast<double>(lo / n2), static_cast<double>(hi / n2)};
}

std::vector<HistogramBin> histogram(const std::vector<double>& values, std::size_t bins) {
  if (bins == 0) throw std::invalid_argument("histogram: bins must be >= 1");
  std::vector<HistogramBin> out;
  if (values.empty()) return out;
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  const double lo = *mn;
  const double width = (*mx - lo) > 0.0 ? (*mx - lo) / static_cast<double>(bins) : 1.0;
  out.resize(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    out[i].lo = lo + width * static_cast<double>(i);
    out[i].hi = lo + width * static_cast<double>(i + 1);
  }
  for (double v : values) {
    auto i = static_cast<std::size_t>((v - lo) / width);
    out[std::min(i, bins - 1)].count++;
  }
  return out;
}

}  // namespace zaremba
