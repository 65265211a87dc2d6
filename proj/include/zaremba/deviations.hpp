#pragma once

// Large deviations of (1/n) log2 q_n for random partial quotients.
//
// plain:  c_j uniform on [N], q_n = K(c_1, ..., c_n).
// signed: c_j uniform on 2*[N] = {2, 4, ..., 2N}, q_n is the denominator of
//         [0; c_1, -c_1, ..., c_n, -c_n] (a word of length 2n).

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace zaremba {

enum class DeviationMode { plain, signed_alternating };

std::string to_string(DeviationMode m);
DeviationMode deviation_mode_from_string(const std::string& s);

// log2 K(c_1..c_n) through log q_j = log q_{j-1} + log(c_j + q_{j-2}/q_{j-1}).
// Entries must be >= 1.
double log_qn_plain(std::span<const std::int64_t> word);

// log2 |q| for the expanded word (c_1, -c_1, ..., c_n, -c_n). Entries must be
// even and >= 2. Uses exact integers up to n = 5000 and the ratio recurrence
// beyond.
double log_qn_signed(std::span<const std::int64_t> word);
double log_qn_signed_exact(std::span<const std::int64_t> word);
double log_qn_signed_float(std::span<const std::int64_t> word);

inline constexpr std::size_t kSignedExactLimit = 5000;

// log2(N!)/N by direct summation, doubled in signed mode.
double reference_mean(std::int64_t N, DeviationMode mode);

struct DeviationConfig {
  std::int64_t N = 100;
  std::int64_t n = 2000;
  std::int64_t trials = 2000;
  double delta = 0.2;
  std::uint64_t seed = 0;
  DeviationMode mode = DeviationMode::plain;
  double kappa = 0.01;
  double K = 1.0;  // constant in the hypothesis N >= K delta^-2 log2(1/delta)
  unsigned workers = 1;
};

struct DeviationReport {
  DeviationConfig config;
  double empirical_tail = 0.0;
  double reference_mean = 0.0;
  double bound = 0.0;  // prefactor * exp(-kappa delta^2 n / log2(1/delta))
  double sample_mean = 0.0;
  double sample_sd = 0.0;
  bool in_hypothesis_range = false;
  std::vector<double> samples;  // (1/n) log2 q_n, trial order
};

// Trial k draws its word from StreamRng(seed, k). Requires trials >= 100,
// N >= 1, n >= 1 and 0 < delta < 1.
DeviationReport run_deviation(const DeviationConfig& config);

// The word drawn for one trial; exposed so tests can replay a sample.
std::vector<std::int64_t> draw_word(std::int64_t N, std::int64_t n, DeviationMode mode,
                                    std::uint64_t seed, std::uint64_t trial);

struct LyapunovEstimate {
  std::int64_t N = 0;
  std::int64_t n = 0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  double per_pair = 0.0;    // mean of (1/n) log2 q over the 2n-letter word
  double per_letter = 0.0;  // the same normalized by the 2n letters
  double reference = 0.0;   // 2 log2(N!)/N
  double ratio_to_log2_N = 0.0;  // per_pair / log2 N
};

LyapunovEstimate lyapunov_estimate(std::int64_t N, std::int64_t n, std::int64_t trials,
                                   std::uint64_t seed, unsigned workers = 1);

// Least-squares kappa for -ln(tail/prefactor) = kappa * delta^2 n / log2(1/delta)
// through the origin. Points with zero tail are skipped; returns 0 if none
// remain.
double fit_kappa(double delta, double prefactor,
                 const std::vector<std::pair<std::int64_t, double>>& n_and_tail);

// Smallest C with |log2(N!)/N - (log2 N - log2 e)| <= log2(C N)/N for every N given.
double fit_stirling_constant(const std::vector<std::int64_t>& Ns);

// Range of N^-2 sum_{a,b <= N} log2(a + theta/b) over theta in [0, 1]; the
// per-step mean of log2 X_j^-1 lies inside it.
std::pair<double, double> expectation_envelope(std::int64_t N);

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  std::int64_t count = 0;
};
std::vector<HistogramBin> histogram(const std::vector<double>& values, std::size_t bins);

}  // namespace zaremba
