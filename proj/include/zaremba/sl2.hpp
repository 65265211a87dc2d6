#pragma once

// Small-scale experiments on 2x2 matrix groups modulo m: the generator
// families, Cayley-graph girth, alternating-product collision counts, the
// modular count (a + c)(b + c) = 1, and p-adic stabilizer sizes.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace zaremba {

// (a b | c d) with entries reduced into [0, m).
struct GroupElement {
  std::array<std::int64_t, 4> e{1, 0, 0, 1};
  std::int64_t modulus = 2;

  GroupElement() = default;
  GroupElement(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d, std::int64_t m);

  std::int64_t a() const { return e[0]; }
  std::int64_t b() const { return e[1]; }
  std::int64_t c() const { return e[2]; }
  std::int64_t d() const { return e[3]; }
  std::int64_t det() const;  // reduced mod m
  std::int64_t trace() const;
  bool is_identity() const { return e == std::array<std::int64_t, 4>{1, 0, 0, 1}; }
  // a + m (b + m (c + m d)); unique per element for m < 2^16.
  std::uint64_t key() const;
  std::string str() const;

  bool operator==(const GroupElement& o) const { return e == o.e && modulus == o.modulus; }
  bool operator<(const GroupElement& o) const { return e < o.e; }
};

GroupElement identity(std::int64_t m);
GroupElement operator*(const GroupElement& x, const GroupElement& y);
// Requires det = +-1 mod m.
GroupElement inverse(const GroupElement& x);

// v^j u^-j = (1, -2j | 2j, 1 - 4j^2) for j = 1..N, determinant 1.
std::vector<GroupElement> generator_family(std::int64_t N, std::int64_t m);
// g_j = (-2j, 1 - 4j^2 | 1, 2j) for j = 1..N, determinant -1.
std::vector<GroupElement> generator_family_det_minus(std::int64_t N, std::int64_t m);
// max over j <= N of the largest |entry| of v^j u^-j over the integers.
std::int64_t generator_entry_bound(std::int64_t N);

struct GirthResult {
  std::int64_t value = 0;  // exact girth, or a lower bound when !exact
  bool exact = false;
  std::int64_t nodes_visited = 0;
  bool memory_guard_hit = false;

  std::string str() const;  // "7" or ">= 13"
};

// Breadth-first search of the Cayley graph of G mod p over G and G^-1. Looks
// for cycles of length <= L_max; stops early with a partial bound once
// `max_nodes` group elements have been stored. Requires p prime <= 2000 and
// N <= 16.
GirthResult girth(std::int64_t p, std::int64_t N, std::int64_t L_max,
                  std::int64_t max_nodes = 20000000);

// The same search over SL2(Z) with exact big integers.
GirthResult girth_over_integers(std::int64_t N, std::int64_t L_max,
                                std::int64_t max_nodes = 2000000);

// Counts reduced words of length <= L in G and G^-1 over Z and checks that their
// products are pairwise distinct.
struct FreenessCheck {
  std::int64_t N = 0;
  std::int64_t L = 0;
  std::int64_t words = 0;
  std::int64_t distinct_products = 0;
  bool all_distinct() const { return words == distinct_products; }
};
FreenessCheck distinct_words_over_integers(std::int64_t N, std::int64_t L);

struct CosetMass {
  std::string family;   // borel, split-normalizer, nonsplit-normalizer, cyclic
  std::string subgroup; // label of the subgroup
  std::string coset;    // label of the heaviest coset
  std::uint64_t mass = 0;
};

struct WalkStats {
  std::int64_t p = 0;
  std::int64_t N = 0;
  std::int64_t m = 0;
  GirthResult girth;
  std::vector<std::pair<GroupElement, std::uint64_t>> r_counts;  // sorted by element
  std::uint64_t total = 0;   // |G|^{2m}
  std::uint64_t energy = 0;  // T_{2m} = sum r^2
  std::uint64_t group_order = 0;  // |SL2(F_p)|
  double energy_ratio = 0.0;      // T_{2m} / |G|^{4m}
  double cauchy_schwarz_floor = 0.0;  // |G|^{4m} / |SL2(F_p)|
  CosetMass max_coset;            // heaviest coset over the catalog
  std::uint64_t max_coset_mass_num = 0;  // max_coset.mass
  std::uint64_t max_coset_mass_den = 0;  // total
  double K_estimate = 0.0;        // total / max mass, over the catalog only
  std::int64_t subgroups_checked = 0;
};

struct WalkOptions {
  std::int64_t girth_L_max = 12;
  std::int64_t split_samples = 16;
  std::int64_t cyclic_samples = 8;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

// r_{G,2m}(x) = #{(s_1..s_2m) in G^2m : s_1 s_2^-1 ... s_2m^-1 = x} by exhaustive
// convolution. Requires p prime, 3 <= p <= 211, m >= 1, |G|^{2m} <= 10^8.
WalkStats walk_stats(std::int64_t p, std::int64_t N, std::int64_t m,
                     const WalkOptions& options = {});

struct ActionCount {
  std::int64_t count = 0;
  double main_term = 0.0;  // N |A| |B| / p
  double deviation = 0.0;  // |count - main_term| / (sqrt(|A||B|) N)
};

// #{(a, b, j) : a in A, b in B, j in [N], (a + 2j)(b + 2j) = 1 mod p}, counted
// through a = g_j . b. A and B are sets of residues in [0, p).
ActionCount action_count(std::int64_t p, const std::vector<std::int64_t>& A,
                         const std::vector<std::int64_t>& B, std::int64_t N);

// Brute-force triple loop over (a, b, j); the reference for action_count.
std::int64_t action_count_bruteforce(std::int64_t p, const std::vector<std::int64_t>& A,
                                     const std::vector<std::int64_t>& B, std::int64_t N);

struct ActionExperiment {
  std::int64_t p = 0;
  std::int64_t N = 0;
  std::int64_t set_size = 0;
  std::int64_t pairs = 0;
  std::uint64_t seed = 0;
  double mean_deviation = 0.0;
  double max_deviation = 0.0;
  std::vector<ActionCount> counts;  // pair order
};

// Pair k draws A then B (distinct residues, uniform) from StreamRng(seed, k).
ActionExperiment action_experiment(std::int64_t p, std::int64_t N, std::int64_t set_size,
                                   std::int64_t pairs, std::uint64_t seed, unsigned workers = 1);

// Slope of log mean deviation against log N, negated; positive when the
// deviation decays.
double fit_action_kappa(const std::vector<ActionExperiment>& runs);

struct PAdicDecomposition {
  GroupElement g;
  std::int64_t p = 0;
  std::int64_t n = 0;
  std::int64_t half_trace = 0;  // Tr g / 2 mod p^n
  std::int64_t r = 0;
  // (x, y | z, -x) with entries in [0, p^{n-r}); zero when central.
  std::array<std::int64_t, 3> gprime{0, 0, 0};
  bool central = false;

  GroupElement reconstruct() const;  // half_trace I + p^r gprime mod p^n
  // Tr g = +-2 mod p^{min(n, 2r)}
  bool trace_congruence() const;
};

// Requires p odd prime and det g = 1 mod p^n. Central elements get r = n.
PAdicDecomposition padic_decompose(const GroupElement& g, std::int64_t p, std::int64_t n);

// All of SL2(Z / mZ), sorted. Rejects m > 243.
const std::vector<GroupElement>& special_linear_group(std::int64_t m);

struct StabilizerSizes {
  std::int64_t r = 0;
  std::uint64_t centralizer = 0;
  std::uint64_t normalizer = 0;     // normalizer of the centralizer
  std::uint64_t centralizer_bound = 0;  // 8 p^{n+2r}, saturating
  std::uint64_t normalizer_bound = 0;   // 300 p^{n+3r}, saturating
  bool within_bounds() const {
    return centralizer <= centralizer_bound && normalizer <= normalizer_bound;
  }
};

// Exhaustive over SL2(Z/p^n Z). Requires p^n <= 243.
StabilizerSizes stab_sizes(const GroupElement& g, std::int64_t p, std::int64_t n);

struct StabilizerSweep {
  std::int64_t p = 0;
  std::int64_t n = 0;
  std::uint64_t group_order = 0;
  std::uint64_t elements_checked = 0;
  std::uint64_t violations = 0;
  std::uint64_t distinct_centralizers = 0;
  double max_centralizer_ratio = 0.0;  // centralizer / bound
  double max_normalizer_ratio = 0.0;
  std::vector<std::string> examples;   // first few violations
};

// stab_sizes for every element of SL2(Z/p^n Z), with centralizers and their
// normalizers shared between elements that have the same one. Requires p^n <= 27.
StabilizerSweep stab_sweep(std::int64_t p, std::int64_t n, unsigned workers = 1);

}  // namespace zaremba
