#include "zaremba/sl2.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "zaremba/errors.hpp"
#include "zaremba/number_theory.hpp"
#include "zaremba/parallel.hpp"
#include "zaremba/rng.hpp"

namespace zaremba {

// ---------------------------------------------------------------- elements

GroupElement::GroupElement(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d,
                           std::int64_t m)
    : e{mod_floor(a, m), mod_floor(b, m), mod_floor(c, m), mod_floor(d, m)}, modulus(m) {
  if (m < 2) throw std::invalid_argument("GroupElement: modulus must be >= 2");
}

std::int64_t GroupElement::det() const {
  const __int128 v = static_cast<__int128>(e[0]) * e[3] - static_cast<__int128>(e[1]) * e[2];
  return mod_floor(static_cast<std::int64_t>(v % modulus), modulus);
}

std::int64_t GroupElement::trace() const { return (e[0] + e[3]) % modulus; }

std::uint64_t GroupElement::key() const {
  const auto m = static_cast<std::uint64_t>(modulus);
  return static_cast<std::uint64_t>(e[0]) +
         m * (static_cast<std::uint64_t>(e[1]) +
              m * (static_cast<std::uint64_t>(e[2]) + m * static_cast<std::uint64_t>(e[3])));
}

std::string GroupElement::str() const {
  return "(" + std::to_string(e[0]) + " " + std::to_string(e[1]) + " | " + std::to_string(e[2]) +
         " " + std::to_string(e[3]) + ")";
}

GroupElement identity(std::int64_t m) { return GroupElement(1, 0, 0, 1, m); }

GroupElement operator*(const GroupElement& x, const GroupElement& y) {
  if (x.modulus != y.modulus) throw std::invalid_argument("GroupElement: modulus mismatch");
  const std::int64_t m = x.modulus;
  auto dot = [m](std::int64_t p, std::int64_t q, std::int64_t r, std::int64_t s) {
    const __int128 v = static_cast<__int128>(p) * q + static_cast<__int128>(r) * s;
    return static_cast<std::int64_t>(v % m);
  };
  GroupElement z;
  z.modulus = m;
  z.e = {dot(x.e[0], y.e[0], x.e[1], y.e[2]), dot(x.e[0], y.e[1], x.e[1], y.e[3]),
         dot(x.e[2], y.e[0], x.e[3], y.e[2]), dot(x.e[2], y.e[1], x.e[3], y.e[3])};
  return z;
}

GroupElement inverse(const GroupElement& x) {
  const std::int64_t m = x.modulus;
  const std::int64_t det = x.det();
  std::int64_t s;
  if (det == 1 % m) {
    s = 1;
  } else if (det == m - 1) {
    s = -1;
  } else {
    throw std::invalid_argument("inverse: determinant is not +-1");
  }
  return GroupElement(s * x.d(), -s * x.b(), -s * x.c(), s * x.a(), m);
}

namespace {

GroupElement from_key(std::uint64_t k, std::int64_t m) {
  const auto um = static_cast<std::uint64_t>(m);
  GroupElement g;
  g.modulus = m;
  for (auto& v : g.e) {
    v = static_cast<std::int64_t>(k % um);
    k /= um;
  }
  return g;
}

std::int64_t ipow(std::int64_t b, std::int64_t n) {
  std::int64_t r = 1;
  for (std::int64_t i = 0; i < n; ++i) r *= b;
  return r;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  const unsigned __int128 v = static_cast<unsigned __int128>(a) * b;
  return v > UINT64_MAX ? UINT64_MAX : static_cast<std::uint64_t>(v);
}

std::uint64_t sat_pow(std::uint64_t b, std::int64_t n) {
  std::uint64_t r = 1;
  for (std::int64_t i = 0; i < n; ++i) r = sat_mul(r, b);
  return r;
}

void require_prime(std::int64_t p, const char* who) {
  if (p < 2 || !is_prime(static_cast<std::uint64_t>(p))) {
    throw std::invalid_argument(std::string(who) + ": p must be prime");
  }
}

}  // namespace

std::vector<GroupElement> generator_family(std::int64_t N, std::int64_t m) {
  if (N < 1) throw std::invalid_argument("generator_family: N must be >= 1");
  if (m < 2) throw std::invalid_argument("generator_family: modulus must be >= 2");
  std::vector<GroupElement> out;
  for (std::int64_t j = 1; j <= N; ++j) {
    out.emplace_back(1, -2 * j, 2 * j, 1 - 4 * j * j, m);
  }
  return out;
}

std::vector<GroupElement> generator_family_det_minus(std::int64_t N, std::int64_t m) {
  if (N < 1) throw std::invalid_argument("generator_family: N must be >= 1");
  if (m < 2) throw std::invalid_argument("generator_family: modulus must be >= 2");
  std::vector<GroupElement> out;
  for (std::int64_t j = 1; j <= N; ++j) {
    out.emplace_back(-2 * j, 1 - 4 * j * j, 1, 2 * j, m);
  }
  return out;
}

std::int64_t generator_entry_bound(std::int64_t N) {
  // v^j = (1 0 | 2j 1), u^-j = (1 -2j | 0 1).
  std::int64_t best = 0;
  for (std::int64_t j = 1; j <= N; ++j) {
    const std::int64_t v[4] = {1, 0, 2 * j, 1};
    const std::int64_t u[4] = {1, -2 * j, 0, 1};
    const std::int64_t prod[4] = {v[0] * u[0] + v[1] * u[2], v[0] * u[1] + v[1] * u[3],
                                  v[2] * u[0] + v[3] * u[2], v[2] * u[1] + v[3] * u[3]};
    for (auto x : prod) best = std::max(best, std::abs(x));
  }
  return best;
}

// ---------------------------------------------------------------- girth

std::string GirthResult::str() const {
  return exact ? std::to_string(value) : ">= " + std::to_string(value);
}

namespace {

// Shortest cycle through the identity in a Cayley graph; in a vertex-transitive
// graph that is the girth. Letters 0..k-1 are the generators, k..2k-1 their
// inverses. Key must be hashable.
template <typename Elem, typename Key, typename KeyFn, typename MulFn>
GirthResult bfs_girth(const Elem& start, const std::vector<Elem>& letters, std::int64_t L_max,
                      std::int64_t max_nodes, KeyFn key_of, MulFn mul) {
  const int k = static_cast<int>(letters.size() / 2);
  auto inv_letter = [k](int l) { return l < k ? l + k : l - k; };
  struct Node {
    int depth;
    int letter;
  };
  std::unordered_map<Key, Node> seen;
  struct Frontier {
    Elem elem;
    int letter;
  };
  std::vector<Frontier> frontier{{start, -1}};
  seen.emplace(key_of(start), Node{0, -1});

  GirthResult result;
  std::int64_t best = -1;
  for (int depth = 0;; ++depth) {
    // Levels below `depth` are fully expanded without a cycle, so every cycle
    // has length >= 2 depth + 1.
    if (best >= 0 && best <= 2 * depth + 1) break;
    if (best < 0 && 2 * depth + 1 > L_max) {
      result.value = 2 * depth + 1;
      result.exact = false;
      result.nodes_visited = static_cast<std::int64_t>(seen.size());
      return result;
    }
    if (frontier.empty()) break;
    std::vector<Frontier> next;
    for (const auto& f : frontier) {
      for (int l = 0; l < 2 * k; ++l) {
        if (f.letter >= 0 && l == inv_letter(f.letter)) continue;
        Elem w = mul(f.elem, letters[static_cast<std::size_t>(l)]);
        Key kw = key_of(w);
        auto it = seen.find(kw);
        if (it == seen.end()) {
          if (static_cast<std::int64_t>(seen.size()) >= max_nodes) {
            result.memory_guard_hit = true;
            result.nodes_visited = static_cast<std::int64_t>(seen.size());
            if (best == 2 * depth + 1) {
              result.value = best;
              result.exact = true;
            } else {
              result.value = 2 * depth + 1;
              result.exact = false;
            }
            return result;
          }
          seen.emplace(std::move(kw), Node{depth + 1, l});
          next.push_back({std::move(w), l});
        } else {
          const std::int64_t len = depth + 1 + it->second.depth;
          if (best < 0 || len < best) best = len;
        }
      }
    }
    frontier = std::move(next);
  }
  result.nodes_visited = static_cast<std::int64_t>(seen.size());
  if (best < 0) {
    // The whole (finite) group was exhausted without a second path.
    result.value = L_max + 1;
    result.exact = false;
  } else {
    result.value = best;
    result.exact = true;
  }
  return result;
}

struct IntMat {
  mpz_class a, b, c, d;
};

IntMat mul(const IntMat& x, const IntMat& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
          x.c * y.b + x.d * y.d};
}

std::string int_key(const IntMat& x) {
  return x.a.get_str(16) + "," + x.b.get_str(16) + "," + x.c.get_str(16) + "," + x.d.get_str(16);
}

std::vector<IntMat> integer_letters(std::int64_t N) {
  std::vector<IntMat> gens, invs;
  for (long j = 1; j <= N; ++j) {
    gens.push_back({1, -2 * j, 2 * j, 1 - 4 * j * j});
    invs.push_back({1 - 4 * j * j, 2 * j, -2 * j, 1});
  }
  gens.insert(gens.end(), invs.begin(), invs.end());
  return gens;
}

}  // namespace

GirthResult girth(std::int64_t p, std::int64_t N, std::int64_t L_max, std::int64_t max_nodes) {
  require_prime(p, "girth");
  if (p > 2000) throw std::invalid_argument("girth: p must be <= 2000");
  if (N < 1 || N > 16) throw std::invalid_argument("girth: N must be in [1, 16]");
  if (L_max < 1) throw std::invalid_argument("girth: L_max must be >= 1");
  auto letters = generator_family(N, p);
  for (std::int64_t j = 0; j < N; ++j) letters.push_back(inverse(letters[static_cast<std::size_t>(j)]));
  return bfs_girth<GroupElement, std::uint64_t>(
      identity(p), letters, L_max, max_nodes, [](const GroupElement& g) { return g.key(); },
      [](const GroupElement& x, const GroupElement& y) { return x * y; });
}

GirthResult girth_over_integers(std::int64_t N, std::int64_t L_max, std::int64_t max_nodes) {
  if (N < 1 || N > 16) throw std::invalid_argument("girth: N must be in [1, 16]");
  if (L_max < 1) throw std::invalid_argument("girth: L_max must be >= 1");
  const auto letters = integer_letters(N);
  return bfs_girth<IntMat, std::string>(
      IntMat{1, 0, 0, 1}, letters, L_max, max_nodes, int_key,
      [](const IntMat& x, const IntMat& y) { return mul(x, y); });
}

FreenessCheck distinct_words_over_integers(std::int64_t N, std::int64_t L) {
  if (N < 1 || N > 16) throw std::invalid_argument("freeness: N must be in [1, 16]");
  if (L < 0) throw std::invalid_argument("freeness: L must be >= 0");
  double words = 1.0, layer = 2.0 * static_cast<double>(N);
  for (std::int64_t l = 1; l <= L; ++l, layer *= 2.0 * static_cast<double>(N) - 1.0) words += layer;
  if (words > 5e6) throw BudgetExceeded("freeness: more than 5e6 words");
  const auto letters = integer_letters(N);
  const int k = static_cast<int>(N);
  FreenessCheck out;
  out.N = N;
  out.L = L;
  std::unordered_set<std::string> products;
  std::vector<IntMat> stack{IntMat{1, 0, 0, 1}};
  std::vector<int> path;
  // Depth-first over reduced words; each word is counted once.
  auto visit = [&](auto&& self) -> void {
    ++out.words;
    products.insert(int_key(stack.back()));
    if (static_cast<std::int64_t>(path.size()) == L) return;
    for (int l = 0; l < 2 * k; ++l) {
      if (!path.empty() && l == (path.back() < k ? path.back() + k : path.back() - k)) continue;
      stack.push_back(mul(stack.back(), letters[static_cast<std::size_t>(l)]));
      path.push_back(l);
      self(self);
      path.pop_back();
      stack.pop_back();
    }
  };
  visit(visit);
  out.distinct_products = static_cast<std::int64_t>(products.size());
  return out;
}

// ---------------------------------------------------------------- walks

namespace {

using CountMap = std::unordered_map<std::uint64_t, std::uint64_t>;

// Points of P^1(F_p): x in [0, p) is (x : 1), p is (1 : 0).
struct Projective {
  std::int64_t p;
  std::vector<std::int64_t> inv;

  explicit Projective(std::int64_t prime) : p(prime), inv(static_cast<std::size_t>(prime), 0) {
    for (std::int64_t x = 1; x < p; ++x) inv[static_cast<std::size_t>(x)] = modinv(x, p);
  }

  std::int64_t act(const GroupElement& g, std::int64_t x) const {
    std::int64_t num, den;
    if (x == p) {
      num = g.a();
      den = g.c();
    } else {
      num = (g.a() * x + g.b()) % p;
      den = (g.c() * x + g.d()) % p;
    }
    if (den == 0) return p;
    return num * inv[static_cast<std::size_t>(den)] % p;
  }
};

// F_{p^2} = F_p[s] with s^2 = eps, eps a non-residue. (u, v) is u + v s.
struct Fp2 {
  std::int64_t p;
  std::int64_t eps;

  explicit Fp2(std::int64_t prime) : p(prime), eps(2) {
    while (powmod(static_cast<std::uint64_t>(eps), static_cast<std::uint64_t>((p - 1) / 2),
                  static_cast<std::uint64_t>(p)) != static_cast<std::uint64_t>(p - 1)) {
      ++eps;
    }
  }

  using E = std::pair<std::int64_t, std::int64_t>;
  E add(E x, E y) const { return {(x.first + y.first) % p, (x.second + y.second) % p}; }
  E scale(std::int64_t c, E x) const { return {c * x.first % p, c * x.second % p}; }
  E mul(E x, E y) const {
    return {(x.first * y.first + eps * (x.second * y.second % p)) % p,
            (x.first * y.second + x.second * y.first) % p};
  }
  E inv(E x) const {
    const std::int64_t norm =
        mod_floor(x.first * x.first - eps * (x.second * x.second % p), p);
    const std::int64_t ni = modinv(norm, p);
    return {x.first * ni % p, mod_floor(-x.second, p) * ni % p};
  }
  // (a z + b) / (c z + d); z outside F_p keeps the denominator nonzero.
  E act(const GroupElement& g, E z) const {
    const E num = add(scale(g.a(), z), {g.b(), 0});
    const E den = add(scale(g.c(), z), {g.d(), 0});
    return mul(num, inv(den));
  }
  std::int64_t encode(E z) const { return z.first + p * z.second; }
  std::int64_t conj_pair_label(E z) const {
    return std::min(encode(z), encode({z.first, mod_floor(-z.second, p)}));
  }
};

template <typename LabelFn>
std::pair<std::uint64_t, std::int64_t> heaviest(const std::vector<std::pair<GroupElement, std::uint64_t>>& r,
                                                 LabelFn label) {
  std::unordered_map<std::int64_t, std::uint64_t> mass;
  for (const auto& [g, c] : r) mass[label(g)] += c;
  std::uint64_t best = 0;
  std::int64_t best_label = 0;
  for (const auto& [l, m] : mass) {
    if (m > best || (m == best && l < best_label)) {
      best = m;
      best_label = l;
    }
  }
  return {best, best_label};
}

std::uint64_t sl2_order_prime(std::int64_t p) {
  const auto up = static_cast<std::uint64_t>(p);
  return up * (up * up - 1);
}

GroupElement random_sl2(StreamRng& rng, std::int64_t p) {
  for (;;) {
    const std::int64_t a = rng.uniform(1, p - 1);
    const std::int64_t b = rng.uniform(0, p - 1);
    const std::int64_t c = rng.uniform(0, p - 1);
    GroupElement g(a, b, c, (1 + b * c) % p * modinv(a, p), p);
    if (!g.is_identity() && !(g == GroupElement(-1, 0, 0, -1, p))) return g;
  }
}

}  // namespace

WalkStats walk_stats(std::int64_t p, std::int64_t N, std::int64_t m, const WalkOptions& options) {
  require_prime(p, "walk_stats");
  if (p < 3 || p > 211) throw std::invalid_argument("walk_stats: p must lie in [3, 211]");
  if (N < 1) throw std::invalid_argument("walk_stats: N must be >= 1");
  if (m < 1) throw std::invalid_argument("walk_stats: m must be >= 1");
  const double work = std::pow(static_cast<double>(N), 2.0 * static_cast<double>(m));
  if (work > 1e8) throw BudgetExceeded("walk_stats: |G|^{2m} exceeds 10^8");

  WalkStats ws;
  ws.p = p;
  ws.N = N;
  ws.m = m;
  ws.group_order = sl2_order_prime(p);
  ws.girth = girth(p, N, options.girth_L_max);

  const auto gens = generator_family(N, p);
  std::vector<GroupElement> invs;
  for (const auto& g : gens) invs.push_back(inverse(g));

  // Step k multiplies on the right by s (k odd) or s^-1 (k even). The last
  // step is split across workers by chunks of the sorted previous level.
  CountMap level{{identity(p).key(), 1}};
  for (std::int64_t step = 1; step <= 2 * m; ++step) {
    const auto& letters = step % 2 == 1 ? gens : invs;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> prev(level.begin(), level.end());
    std::sort(prev.begin(), prev.end());
    const auto ranges = split_range(prev.size(), std::max(1u, options.workers) * 4);
    auto parts = parallel_map(ranges.size(), options.workers, [&](std::size_t i) {
      CountMap local;
      for (std::size_t k = ranges[i].first; k < ranges[i].second; ++k) {
        const GroupElement x = from_key(prev[k].first, p);
        for (const auto& s : letters) local[(x * s).key()] += prev[k].second;
      }
      return local;
    });
    level.clear();
    for (const auto& part : parts) {
      for (const auto& [k, c] : part) level[k] += c;
    }
  }

  for (const auto& [k, c] : level) ws.r_counts.emplace_back(from_key(k, p), c);
  std::sort(ws.r_counts.begin(), ws.r_counts.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  for (const auto& [g, c] : ws.r_counts) {
    ws.total += c;
    ws.energy += c * c;
  }
  const std::uint64_t expected = sat_pow(static_cast<std::uint64_t>(N), 2 * m);
  if (ws.total != expected) {
    throw InvariantViolation("walk_stats: counts sum to " + std::to_string(ws.total) +
                             " instead of |G|^{2m} = " + std::to_string(expected));
  }
  const double total = static_cast<double>(ws.total);
  ws.energy_ratio = static_cast<double>(ws.energy) / (total * total);
  ws.cauchy_schwarz_floor = total * total / static_cast<double>(ws.group_order);

  // Coset catalog. Left cosets x Gamma of a point stabilizer are labelled by
  // the image x . point.
  const Projective proj(p);
  const Fp2 field(p);
  StreamRng rng(options.seed, 0x5e7);
  auto consider = [&](const std::string& family, const std::string& subgroup,
                      std::pair<std::uint64_t, std::int64_t> h, const std::string& coset) {
    ++ws.subgroups_checked;
    if (h.first > ws.max_coset.mass) ws.max_coset = {family, subgroup, coset, h.first};
  };

  for (std::int64_t l = 0; l <= p; ++l) {
    const auto h = heaviest(ws.r_counts, [&](const GroupElement& g) { return proj.act(g, l); });
    consider("borel", "Stab(" + std::to_string(l) + ")", h, "point " + std::to_string(h.second));
  }
  for (std::int64_t s = 0; s < options.split_samples; ++s) {
    std::int64_t l1 = rng.uniform(0, p), l2 = rng.uniform(0, p);
    if (s == 0) {
      l1 = 0;
      l2 = p;
    }
    if (l1 == l2) continue;
    const auto h = heaviest(ws.r_counts, [&](const GroupElement& g) {
      const std::int64_t x = proj.act(g, l1), y = proj.act(g, l2);
      return std::min(x, y) * (p + 1) + std::max(x, y);
    });
    consider("split-normalizer",
             "Stab{" + std::to_string(l1) + "," + std::to_string(l2) + "}", h,
             "pair " + std::to_string(h.second / (p + 1)) + "," + std::to_string(h.second % (p + 1)));
  }
  for (std::int64_t s = 0; s < options.split_samples; ++s) {
    const Fp2::E z{rng.uniform(0, p - 1), rng.uniform(1, p - 1)};
    const auto h = heaviest(ws.r_counts,
                            [&](const GroupElement& g) { return field.conj_pair_label(field.act(g, z)); });
    consider("nonsplit-normalizer",
             "Stab{" + std::to_string(z.first) + "+" + std::to_string(z.second) + "s}", h,
             "label " + std::to_string(h.second));
  }
  for (std::int64_t s = 0; s < options.cyclic_samples; ++s) {
    const GroupElement gamma = random_sl2(rng, p);
    std::vector<GroupElement> powers{identity(p)};
    for (GroupElement x = gamma; !x.is_identity(); x = x * gamma) powers.push_back(x);
    if (static_cast<double>(powers.size()) * static_cast<double>(ws.r_counts.size()) > 4e8) {
      continue;
    }
    const auto h = heaviest(ws.r_counts, [&](const GroupElement& g) {
      std::uint64_t best = UINT64_MAX;
      for (const auto& x : powers) best = std::min(best, (g * x).key());
      return static_cast<std::int64_t>(best);
    });
    consider("cyclic", "<" + gamma.str() + ">", h,
             from_key(static_cast<std::uint64_t>(h.second), p).str() + " Gamma");
  }

  ws.max_coset_mass_num = ws.max_coset.mass;
  ws.max_coset_mass_den = ws.total;
  ws.K_estimate = ws.max_coset.mass > 0 ? total / static_cast<double>(ws.max_coset.mass) : 0.0;
  return ws;
}

// ---------------------------------------------------------------- action count

namespace {

void check_residues(std::int64_t p, const std::vector<std::int64_t>& S, const char* name) {
  for (auto x : S) {
    if (x < 0 || x >= p) {
      throw std::invalid_argument(std::string("action_count: ") + name + " has entries outside [0, p)");
    }
  }
}

}  // namespace

ActionCount action_count(std::int64_t p, const std::vector<std::int64_t>& A,
                         const std::vector<std::int64_t>& B, std::int64_t N) {
  require_prime(p, "action_count");
  if (N < 1) throw std::invalid_argument("action_count: N must be >= 1");
  check_residues(p, A, "A");
  check_residues(p, B, "B");
  std::vector<char> in_a(static_cast<std::size_t>(p), 0);
  for (auto a : A) in_a[static_cast<std::size_t>(a)] = 1;

  ActionCount out;
  const auto gs = generator_family_det_minus(N, p);
  for (const auto& g : gs) {
    for (auto b : B) {
      // g . b = (g_a b + g_b) / (b + 2j); the pole b = -2j has no image in F_p.
      const std::int64_t den = (g.c() * b + g.d()) % p;
      if (den == 0) continue;
      const std::int64_t a = (g.a() * b + g.b()) % p * modinv(den, p) % p;
      out.count += in_a[static_cast<std::size_t>(a)];
    }
  }
  const double na = static_cast<double>(A.size()), nb = static_cast<double>(B.size());
  out.main_term = static_cast<double>(N) * na * nb / static_cast<double>(p);
  out.deviation = (na > 0 && nb > 0)
                      ? std::fabs(static_cast<double>(out.count) - out.main_term) /
                            (std::sqrt(na * nb) * static_cast<double>(N))
                      : 0.0;
  return out;
}

std::int64_t action_count_bruteforce(std::int64_t p, const std::vector<std::int64_t>& A,
                                     const std::vector<std::int64_t>& B, std::int64_t N) {
  std::int64_t count = 0;
  for (auto a : A) {
    for (auto b : B) {
      for (std::int64_t j = 1; j <= N; ++j) {
        const std::int64_t c = 2 * j % p;
        if ((a + c) % p * ((b + c) % p) % p == 1 % p) ++count;
      }
    }
  }
  return count;
}

namespace {

std::vector<std::int64_t> random_subset(StreamRng& rng, std::int64_t p, std::int64_t size) {
  // Partial Fisher-Yates over [0, p).
  std::vector<std::int64_t> pool(static_cast<std::size_t>(p));
  std::iota(pool.begin(), pool.end(), 0);
  for (std::int64_t i = 0; i < size; ++i) {
    const auto j = static_cast<std::size_t>(rng.uniform(i, p - 1));
    std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
  }
  pool.resize(static_cast<std::size_t>(size));
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

ActionExperiment action_experiment(std::int64_t p, std::int64_t N, std::int64_t set_size,
                                   std::int64_t pairs, std::uint64_t seed, unsigned workers) {
  require_prime(p, "action_experiment");
  if (set_size < 1 || set_size > p) {
    throw std::invalid_argument("action_experiment: set size must lie in [1, p]");
  }
  if (pairs < 1) throw std::invalid_argument("action_experiment: pairs must be >= 1");
  ActionExperiment ex;
  ex.p = p;
  ex.N = N;
  ex.set_size = set_size;
  ex.pairs = pairs;
  ex.seed = seed;
  ex.counts = parallel_map(static_cast<std::size_t>(pairs), workers, [&](std::size_t k) {
    StreamRng rng(seed, k);
    const auto A = random_subset(rng, p, set_size);
    const auto B = random_subset(rng, p, set_size);
    return action_count(p, A, B, N);
  });
  double sum = 0.0;
  for (const auto& c : ex.counts) {
    sum += c.deviation;
    ex.max_deviation = std::max(ex.max_deviation, c.deviation);
  }
  ex.mean_deviation = sum / static_cast<double>(pairs);
  return ex;
}

double fit_action_kappa(const std::vector<ActionExperiment>& runs) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double n = 0;
  for (const auto& r : runs) {
    if (r.mean_deviation <= 0.0) continue;
    const double x = std::log(static_cast<double>(r.N));
    const double y = std::log(r.mean_deviation);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    n += 1;
  }
  if (n < 2) return 0.0;
  const double den = n * sxx - sx * sx;
  if (den == 0.0) return 0.0;
  return -(n * sxy - sx * sy) / den;
}

// ---------------------------------------------------------------- p-adic

GroupElement PAdicDecomposition::reconstruct() const {
  const std::int64_t m = ipow(p, n);
  const std::int64_t s = ipow(p, r);
  return GroupElement(half_trace + s * gprime[0], s * gprime[1], s * gprime[2],
                      half_trace - s * gprime[0], m);
}

bool PAdicDecomposition::trace_congruence() const {
  const std::int64_t mod = ipow(p, std::min(n, 2 * r));
  const std::int64_t tr = g.trace();
  return mod_floor(tr - 2, mod) == 0 || mod_floor(tr + 2, mod) == 0;
}

PAdicDecomposition padic_decompose(const GroupElement& g, std::int64_t p, std::int64_t n) {
  if (p == 2 || p < 2 || !is_prime(static_cast<std::uint64_t>(p))) {
    throw std::invalid_argument("padic_decompose: p must be an odd prime");
  }
  if (n < 1) throw std::invalid_argument("padic_decompose: n must be >= 1");
  const std::int64_t m = ipow(p, n);
  if (g.modulus != m) throw std::invalid_argument("padic_decompose: element is not mod p^n");
  if (g.det() != 1 % m) throw std::invalid_argument("padic_decompose: det g is not 1");

  PAdicDecomposition d;
  d.g = g;
  d.p = p;
  d.n = n;
  d.half_trace = (g.a() + g.d()) % m * modinv(2, m) % m;
  const std::int64_t x = mod_floor(g.a() - d.half_trace, m);
  const std::int64_t entries[3] = {x, g.b(), g.c()};
  auto val = [&](std::int64_t v) {
    if (v == 0) return n;
    std::int64_t k = 0;
    while (v % p == 0) {
      v /= p;
      ++k;
    }
    return k;
  };
  d.r = std::min({val(entries[0]), val(entries[1]), val(entries[2])});
  d.central = d.r == n;
  if (!d.central) {
    const std::int64_t s = ipow(p, d.r);
    for (int i = 0; i < 3; ++i) d.gprime[static_cast<std::size_t>(i)] = entries[i] / s;
  }
  if (!(d.reconstruct() == g)) {
    throw InvariantViolation("padic_decompose: reconstruction differs for " + g.str());
  }
  return d;
}

// ---------------------------------------------------------------- stabilizers

const std::vector<GroupElement>& special_linear_group(std::int64_t m) {
  if (m < 2 || m > 243) throw BudgetExceeded("special_linear_group: modulus must lie in [2, 243]");
  static std::mutex mu;
  static std::unordered_map<std::int64_t, std::vector<GroupElement>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;

  std::vector<GroupElement> out;
  for (std::int64_t a = 0; a < m; ++a) {
    if (gcd64(a, m) == 1) {
      const std::int64_t ai = modinv(a, m);
      for (std::int64_t b = 0; b < m; ++b) {
        for (std::int64_t c = 0; c < m; ++c) out.emplace_back(a, b, c, (1 + b * c) % m * ai, m);
      }
    } else {
      // ad - bc = 1 with a a non-unit forces b and c to be units.
      for (std::int64_t b = 0; b < m; ++b) {
        if (gcd64(b, m) != 1) continue;
        const std::int64_t bi = modinv(b, m);
        for (std::int64_t d = 0; d < m; ++d) out.emplace_back(a, b, (a * d - 1) % m * bi, d, m);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return cache.emplace(m, std::move(out)).first->second;
}

namespace {

struct SubgroupInfo {
  std::uint64_t centralizer = 0;
  std::uint64_t normalizer = 0;
};

std::vector<std::uint64_t> centralizer_keys(const GroupElement& g,
                                            const std::vector<GroupElement>& group) {
  std::vector<std::uint64_t> keys;
  for (const auto& h : group) {
    if (g * h == h * g) keys.push_back(h.key());
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

// Size of the normalizer of the subgroup C (given by sorted keys). h
// normalizes C iff it conjugates a generating set of C into C.
std::uint64_t normalizer_size(const std::vector<std::uint64_t>& C, std::int64_t m,
                              const std::vector<GroupElement>& group) {
  std::unordered_set<std::uint64_t> members(C.begin(), C.end());
  std::vector<GroupElement> gens;
  std::unordered_set<std::uint64_t> generated{identity(m).key()};
  for (auto k : C) {
    if (generated.count(k)) continue;
    gens.push_back(from_key(k, m));
    std::vector<GroupElement> queue;
    for (auto x : generated) queue.push_back(from_key(x, m));
    while (!queue.empty()) {
      const GroupElement x = queue.back();
      queue.pop_back();
      for (const auto& s : gens) {
        const GroupElement y = x * s;
        if (generated.insert(y.key()).second) queue.push_back(y);
      }
    }
  }
  if (generated.size() != C.size()) {
    throw InvariantViolation("normalizer_size: centralizer is not closed");
  }
  std::uint64_t count = 0;
  for (const auto& h : group) {
    const GroupElement hi = inverse(h);
    bool ok = true;
    for (const auto& s : gens) {
      if (!members.count((h * s * hi).key())) {
        ok = false;
        break;
      }
    }
    if (ok) ++count;
  }
  return count;
}

void fill_bounds(StabilizerSizes& s, std::int64_t p, std::int64_t n) {
  const auto up = static_cast<std::uint64_t>(p);
  s.centralizer_bound = sat_mul(8, sat_pow(up, n + 2 * s.r));
  s.normalizer_bound = sat_mul(300, sat_pow(up, n + 3 * s.r));
}

}  // namespace

StabilizerSizes stab_sizes(const GroupElement& g, std::int64_t p, std::int64_t n) {
  const auto d = padic_decompose(g, p, n);
  const std::int64_t m = ipow(p, n);
  if (m > 243) throw BudgetExceeded("stab_sizes: p^n must be <= 243");
  const auto& group = special_linear_group(m);
  StabilizerSizes s;
  s.r = d.r;
  const auto C = centralizer_keys(g, group);
  s.centralizer = C.size();
  s.normalizer = normalizer_size(C, m, group);
  fill_bounds(s, p, n);
  return s;
}

StabilizerSweep stab_sweep(std::int64_t p, std::int64_t n, unsigned workers) {
  if (p == 2 || p < 2 || !is_prime(static_cast<std::uint64_t>(p))) {
    throw std::invalid_argument("stab_sweep: p must be an odd prime");
  }
  if (n < 1) throw std::invalid_argument("stab_sweep: n must be >= 1");
  const std::int64_t m = ipow(p, n);
  if (m > 27) throw BudgetExceeded("stab_sweep: p^n must be <= 27");
  const auto& group = special_linear_group(m);

  StabilizerSweep sw;
  sw.p = p;
  sw.n = n;
  sw.group_order = group.size();

  // The centralizer of g depends only on (r, g' mod p^{n-r}).
  std::vector<PAdicDecomposition> decs;
  decs.reserve(group.size());
  std::map<std::array<std::int64_t, 4>, std::size_t> class_of;
  std::vector<std::size_t> cls(group.size());
  std::vector<std::size_t> representative;
  for (std::size_t i = 0; i < group.size(); ++i) {
    decs.push_back(padic_decompose(group[i], p, n));
    const auto& d = decs.back();
    const std::int64_t mod = ipow(p, n - d.r);
    const std::array<std::int64_t, 4> key{d.r, d.gprime[0] % mod, d.gprime[1] % mod,
                                          d.gprime[2] % mod};
    auto [it, inserted] = class_of.emplace(key, representative.size());
    if (inserted) representative.push_back(i);
    cls[i] = it->second;
  }

  auto centralizers = parallel_map(representative.size(), workers, [&](std::size_t k) {
    return centralizer_keys(group[representative[k]], group);
  });
  std::map<std::vector<std::uint64_t>, std::size_t> distinct;
  std::vector<std::size_t> subgroup_of(centralizers.size());
  std::vector<const std::vector<std::uint64_t>*> subgroups;
  for (std::size_t k = 0; k < centralizers.size(); ++k) {
    auto [it, inserted] = distinct.emplace(centralizers[k], subgroups.size());
    if (inserted) subgroups.push_back(&it->first);
    subgroup_of[k] = it->second;
  }
  sw.distinct_centralizers = subgroups.size();
  const auto normalizers = parallel_map(subgroups.size(), workers, [&](std::size_t k) {
    return normalizer_size(*subgroups[k], m, group);
  });

  for (std::size_t i = 0; i < group.size(); ++i) {
    StabilizerSizes s;
    s.r = decs[i].r;
    const std::size_t sub = subgroup_of[cls[i]];
    s.centralizer = subgroups[sub]->size();
    s.normalizer = normalizers[sub];
    fill_bounds(s, p, n);
    ++sw.elements_checked;
    sw.max_centralizer_ratio = std::max(
        sw.max_centralizer_ratio,
        static_cast<double>(s.centralizer) / static_cast<double>(s.centralizer_bound));
    sw.max_normalizer_ratio = std::max(
        sw.max_normalizer_ratio,
        static_cast<double>(s.normalizer) / static_cast<double>(s.normalizer_bound));
    if (!s.within_bounds()) {
      ++sw.violations;
      if (sw.examples.size() < 5) {
        sw.examples.push_back(group[i].str() + " r=" + std::to_string(s.r) +
                              " |C|=" + std::to_string(s.centralizer) +
                              " |N(C)|=" + std::to_string(s.normalizer));
      }
    }
  }
  return sw;
}

}  // namespace zaremba
