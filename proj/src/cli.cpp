#include "zaremba/cli.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "zaremba/cache.hpp"
#include "zaremba/errors.hpp"
#include "zaremba/json_io.hpp"
#include "zaremba/number_theory.hpp"

namespace zaremba {

namespace {

// A finding: the computation ran, but a structural check failed.
struct Finding {
  std::string message;
};

std::vector<std::int64_t> parse_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw std::invalid_argument("bad integer '" + item + "' in list '" + text + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

struct Globals {
  std::string format = "json";
  unsigned workers = 1;
  std::optional<std::uint64_t> seed;
};

class Dispatcher {
 public:
  Dispatcher(std::ostream& out) : out_(out) {}

  void build(CLI::App& app) {
    app.add_option("--format", g_.format, "Output format")
        ->check(CLI::IsMember({"json", "tsv"}));
    app.add_option("--workers", g_.workers, "Worker threads")->check(CLI::Range(1u, 256u));
    app.add_option("--seed", seed_, "PRNG seed (required by randomized subcommands)");
    app.require_subcommand(1);
    add_cf(app);
    add_korobov(app);
    add_search(app);
    add_sets(app);
    add_fold(app);
    add_deviate(app);
    add_sl2(app);
  }

  void finish_globals() {
    if (seed_) g_.seed = *seed_;
  }

  void run() {
    if (!action_) throw std::invalid_argument("no subcommand selected");
    action_();
  }

 private:
  std::ostream& out_;
  Globals g_;
  std::optional<std::uint64_t> seed_;
  std::function<void()> action_;

  OutputFormat format() const { return output_format_from_string(g_.format); }

  void emit(const std::vector<Json>& rows) { emit_rows(out_, rows, format()); }
  void emit(const Json& row) { emit(std::vector<Json>{row}); }

  std::uint64_t require_seed(const std::string& what) const {
    if (!g_.seed) throw std::invalid_argument(what + " is randomized; pass --seed");
    return *g_.seed;
  }

  template <typename Fn>
  void on(CLI::App* sub, Fn fn) {
    sub->callback([this, fn] { action_ = fn; });
  }

  // ------------------------------------------------------------------ cf
  struct CfArgs {
    std::string num, den, word;
  } cf_;

  void add_cf(CLI::App& app) {
    auto* cf = app.add_subcommand("cf", "Continued fractions and continuants");
    cf->require_subcommand(1);

    auto* expand = cf->add_subcommand("expand", "Expansion of num/den");
    expand->add_option("--num", cf_.num)->required();
    expand->add_option("--den", cf_.den)->required();
    on(expand, [this] {
      const CFWord w = cf_expand(BigInt(cf_.num), BigInt(cf_.den));
      emit(Json{{"num", cf_.num}, {"den", cf_.den}, {"word", w.str()},
                {"max_quotient", w.max_quotient()}});
    });

    auto* eval = cf->add_subcommand("eval", "Value of a word c1,c2,...");
    eval->add_option("--word", cf_.word)->required();
    on(eval, [this] {
      const CFWord w(parse_list(cf_.word));
      if (w.positive()) {
        const Fraction f = cf_eval(w);
        emit(Json{{"word", w.str()}, {"value", f}});
      } else {
        const SignedValue v = cf_eval_signed(w);
        emit(Json{{"word", w.str()}, {"value", v.magnitude}, {"sign", v.sign}});
      }
    });

    auto* cont = cf->add_subcommand("continuant", "K(c1,...,ck)");
    cont->add_option("--word", cf_.word)->required();
    on(cont, [this] {
      const auto w = parse_list(cf_.word);
      emit(Json{{"word", CFWord(w).str()}, {"continuant", to_string(continuant(w))}});
    });

    auto* conv = cf->add_subcommand("convergents", "Convergents p/q of a canonical word");
    conv->add_option("--word", cf_.word)->required();
    on(conv, [this] {
      const auto t = convergents(CFWord(parse_list(cf_.word)));
      std::vector<Json> rows;
      for (std::size_t nu = 0; nu < t.size(); ++nu) {
        rows.push_back(Json{{"nu", nu}, {"p", to_string(t.p(nu))}, {"q", to_string(t.q(nu))}});
      }
      emit(rows);
    });

    auto* rev = cf->add_subcommand("reverse", "Reversed word and its value");
    rev->add_option("--word", cf_.word)->required();
    on(rev, [this] {
      const auto [w, f] = cf_reverse(CFWord(parse_list(cf_.word)));
      emit(Json{{"word", w.str()}, {"value", f}});
    });
  }

  // ------------------------------------------------------------------ korobov
  struct KorobovArgs {
    std::int64_t a = 0, q = 0, M = 0, q_max = 0;
    std::optional<std::int64_t> x_max;
  } kb_;

  void add_korobov(CLI::App& app) {
    auto* k = app.add_subcommand("korobov", "Hyperbola criterion");
    k->require_subcommand(1);

    auto* hyp = k->add_subcommand("hyperbola", "min x|y| over a x = y (mod q)");
    hyp->add_option("--a", kb_.a)->required();
    hyp->add_option("--q", kb_.q)->required();
    hyp->add_option("--x-max", kb_.x_max);
    on(hyp, [this] {
      Json j = min_hyperbola_product(kb_.a, kb_.q, kb_.x_max);
      j["a"] = kb_.a;
      j["q"] = kb_.q;
      emit(j);
    });

    auto* fwd = k->add_subcommand("forward", "Whether min x|y| >= q/M");
    fwd->add_option("--a", kb_.a)->required();
    fwd->add_option("--q", kb_.q)->required();
    fwd->add_option("--M", kb_.M)->required();
    on(fwd, [this] {
      emit(Json{{"a", kb_.a}, {"q", kb_.q}, {"M", kb_.M},
                {"criterion_holds", korobov_forward(kb_.a, kb_.q, kb_.M)}});
    });

    auto* bwd = k->add_subcommand("backward", "Check min x|y| >= q/(4M)");
    bwd->add_option("--a", kb_.a)->required();
    bwd->add_option("--q", kb_.q)->required();
    on(bwd, [this] {
      Json j = korobov_backward(kb_.a, kb_.q);
      j["a"] = kb_.a;
      j["q"] = kb_.q;
      emit(j);
    });

    auto* sweep = k->add_subcommand("sweep", "Both directions for every q <= q-max");
    sweep->add_option("--q-max", kb_.q_max)->required();
    on(sweep, [this] {
      const auto s = sweep_hyperbola_criterion(kb_.q_max, g_.workers);
      emit(Json(s));
      if (s.forward_failures + s.backward_failures > 0) {
        throw Finding{"hyperbola criterion failed for some pairs"};
      }
    });
  }

  // ------------------------------------------------------------------ search
  struct SearchArgs {
    std::int64_t q = 0, M = 0, M_max = 8, q_min = 2, q_max = 0;
    std::string filter = "primes";
    std::string cache;
  } sr_;

  void add_search(CLI::App& app) {
    auto* s = app.add_subcommand("search", "Numerators with small partial quotients");
    s->require_subcommand(1);

    auto* ex = s->add_subcommand("exhaustive", "Scan every a coprime to q");
    ex->add_option("--q", sr_.q)->required();
    ex->add_option("--cache", sr_.cache, "TSV results cache");
    on(ex, [this] {
      SearchResult r;
      bool cached = false;
      if (!sr_.cache.empty()) {
        for (const auto& row : cache_read(sr_.cache)) {
          if (row.q == sr_.q) {
            r = row;
            cached = true;
          }
        }
      }
      if (!cached) {
        r = search_exhaustive(sr_.q);
        if (!sr_.cache.empty()) cache_upsert(sr_.cache, {r});
      }
      emit(Json(r));
    });

    auto* gd = s->add_subcommand("guided", "Inverse-pair search over Z_M(t)");
    gd->add_option("--q", sr_.q)->required();
    auto* m_opt = gd->add_option("--M", sr_.M);
    gd->add_option("--M-max", sr_.M_max, "Smallest M up to this bound when --M is absent");
    on(gd, [this, m_opt] {
      if (m_opt->count() > 0) {
        emit(Json(search_guided_detailed(sr_.q, sr_.M)));
        return;
      }
      const auto g = smallest_guided(sr_.q, sr_.M_max);
      if (!g) {
        emit(Json{{"q", sr_.q}, {"M_max", sr_.M_max}, {"found", false}});
        return;
      }
      emit(Json(*g));
    });

    auto* table = s->add_subcommand("table", "Exhaustive search over a range of q");
    table->add_option("--q-min", sr_.q_min);
    table->add_option("--q-max", sr_.q_max)->required();
    table->add_option("--filter", sr_.filter)->check(CLI::IsMember({"primes", "all", "square_free"}));
    table->add_option("--cache", sr_.cache, "TSV results cache; cached q are skipped");
    on(table, [this] {
      const QFilter filter = qfilter_from_string(sr_.filter);
      std::vector<SearchResult> cached;
      std::vector<std::int64_t> skip;
      if (!sr_.cache.empty()) {
        for (const auto& row : cache_read(sr_.cache)) {
          skip.push_back(row.q);
          if (row.q >= sr_.q_min && row.q <= sr_.q_max && admissible(row.q, filter)) {
            cached.push_back(row);
          }
        }
      }
      auto rows = bound_table(sr_.q_min, sr_.q_max, filter, g_.workers, skip);
      if (!sr_.cache.empty()) cache_upsert(sr_.cache, rows);
      rows.insert(rows.end(), cached.begin(), cached.end());
      std::sort(rows.begin(), rows.end(),
                [](const SearchResult& x, const SearchResult& y) { return x.q < y.q; });
      std::vector<Json> out;
      for (const auto& r : rows) {
        Json j = r;
        j["korobov_ratio"] = korobov_ratio(r);
        j["log_log_ratio"] = log_log_ratio(r);
        out.push_back(j);
      }
      emit(out);
    });
  }

  // ------------------------------------------------------------------ sets
  struct SetsArgs {
    std::int64_t q = 0, M = 0, t = 0, t_max = 1024;
    bool barred = false;
    double block_constant = 1.0;
  } st_;

  void add_sets(CLI::App& app) {
    auto* s = app.add_subcommand("sets", "Bounded-quotient rationals and Z_M(t)");
    s->require_subcommand(1);

    auto* count = s->add_subcommand("count", "|Q_M(t)| or |Q-bar_M(t)|");
    count->add_option("--M", st_.M)->required();
    count->add_option("--t", st_.t)->required();
    count->add_flag("--barred", st_.barred);
    on(count, [this] {
      const auto n = st_.barred ? count_QM_bar(st_.M, st_.t) : count_QM(st_.M, st_.t);
      emit(Json{{"M", st_.M}, {"t", st_.t}, {"barred", st_.barred}, {"count", n}});
    });

    auto* list = s->add_subcommand("list", "Members of Q_M(t) or Q-bar_M(t)");
    list->add_option("--M", st_.M)->required();
    list->add_option("--t", st_.t)->required();
    list->add_flag("--barred", st_.barred);
    on(list, [this] {
      const auto set = st_.barred ? enumerate_QM_bar(st_.M, st_.t) : enumerate_QM(st_.M, st_.t);
      std::vector<Json> rows;
      for (const auto& m : set.members) {
        rows.push_back(Json{{"value", m.value.str()}, {"word", m.word.str()}});
      }
      emit(rows);
    });

    auto* zm = s->add_subcommand("zm", "Size of Z_M(t) modulo q");
    zm->add_option("--q", st_.q)->required();
    zm->add_option("--M", st_.M)->required();
    zm->add_option("--t", st_.t)->required();
    on(zm, [this] {
      emit(Json{{"q", st_.q}, {"M", st_.M}, {"t", st_.t},
                {"size", build_ZM(st_.q, st_.M, st_.t).size()}});
    });

    auto* dec = s->add_subcommand("decompose", "Interval decomposition of Z_M(t)");
    dec->add_option("--q", st_.q)->required();
    dec->add_option("--M", st_.M)->required();
    dec->add_option("--t", st_.t)->required();
    dec->add_option("--block-constant", st_.block_constant);
    on(dec, [this] {
      const auto d = decompose_ZM(st_.q, st_.M, st_.t, st_.block_constant);
      emit(Json(d));
      if (!d.ok()) throw Finding{"decomposition of Z_M(t) violates the interval structure"};
    });

    auto* dim = s->add_subcommand("dimension", "Fit |Q_M(t)| ~ t^{2 w_M}");
    dim->add_option("--M", st_.M)->required();
    dim->add_option("--t-max", st_.t_max);
    on(dim, [this] {
      const auto f = estimate_wM(st_.M, st_.t_max);
      if (format() == OutputFormat::tsv) {
        std::vector<Json> rows;
        for (const auto& [x, y] : f.points) rows.push_back(Json{{"log2_t", x}, {"log2_count", y}});
        emit(rows);
      } else {
        emit(Json(f));
      }
    });
  }

  // ------------------------------------------------------------------ fold
  struct FoldArgs {
    std::int64_t base = 0, power = 0;
    bool audit = false;
  } fd_;

  void add_fold(CLI::App& app) {
    auto* f = app.add_subcommand("fold", "Fraction a/base^power with quotients <= base^2 - 1");
    f->add_option("--base", fd_.base)->required();
    f->add_option("--power", fd_.power)->required();
    f->add_flag("--audit", fd_.audit, "Re-verify the construction and the fold chain");
    on(f, [this] {
      const auto c = fold_construct(fd_.base, fd_.power);
      Json j = c;
      if (fd_.audit) {
        const auto a = fold_audit(c);
        j["audit"] = a;
        emit(j);
        if (!a.ok()) throw Finding{"fold audit failed: " + a.problems.front()};
        return;
      }
      emit(j);
    });
  }

  // ------------------------------------------------------------------ deviate
  struct DeviateArgs {
    DeviationConfig cfg;
    std::string mode = "plain";
    std::size_t hist = 0;
    bool lyapunov = false;
  } dv_;

  void add_deviate(CLI::App& app) {
    auto* d = app.add_subcommand("deviate", "Large deviations of (1/n) log2 q_n");
    d->add_option("--N", dv_.cfg.N);
    d->add_option("--n", dv_.cfg.n);
    d->add_option("--trials", dv_.cfg.trials);
    d->add_option("--delta", dv_.cfg.delta);
    d->add_option("--kappa", dv_.cfg.kappa);
    d->add_option("--K", dv_.cfg.K, "Constant in the hypothesis N >= K delta^-2 log(1/delta)");
    d->add_option("--mode", dv_.mode)->check(CLI::IsMember({"plain", "signed"}));
    d->add_option("--hist", dv_.hist, "Emit a TSV histogram with this many bins");
    d->add_flag("--lyapunov", dv_.lyapunov, "Mean growth rate of the signed word instead");
    on(d, [this] {
      DeviationConfig cfg = dv_.cfg;
      cfg.seed = require_seed("deviate");
      cfg.workers = g_.workers;
      cfg.mode = deviation_mode_from_string(dv_.mode);
      if (dv_.lyapunov) {
        emit(Json(lyapunov_estimate(cfg.N, cfg.n, cfg.trials, cfg.seed, cfg.workers)));
        return;
      }
      const auto r = run_deviation(cfg);
      if (dv_.hist > 0) {
        out_ << "lo\thi\tcount\n";
        for (const auto& b : histogram(r.samples, dv_.hist)) {
          out_ << Json(b.lo).dump() << '\t' << Json(b.hi).dump() << '\t' << b.count << '\n';
        }
        return;
      }
      emit(Json(r));
    });
  }

  // ------------------------------------------------------------------ sl2
  struct Sl2Args {
    std::int64_t N = 2, modulus = 0, p = 0, n = 1, L_max = 12, L = 8, m = 1;
    std::int64_t set_size = 100, pairs = 50;
    bool det_minus = false, integers = false, hist = false;
    std::string entries;
  } sl_;

  void add_sl2(CLI::App& app) {
    auto* s = app.add_subcommand("sl2", "Experiments in SL2 modulo m");
    s->require_subcommand(1);

    auto* gens = s->add_subcommand("generators", "The generator family mod m");
    gens->add_option("--N", sl_.N)->required();
    gens->add_option("--modulus", sl_.modulus)->required();
    gens->add_flag("--det-minus", sl_.det_minus, "The determinant -1 family g_j");
    on(gens, [this] {
      const auto gs = sl_.det_minus ? generator_family_det_minus(sl_.N, sl_.modulus)
                                    : generator_family(sl_.N, sl_.modulus);
      std::vector<Json> rows;
      for (std::size_t j = 0; j < gs.size(); ++j) {
        rows.push_back(Json{{"j", j + 1}, {"element", gs[j].str()}, {"det", gs[j].det()}});
      }
      emit(rows);
    });

    auto* girth_cmd = s->add_subcommand("girth", "Girth of the Cayley graph");
    girth_cmd->add_option("--p", sl_.p);
    girth_cmd->add_option("--N", sl_.N)->required();
    girth_cmd->add_option("--L-max", sl_.L_max);
    girth_cmd->add_flag("--integers", sl_.integers, "Search over SL2(Z) with exact integers");
    on(girth_cmd, [this] {
      Json j = sl_.integers ? girth_over_integers(sl_.N, sl_.L_max) : girth(sl_.p, sl_.N, sl_.L_max);
      j["N"] = sl_.N;
      j["p"] = sl_.integers ? Json(nullptr) : Json(sl_.p);
      emit(j);
    });

    auto* free_cmd = s->add_subcommand("freeness", "Distinct products of reduced words over Z");
    free_cmd->add_option("--N", sl_.N)->required();
    free_cmd->add_option("--L", sl_.L);
    on(free_cmd, [this] {
      const auto f = distinct_words_over_integers(sl_.N, sl_.L);
      emit(Json(f));
      if (!f.all_distinct()) throw Finding{"two reduced words have the same product"};
    });

    auto* walk = s->add_subcommand("walk", "Collision counts r_{G,2m} and energy");
    walk->add_option("--p", sl_.p)->required();
    walk->add_option("--N", sl_.N)->required();
    walk->add_option("--m", sl_.m)->required();
    walk->add_flag("--hist", sl_.hist, "Emit the r-count histogram as TSV");
    on(walk, [this] {
      WalkOptions o;
      o.seed = require_seed("sl2 walk");
      o.workers = g_.workers;
      const auto w = walk_stats(sl_.p, sl_.N, sl_.m, o);
      if (sl_.hist) {
        std::map<std::uint64_t, std::uint64_t> freq;
        for (const auto& [g, c] : w.r_counts) ++freq[c];
        out_ << "r\telements\n";
        for (const auto& [r, k] : freq) out_ << r << '\t' << k << '\n';
        return;
      }
      emit(Json(w));
    });

    auto* action = s->add_subcommand("action", "Averaged count of (a + c)(b + c) = 1");
    action->add_option("--p", sl_.p)->required();
    action->add_option("--N", sl_.N)->required();
    action->add_option("--set-size", sl_.set_size);
    action->add_option("--pairs", sl_.pairs);
    on(action, [this] {
      emit(Json(action_experiment(sl_.p, sl_.N, sl_.set_size, sl_.pairs,
                                  require_seed("sl2 action"), g_.workers)));
    });

    auto* padic = s->add_subcommand("padic", "g = (Tr g / 2) I + p^r g'");
    padic->add_option("--p", sl_.p)->required();
    padic->add_option("--n", sl_.n)->required();
    padic->add_option("--entries", sl_.entries, "a,b,c,d")->required();
    on(padic, [this] { emit(Json(padic_decompose(element(), sl_.p, sl_.n))); });

    auto* stab = s->add_subcommand("stab", "Centralizer and normalizer sizes");
    stab->add_option("--p", sl_.p)->required();
    stab->add_option("--n", sl_.n)->required();
    stab->add_option("--entries", sl_.entries, "a,b,c,d; omit to sweep the whole group");
    on(stab, [this] {
      if (!sl_.entries.empty()) {
        const auto s = stab_sizes(element(), sl_.p, sl_.n);
        emit(Json(s));
        if (!s.within_bounds()) throw Finding{"stabilizer bound violated"};
        return;
      }
      const auto sw = stab_sweep(sl_.p, sl_.n, g_.workers);
      emit(Json(sw));
      if (sw.violations > 0) throw Finding{"stabilizer bounds violated"};
    });
  }

  GroupElement element() const {
    const auto v = parse_list(sl_.entries);
    if (v.size() != 4) throw std::invalid_argument("--entries needs four integers a,b,c,d");
    std::int64_t m = 1;
    for (std::int64_t i = 0; i < sl_.n; ++i) m *= sl_.p;
    return GroupElement(v[0], v[1], v[2], v[3], m);
  }
};

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Continued fractions with bounded partial quotients", "zaremba"};
  Dispatcher d(out);
  d.build(app);
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return 1;
  }

  try {
    d.finish_globals();
    d.run();
  } catch (const Finding& f) {
    err << "finding: " << f.message << '\n';
    return 2;
  } catch (const InvariantViolation& e) {
    err << "invariant violated: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return 1;
  }
  return 0;
}

}  // namespace zaremba
