#include "zaremba/json_io.hpp"

#include <ostream>
#include <stdexcept>

namespace zaremba {

void to_json(Json& j, const Fraction& f) {
  j = Json{{"num", to_string(f.num())}, {"den", to_string(f.den())}, {"text", f.str()}};
}

void to_json(Json& j, const CFWord& w) { j = w.quotients(); }

void to_json(Json& j, const HyperbolaWitness& w) {
  j = Json{{"x", w.x}, {"y", w.y}, {"product", w.product}};
}

void to_json(Json& j, const BackwardCheck& b) {
  j = Json{{"M", b.M}, {"min_product", b.min_product}, {"ratio", b.ratio}};
}

void to_json(Json& j, const HyperbolaSweep& s) {
  j = Json{{"q_max", s.q_max},
           {"pairs", s.pairs},
           {"forward_failures", s.forward_failures},
           {"backward_failures", s.backward_failures},
           {"worst_ratio", s.worst_ratio},
           {"worst_q", s.worst_q},
           {"worst_a", s.worst_a}};
}

void to_json(Json& j, const SearchResult& r) {
  j = Json{{"q", r.q},
           {"a", r.a},
           {"m_min", r.m_min},
           {"strategy", to_string(r.strategy)},
           {"elapsed_ms", r.elapsed_ms}};
}

void to_json(Json& j, const GuidedSearch& g) {
  j = Json{{"q", g.q},
           {"M", g.M},
           {"t", g.t},
           {"zm_size", g.zm_size},
           {"pairs_seen", g.pairs_seen},
           {"pairs_rejected", g.pairs_rejected},
           {"partner", g.partner},
           {"found", g.result.has_value()}};
  if (g.result) {
    j["a"] = g.result->a;
    j["m_min"] = g.result->m_min;
    j["bound_4M"] = 4 * g.M;
  }
}

void to_json(Json& j, const IntegerInterval& i) {
  j = Json{{"lo", i.lo}, {"hi", i.hi}, {"u", i.u}, {"v", i.v}, {"length", i.length()}};
}

void to_json(Json& j, const IntervalDecomposition& d) {
  j = Json{{"q", d.q},
           {"M", d.M},
           {"t", d.t},
           {"T", d.T},
           {"qbar_size", d.qbar_size},
           {"zm_size", d.zm_size},
           {"leftover_size", d.leftover.size()},
           {"min_length", d.min_length()},
           {"min_length_bound", d.min_length_bound},
           {"block_size", d.block_size},
           {"block_remainder", d.block_remainder},
           {"leftover_within_block_bound", d.leftover_within_block_bound},
           {"ok", d.ok()},
           {"violations", d.violations}};
}

void to_json(Json& j, const DimensionFit& f) {
  j = Json{{"M", f.M}, {"w_estimate", f.w_estimate}, {"residual_rms", f.residual_rms},
           {"points", f.points}};
}

void to_json(Json& j, const FoldConstruction& c) {
  j = Json{{"base", c.base},
           {"n", c.n},
           {"numerator", to_string(c.value.num())},
           {"denominator", to_string(c.value.den())},
           {"word", c.word.str()},
           {"max_quotient", c.word.max_quotient()},
           {"chain_start", c.chain.empty() ? 0 : c.chain.front().exponent}};
}

void to_json(Json& j, const FoldAudit& a) {
  j = Json{{"denominator_exact", a.denominator_exact},
           {"coprime", a.coprime},
           {"quotients_bounded", a.quotients_bounded},
           {"raw_bounded", a.raw_bounded},
           {"chain_consistent", a.chain_consistent},
           {"max_quotient", a.max_quotient},
           {"ok", a.ok()},
           {"problems", a.problems}};
}

void to_json(Json& j, const DeviationReport& r) {
  j = Json{{"N", r.config.N},
           {"n", r.config.n},
           {"trials", r.config.trials},
           {"delta", r.config.delta},
           {"seed", r.config.seed},
           {"mode", to_string(r.config.mode)},
           {"kappa", r.config.kappa},
           {"empirical_tail", r.empirical_tail},
           {"reference_mean", r.reference_mean},
           {"bound", r.bound},
           {"sample_mean", r.sample_mean},
           {"sample_sd", r.sample_sd},
           {"in_hypothesis_range", r.in_hypothesis_range}};
}

void to_json(Json& j, const LyapunovEstimate& e) {
  j = Json{{"N", e.N},
           {"n", e.n},
           {"trials", e.trials},
           {"seed", e.seed},
           {"per_pair", e.per_pair},
           {"per_letter", e.per_letter},
           {"reference", e.reference},
           {"ratio_to_log2_N", e.ratio_to_log2_N}};
}

void to_json(Json& j, const GroupElement& g) {
  j = Json{{"entries", g.e}, {"modulus", g.modulus}};
}

void to_json(Json& j, const GirthResult& g) {
  j = Json{{"girth", g.value},
           {"exact", g.exact},
           {"text", g.str()},
           {"nodes_visited", g.nodes_visited},
           {"memory_guard_hit", g.memory_guard_hit}};
}

void to_json(Json& j, const FreenessCheck& f) {
  j = Json{{"N", f.N},
           {"L", f.L},
           {"words", f.words},
           {"distinct_products", f.distinct_products},
           {"free", f.all_distinct()}};
}

void to_json(Json& j, const WalkStats& w) {
  j = Json{{"p", w.p},
           {"N", w.N},
           {"m", w.m},
           {"girth", w.girth.str()},
           {"support", w.r_counts.size()},
           {"total", w.total},
           {"energy", w.energy},
           {"energy_ratio", w.energy_ratio},
           {"cauchy_schwarz_floor", w.cauchy_schwarz_floor},
           {"group_order", w.group_order},
           {"max_coset_family", w.max_coset.family},
           {"max_coset_subgroup", w.max_coset.subgroup},
           {"max_coset", w.max_coset.coset},
           {"max_coset_mass", std::to_string(w.max_coset_mass_num) + "/" +
                                  std::to_string(w.max_coset_mass_den)},
           {"K_estimate", w.K_estimate},
           {"subgroups_checked", w.subgroups_checked}};
}

void to_json(Json& j, const ActionCount& c) {
  j = Json{{"count", c.count}, {"main_term", c.main_term}, {"deviation", c.deviation}};
}

void to_json(Json& j, const ActionExperiment& e) {
  j = Json{{"p", e.p},
           {"N", e.N},
           {"set_size", e.set_size},
           {"pairs", e.pairs},
           {"seed", e.seed},
           {"mean_deviation", e.mean_deviation},
           {"max_deviation", e.max_deviation}};
}

void to_json(Json& j, const PAdicDecomposition& d) {
  j = Json{{"g", d.g},
           {"p", d.p},
           {"n", d.n},
           {"half_trace", d.half_trace},
           {"r", d.r},
           {"gprime", d.gprime},
           {"central", d.central},
           {"trace_congruence", d.trace_congruence()}};
}

void to_json(Json& j, const StabilizerSizes& s) {
  j = Json{{"r", s.r},
           {"centralizer", s.centralizer},
           {"centralizer_bound", s.centralizer_bound},
           {"normalizer", s.normalizer},
           {"normalizer_bound", s.normalizer_bound},
           {"within_bounds", s.within_bounds()}};
}

void to_json(Json& j, const StabilizerSweep& s) {
  j = Json{{"p", s.p},
           {"n", s.n},
           {"group_order", s.group_order},
           {"elements_checked", s.elements_checked},
           {"violations", s.violations},
           {"distinct_centralizers", s.distinct_centralizers},
           {"max_centralizer_ratio", s.max_centralizer_ratio},
           {"max_normalizer_ratio", s.max_normalizer_ratio},
           {"examples", s.examples}};
}

OutputFormat output_format_from_string(const std::string& s) {
  if (s == "json") return OutputFormat::json;
  if (s == "tsv") return OutputFormat::tsv;
  throw std::invalid_argument("unknown format '" + s + "' (expected json or tsv)");
}

namespace {

std::string tsv_cell(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

void emit_rows(std::ostream& out, const std::vector<Json>& rows, OutputFormat format) {
  if (format == OutputFormat::json) {
    for (const auto& r : rows) out << r.dump() << '\n';
    return;
  }
  if (rows.empty()) return;
  std::vector<std::string> keys;
  for (const auto& [k, v] : rows.front().items()) keys.push_back(k);
  for (std::size_t i = 0; i < keys.size(); ++i) out << (i ? "\t" : "") << keys[i];
  out << '\n';
  for (const auto& r : rows) {
    if (!r.is_object() || r.size() != keys.size()) {
      throw std::invalid_argument("emit_rows: rows do not share one set of columns");
    }
    for (std::size_t i = 0; i < keys.size(); ++i) {
      out << (i ? "\t" : "") << tsv_cell(r.at(keys[i]));
    }
    out << '\n';
  }
}

}  // namespace zaremba
