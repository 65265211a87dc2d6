#pragma once

// JSON views of the result types, plus line-oriented JSON/TSV emission.

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "zaremba/cf.hpp"
#include "zaremba/deviations.hpp"
#include "zaremba/folding.hpp"
#include "zaremba/korobov.hpp"
#include "zaremba/sl2.hpp"
#include "zaremba/zm_sets.hpp"

namespace zaremba {

using Json = nlohmann::json;

void to_json(Json& j, const Fraction& f);
void to_json(Json& j, const CFWord& w);
void to_json(Json& j, const HyperbolaWitness& w);
void to_json(Json& j, const BackwardCheck& b);
void to_json(Json& j, const HyperbolaSweep& s);
void to_json(Json& j, const SearchResult& r);
void to_json(Json& j, const GuidedSearch& g);
void to_json(Json& j, const IntegerInterval& i);
void to_json(Json& j, const IntervalDecomposition& d);
void to_json(Json& j, const DimensionFit& f);
void to_json(Json& j, const FoldConstruction& c);
void to_json(Json& j, const FoldAudit& a);
void to_json(Json& j, const DeviationReport& r);  // samples omitted
void to_json(Json& j, const LyapunovEstimate& e);
void to_json(Json& j, const GroupElement& g);
void to_json(Json& j, const GirthResult& g);
void to_json(Json& j, const FreenessCheck& f);
void to_json(Json& j, const WalkStats& w);  // r_counts omitted
void to_json(Json& j, const ActionCount& c);
void to_json(Json& j, const ActionExperiment& e);
void to_json(Json& j, const PAdicDecomposition& d);
void to_json(Json& j, const StabilizerSizes& s);
void to_json(Json& j, const StabilizerSweep& s);

enum class OutputFormat { json, tsv };
OutputFormat output_format_from_string(const std::string& s);

// json: one compact value per line. tsv: a header from the keys of the first
// row, then one line per row; nested values are written as compact JSON.
// Every row must be an object with the same keys as the first.
void emit_rows(std::ostream& out, const std::vector<Json>& rows, OutputFormat format);

}  // namespace zaremba
