#pragma once

// Serialization of search results: report JSON (and back), influence JSON,
// hypergraph export (JSON and DOT), and 28x28 heatmaps (CSV and PGM).

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "actspec/search.hpp"
#include "json.hpp"

namespace actspec {

using Json = nlohmann::ordered_json;

/// Subsets are written as sorted member arrays, e.g. [2, 3].
Json mask_to_json(const SubsetMask& s);
SubsetMask mask_from_json(const Json& j, std::size_t n);

Json report_to_json(const SpectrumReport& report);
/// Restores what the JSON carries; `order` and `stats` are optional on input.
SpectrumReport report_from_json(const Json& doc);
void write_report_json(const SpectrumReport& report, std::ostream& os);
SpectrumReport read_report_json(std::istream& is);

Json influence_to_json(const InfluenceEstimate& inf);

/// {nodes, edges: [{members, coefficient}], redundant: [{variable, witness}]}.
/// Nodes are every variable that appears in an edge or a redundancy entry.
Json export_hypergraph(const SpectrumReport& report);
/// One cluster per accepted subset; redundant variables are drawn orange with
/// a dashed edge to their witness members.
void write_hypergraph_dot(const SpectrumReport& report, std::ostream& os);

/// Per-variable importance for a heatmap: sum of c(S)^2 over accepted S containing i.
std::vector<double> accepted_mass(const SpectrumReport& report);

/// Keeps the k largest entries (ties by lower index) and zeroes the rest; k = 0 keeps all.
std::vector<double> top_k_only(const std::vector<double>& values, std::size_t k);

/// 28 rows of 28 comma-separated values.
void write_heatmap_csv(const std::vector<double>& values, std::ostream& os);
/// Binary PGM (P5), 28x28. Intensity scales with value / max; variables in
/// `redundant` that carry no value are drawn at a fixed mid-gray.
void write_heatmap_pgm(const std::vector<double>& values, const std::vector<bool>& redundant, std::ostream& os);

}  // namespace actspec
