#include "actspec/report.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <string>

#include "actspec/abf.hpp"
#include "actspec/mnistio.hpp"

namespace actspec {

namespace {

std::string kind_name(RedundancyKind k) { return k == RedundancyKind::filter ? "filter" : "duplicate"; }

RedundancyKind parse_kind(const std::string& text) {
  if (text == "filter") return RedundancyKind::filter;
  if (text == "duplicate") return RedundancyKind::duplicate;
  throw FormatError("unknown redundancy kind '" + text + "'");
}

std::string member_label(const SubsetMask& s) {
  std::string out;
  for (auto i : s.members()) {
    if (!out.empty()) out += ',';
    out += std::to_string(i);
  }
  return out;
}

}  // namespace

Json mask_to_json(const SubsetMask& s) { return Json(s.members()); }

SubsetMask mask_from_json(const Json& j, std::size_t n) {
  const auto members = j.get<std::vector<std::size_t>>();
  for (auto i : members) {
    if (i >= n) throw FormatError("mask member " + std::to_string(i) + " out of range for n = " + std::to_string(n));
  }
  return SubsetMask::from_members(n, members);
}

Json report_to_json(const SpectrumReport& report) {
  Json doc;
  doc["n"] = report.n;
  doc["accepted"] = Json::array();
  for (const auto& a : report.accepted) {
    doc["accepted"].push_back({{"mask", mask_to_json(a.mask)}, {"coefficient", a.coefficient}});
  }
  doc["redundancy"] = Json::array();
  for (const auto& r : report.redundancy) {
    doc["redundancy"].push_back({{"variable", r.variable},
                                 {"witness_mask", mask_to_json(r.witness)},
                                 {"score", r.score},
                                 {"kind", kind_name(r.kind)},
                                 {"context", mask_to_json(r.context)}});
  }
  doc["duplicates"] = Json::array();
  for (const auto& d : report.duplicates) {
    doc["duplicates"].push_back({{"mask", mask_to_json(d.mask)},
                                 {"representative", mask_to_json(d.representative)},
                                 {"overlap", d.overlap}});
  }
  doc["total_weight"] = report.total_weight;
  doc["residual"] = report.residual;
  const auto& p = report.params;
  doc["params"] = {{"tau", p.tau},
                   {"gamma", p.gamma},
                   {"prune_fraction", p.prune_fraction},
                   {"eta", p.estimator.eta},
                   {"delta", p.estimator.delta},
                   {"bound", p.estimator.bound},
                   {"seed", p.estimator.seed},
                   {"pair_count", p.estimator.pair_count},
                   {"uniform_donor", p.estimator.uniform_donor},
                   {"aggregation", to_string(p.aggregation)},
                   {"order", to_string(p.order)},
                   {"max_buckets", p.max_buckets}};
  doc["order"] = report.order;
  const auto& s = report.stats;
  doc["stats"] = {{"weight_queries", s.weight_queries},
                  {"redundancy_queries", s.redundancy_queries},
                  {"oracle_calls", s.oracle_calls},
                  {"max_frontier", s.max_frontier},
                  {"leaves", s.leaves},
                  {"max_singleton_fraction", s.max_singleton_fraction}};
  return doc;
}

SpectrumReport report_from_json(const Json& doc) {
  SpectrumReport r;
  try {
    r.n = doc.at("n").get<std::size_t>();
    if (r.n == 0) throw FormatError("report has n = 0");
    for (const auto& a : doc.at("accepted")) {
      r.accepted.push_back({mask_from_json(a.at("mask"), r.n), a.at("coefficient").get<double>()});
    }
    for (const auto& e : doc.at("redundancy")) {
      RedundancyEntry entry;
      entry.variable = e.at("variable").get<std::size_t>();
      if (entry.variable >= r.n) throw FormatError("redundancy variable out of range");
      entry.witness = mask_from_json(e.at("witness_mask"), r.n);
      entry.score = e.at("score").get<double>();
      entry.kind = e.contains("kind") ? parse_kind(e.at("kind").get<std::string>()) : RedundancyKind::filter;
      entry.context = e.contains("context") ? mask_from_json(e.at("context"), r.n) : SubsetMask(r.n);
      r.redundancy.push_back(std::move(entry));
    }
    if (doc.contains("duplicates")) {
      for (const auto& d : doc.at("duplicates")) {
        r.duplicates.push_back({mask_from_json(d.at("mask"), r.n), mask_from_json(d.at("representative"), r.n),
                                d.at("overlap").get<double>()});
      }
    }
    r.residual = doc.at("residual").get<double>();
    double accepted_sq = 0.0;
    for (const auto& a : r.accepted) accepted_sq += a.coefficient * a.coefficient;
    r.total_weight = doc.contains("total_weight") ? doc.at("total_weight").get<double>() : accepted_sq + r.residual;
    const auto& p = doc.at("params");
    r.params.tau = p.at("tau").get<double>();
    r.params.gamma = p.at("gamma").get<double>();
    if (p.contains("prune_fraction")) r.params.prune_fraction = p.at("prune_fraction").get<double>();
    if (p.contains("eta")) r.params.estimator.eta = p.at("eta").get<double>();
    if (p.contains("delta")) r.params.estimator.delta = p.at("delta").get<double>();
    if (p.contains("bound")) r.params.estimator.bound = p.at("bound").get<double>();
    if (p.contains("seed")) r.params.estimator.seed = p.at("seed").get<std::uint64_t>();
    if (p.contains("pair_count")) r.params.estimator.pair_count = p.at("pair_count").get<std::size_t>();
    if (p.contains("uniform_donor")) r.params.estimator.uniform_donor = p.at("uniform_donor").get<bool>();
    if (p.contains("aggregation")) r.params.aggregation = parse_aggregation(p.at("aggregation").get<std::string>());
    if (p.contains("order")) r.params.order = parse_variable_order(p.at("order").get<std::string>());
    if (p.contains("max_buckets")) r.params.max_buckets = p.at("max_buckets").get<std::size_t>();
    if (doc.contains("order")) r.order = doc.at("order").get<std::vector<std::size_t>>();
    if (doc.contains("stats")) {
      const auto& s = doc.at("stats");
      r.stats.weight_queries = s.value("weight_queries", std::size_t{0});
      r.stats.redundancy_queries = s.value("redundancy_queries", std::size_t{0});
      r.stats.oracle_calls = s.value("oracle_calls", std::size_t{0});
      r.stats.max_frontier = s.value("max_frontier", std::size_t{0});
      r.stats.leaves = s.value("leaves", std::size_t{0});
      r.stats.max_singleton_fraction = s.value("max_singleton_fraction", 0.0);
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("report JSON has the wrong shape: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("report JSON has a bad value: ") + e.what());
  }
  return r;
}

void write_report_json(const SpectrumReport& report, std::ostream& os) { os << report_to_json(report).dump(2) << '\n'; }

SpectrumReport read_report_json(std::istream& is) {
  Json doc;
  try {
    doc = Json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("report JSON does not parse: ") + e.what());
  }
  return report_from_json(doc);
}

Json influence_to_json(const InfluenceEstimate& inf) {
  Json doc;
  doc["n"] = inf.values.size();
  doc["values"] = inf.values;
  doc["residual"] = inf.residual;
  doc["residual_clamped"] = inf.residual_clamped;
  doc["support"] = inf.support;
  return doc;
}

Json export_hypergraph(const SpectrumReport& report) {
  std::set<std::size_t> nodes;
  Json edges = Json::array();
  for (const auto& a : report.accepted) {
    const auto members = a.mask.members();
    nodes.insert(members.begin(), members.end());
    edges.push_back({{"members", members}, {"coefficient", a.coefficient}});
  }
  Json redundant = Json::array();
  for (const auto& r : report.redundancy) {
    nodes.insert(r.variable);
    const auto w = r.witness.members();
    nodes.insert(w.begin(), w.end());
    redundant.push_back({{"variable", r.variable}, {"witness", w}});
  }
  Json doc;
  doc["n"] = report.n;
  doc["nodes"] = std::vector<std::size_t>(nodes.begin(), nodes.end());
  doc["edges"] = std::move(edges);
  doc["redundant"] = std::move(redundant);
  return doc;
}

void write_hypergraph_dot(const SpectrumReport& report, std::ostream& os) {
  static const char* palette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#17becf"};
  os << "graph actspec {\n  node [shape=circle];\n";
  std::set<std::size_t> redundant_vars;
  for (const auto& r : report.redundancy) redundant_vars.insert(r.variable);
  std::set<std::size_t> drawn;
  for (std::size_t e = 0; e < report.accepted.size(); ++e) {
    const auto& a = report.accepted[e];
    const char* color = palette[e % std::size(palette)];
    const auto members = a.mask.members();
    os << "  subgraph cluster_" << e << " {\n";
    os << "    label=\"{" << member_label(a.mask) << "} " << a.coefficient << "\";\n";
    os << "    color=\"" << color << "\";\n";
    for (auto v : members) {
      if (drawn.insert(v).second) os << "    x" << v << " [label=\"" << v << "\", color=\"" << color << "\"];\n";
    }
    os << "  }\n";
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        os << "  x" << members[i] << " -- x" << members[j] << " [color=\"" << color << "\"];\n";
      }
    }
  }
  for (const auto& r : report.redundancy) {
    if (drawn.insert(r.variable).second) {
      os << "  x" << r.variable << " [label=\"" << r.variable << "\"];\n";
    }
    os << "  x" << r.variable << " [redundant=true, witness=\"" << member_label(r.witness)
       << "\", style=filled, fillcolor=orange];\n";
    for (auto w : r.witness.members()) {
      if (drawn.insert(w).second) os << "  x" << w << " [label=\"" << w << "\"];\n";
      os << "  x" << r.variable << " -- x" << w << " [style=dashed, color=orange];\n";
    }
  }
  os << "}\n";
}

std::vector<double> accepted_mass(const SpectrumReport& report) {
  std::vector<double> out(report.n, 0.0);
  for (const auto& a : report.accepted) {
    for (auto i : a.mask.members()) out[i] += a.coefficient * a.coefficient;
  }
  return out;
}

std::vector<double> top_k_only(const std::vector<double>& values, std::size_t k) {
  if (k == 0 || k >= values.size()) return values;
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  std::vector<double> out(values.size(), 0.0);
  for (std::size_t i = 0; i < k; ++i) out[idx[i]] = values[idx[i]];
  return out;
}

void write_heatmap_csv(const std::vector<double>& values, std::ostream& os) {
  if (values.size() != kImagePixels) throw DimensionError("heatmap needs 784 values");
  const auto old = os.precision(17);
  for (std::size_t r = 0; r < kImageSide; ++r) {
    for (std::size_t c = 0; c < kImageSide; ++c) {
      if (c > 0) os << ',';
      os << values[r * kImageSide + c];
    }
    os << '\n';
  }
  os.precision(old);
}

void write_heatmap_pgm(const std::vector<double>& values, const std::vector<bool>& redundant, std::ostream& os) {
  if (values.size() != kImagePixels) throw DimensionError("heatmap needs 784 values");
  double top = 0.0;
  for (double v : values) top = std::max(top, std::abs(v));
  os << "P5\n" << kImageSide << ' ' << kImageSide << "\n255\n";
  for (std::size_t i = 0; i < kImagePixels; ++i) {
    int level = 0;
    if (top > 0.0 && values[i] != 0.0) {
      level = std::clamp(static_cast<int>(std::lround(255.0 * std::abs(values[i]) / top)), 1, 255);
    } else if (i < redundant.size() && redundant[i]) {
      level = 96;
    }
    os.put(static_cast<char>(level));
  }
}

}  // namespace actspec
