#include "infcen/instance_io.hpp"

#include <istream>
#include <ostream>

#include <json.hpp>

namespace infcen {

void write_instance_json(std::ostream& out, const ExplicitInstance& inst) {
  nlohmann::ordered_json doc;
  doc["n"] = inst.node_count();
  auto& rows = doc["rows"] = nlohmann::ordered_json::array();
  for (Mask s = 0; s <= inst.full_mask(); ++s) {
    nlohmann::ordered_json row;
    row["S"] = s;
    auto& dist = row["dist"] = nlohmann::ordered_json::object();
    for (const auto& [t, p] : inst.row(s)) dist[std::to_string(t)] = p;
    rows.push_back(std::move(row));
  }
  if (inst.weights()) doc["weights"] = inst.weights()->w;
  out << doc.dump(2) << '\n';
}

ExplicitInstance read_instance_json(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("instance JSON: ") + e.what());
  }
  int n = doc.at("n").get<int>();
  if (n < 1 || n > ExplicitInstance::kMaxNodes)
    throw ParseError("instance JSON: n out of range");
  std::vector<ExplicitInstance::Row> rows(std::size_t(1) << n);
  std::vector<bool> filled(rows.size(), false);
  for (const auto& row : doc.at("rows")) {
    Mask s = row.at("S").get<Mask>();
    if (s >= rows.size()) throw ParseError("instance JSON: seed mask too big");
    if (filled[s]) throw ParseError("instance JSON: duplicate row");
    filled[s] = true;
    for (const auto& [key, value] : row.at("dist").items())
      rows[s].emplace_back(static_cast<Mask>(std::stoul(key)),
                           value.get<double>());
  }
  for (std::size_t s = 0; s < rows.size(); ++s)
    if (!filled[s])
      throw ParseError("instance JSON: missing row for seed mask " +
                       std::to_string(s));
  std::optional<NodeWeights> weights;
  if (doc.contains("weights"))
    weights = NodeWeights::from(doc["weights"].get<std::vector<double>>());
  try {
    return ExplicitInstance::from_rows(n, std::move(rows), std::move(weights));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("instance JSON: ") + e.what());
  }
}

}  // namespace infcen
