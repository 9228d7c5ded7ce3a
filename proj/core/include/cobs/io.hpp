#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "cobs/clustering.hpp"
#include "cobs/constraints.hpp"
#include "cobs/ensemble.hpp"
#include "cobs/experiment.hpp"

namespace cobs {

using json = nlohmann::json;

json to_json(const Provenance& p);
Provenance provenance_from_json(const json& j);

json to_json(const Clustering& c);
Clustering clustering_from_json(const json& j);

/// {"dataset": {"name", "hash"}, "clusterings": [{"provenance", "assignment"}], "skipped": [...]}
json to_json(const ClusteringEnsemble& e);
/// Weights are reset to 1/|C|.
ClusteringEnsemble ensemble_from_json(const json& j);

/// [{"i", "j", "kind"}] in insertion order.
json to_json(const ConstraintSet& cs);
ConstraintSet constraints_from_json(const json& j);

json to_json(const HyperGrid& g);
/// Accepts the string "default" or an object; missing blocks disable an
/// algorithm, missing fields inside a block take their defaults.
HyperGrid grid_from_json(const json& j);

json to_json(const ResultTable& t);
std::string to_csv(const ResultTable& t);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j, int indent = -1);
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace cobs
