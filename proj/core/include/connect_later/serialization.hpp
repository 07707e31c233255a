#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "connect_later/augmentation_graph.hpp"
#include "connect_later/connectivity.hpp"
#include "connect_later/cosmology.hpp"
#include "connect_later/heads.hpp"
#include "connect_later/redshift.hpp"
#include "connect_later/spectral_pretrain.hpp"

namespace connect_later {

using Json = nlohmann::json;

// Graph documents:
//   {"nodes": 8, "classes": [...], "domains": ["source", ...],
//    "params": {"rho", "alpha", "beta", "gamma"}, "swapped": bool,
//    "literal_edge_2_5": bool}
// Every field is optional and defaults to the 8-node construction. A
// "kernel" matrix (rows A_pre(.|i)) together with "p_u" replaces the
// built-in edge tables for arbitrary graphs.
GraphParams graph_params_from_json(const Json& j);
Json to_json(const GraphParams& p);
AugmentationGraph graph_from_json(const Json& j);
Json graph_to_json(const AugmentationGraph& g);

Json to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

// {"n", "k", "features": [[...], ...]}
Json to_json(const Encoder& e);
Encoder encoder_from_json(const Json& j);

// {"r", "k", "eta", "b": [[...]]}
Json to_json(const LinearProbe& p);
LinearProbe probe_from_json(const Json& j);

// Nodes are reported 1-based.
Json to_json(const ErmMinimizerSet& s);

Json to_json(const ConnectivityReport& r);
std::string connectivity_csv_header();
std::string connectivity_csv_row(const std::string& graph_id, const ConnectivityReport& r);

Json to_json(const NoiseModel& m);
NoiseModel noise_model_from_json(const Json& j);
Json to_json(const Cosmology& c);
Cosmology cosmology_from_json(const Json& j);

Json read_json_file(const std::filesystem::path& path);
// Two-space indented, sorted keys, trailing newline.
void write_json_file(const Json& j, const std::filesystem::path& path);
void write_text_file(const std::string& text, const std::filesystem::path& path);

// Reads key from j if present, else returns fallback. Type errors become
// ValidationError naming the key.
template <class T>
T value_or(const Json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key) || j[key].is_null()) return fallback;
  try {
    return j[key].get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(std::string("config: bad value for '") + key + "'");
  }
}

}  // namespace connect_later
