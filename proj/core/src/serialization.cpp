#include "connect_later/serialization.hpp"

#include <fstream>
#include <sstream>

#include "connect_later/errors.hpp"
#include "connect_later/format.hpp"

namespace connect_later {

namespace {

Domain parse_domain(const Json& j) {
  const auto s = j.get<std::string>();
  if (s == "source") return Domain::source;
  if (s == "target") return Domain::target;
  throw ValidationError("graph: unknown domain '" + s + "'");
}

}  // namespace

GraphParams graph_params_from_json(const Json& j) {
  GraphParams p;
  if (j.contains("params")) {
    const Json& q = j["params"];
    p.rho = value_or(q, "rho", p.rho);
    p.alpha = value_or(q, "alpha", p.alpha);
    p.beta = value_or(q, "beta", p.beta);
    p.gamma = value_or(q, "gamma", p.gamma);
  }
  p.swapped = value_or(j, "swapped", p.swapped);
  p.literal_edge_2_5 = value_or(j, "literal_edge_2_5", p.literal_edge_2_5);
  return p;
}

Json to_json(const GraphParams& p) {
  return {{"params", {{"rho", p.rho}, {"alpha", p.alpha}, {"beta", p.beta}, {"gamma", p.gamma}}},
          {"swapped", p.swapped},
          {"literal_edge_2_5", p.literal_edge_2_5}};
}

AugmentationGraph graph_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("graph: document must be an object");
  try {
    std::vector<Label> classes = connect_later_classes();
    std::vector<Domain> domains = connect_later_domains();
    if (j.contains("classes")) classes = j["classes"].get<std::vector<Label>>();
    if (j.contains("domains")) {
      domains.clear();
      for (const auto& d : j["domains"]) domains.push_back(parse_domain(d));
    }

    Matrix kernel;
    Vector p_u;
    if (j.contains("kernel")) {
      kernel = matrix_from_json(j["kernel"]);
      p_u = j.contains("p_u") ? j["p_u"].get<Vector>() : Vector(kernel.rows(), 1.0 / static_cast<double>(kernel.rows()));
    } else {
      const GraphParams p = graph_params_from_json(j);
      p.validate();
      kernel = connect_later_kernel(p);
      p_u = Vector(8, 1.0 / 8.0);
    }
    const auto nodes = value_or<std::size_t>(j, "nodes", kernel.rows());
    if (nodes != kernel.rows()) throw ValidationError("graph: 'nodes' does not match the kernel size");
    return AugmentationGraph(std::move(classes), std::move(domains), std::move(kernel), std::move(p_u));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("graph: ") + e.what());
  }
}

Json graph_to_json(const AugmentationGraph& g) {
  Json domains = Json::array();
  for (Domain d : g.domains()) domains.push_back(d == Domain::source ? "source" : "target");
  return {{"nodes", g.size()}, {"classes", g.classes()}, {"domains", domains}, {"kernel", to_json(g.a_pre())},
          {"p_u", g.p_u()}};
}

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(Vector(m.row(i).begin(), m.row(i).end()));
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  try {
    return Matrix::from_rows(j.get<std::vector<Vector>>());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("matrix: ") + e.what());
  }
}

Json to_json(const Encoder& e) { return {{"n", e.size()}, {"k", e.dim()}, {"features", to_json(e.features())}}; }

Encoder encoder_from_json(const Json& j) {
  Matrix f = matrix_from_json(j.at("features"));
  if (value_or<std::size_t>(j, "n", f.rows()) != f.rows() || value_or<std::size_t>(j, "k", f.cols()) != f.cols())
    throw ValidationError("encoder: n/k disagree with the feature table");
  return Encoder(std::move(f));
}

Json to_json(const LinearProbe& p) {
  return {{"r", p.b.rows()}, {"k", p.b.cols()}, {"eta", p.eta}, {"b", to_json(p.b)}};
}

LinearProbe probe_from_json(const Json& j) {
  LinearProbe p{matrix_from_json(j.at("b")), value_or(j, "eta", kDefaultRidge)};
  if (!p.b.all_finite()) throw ValidationError("probe: non-finite entries");
  return p;
}

Json to_json(const ErmMinimizerSet& s) {
  Json nodes = Json::array();
  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    const NodeVerdict& v = s.nodes[i];
    const char* status = v.status == NodeStatus::forced ? "forced" : v.status == NodeStatus::tied ? "tied" : "free";
    nodes.push_back({{"node", i + 1}, {"status", status}, {"labels", v.labels}, {"votes", v.votes}});
  }
  auto one_based = [](std::vector<std::size_t> v) {
    for (auto& x : v) ++x;
    return v;
  };
  return {{"nodes", nodes},
          {"forced", one_based(s.nodes_with(NodeStatus::forced))},
          {"tied", one_based(s.nodes_with(NodeStatus::tied))},
          {"free", one_based(s.nodes_with(NodeStatus::free))},
          {"min_target_error", s.min_target_error},
          {"max_target_error", s.max_target_error}};
}

Json to_json(const ConnectivityReport& r) {
  return {{"rho", r.rho},
          {"alpha", r.alpha},
          {"beta", r.beta},
          {"gamma", r.gamma},
          {"ratio_alpha_gamma", r.ratio_alpha_gamma},
          {"ratio_beta_gamma", r.ratio_beta_gamma},
          {"condition_satisfied", r.condition_satisfied}};
}

std::string connectivity_csv_header() { return "graph_id,rho,alpha,beta,gamma,ratio_ag,ratio_bg,satisfied\n"; }

std::string connectivity_csv_row(const std::string& graph_id, const ConnectivityReport& r) {
  return graph_id + "," + format_real(r.rho) + "," + format_real(r.alpha) + "," + format_real(r.beta) + "," +
         format_real(r.gamma) + "," + format_real(r.ratio_alpha_gamma) + "," + format_real(r.ratio_beta_gamma) + "," +
         (r.condition_satisfied ? "true" : "false") + "\n";
}

Json to_json(const NoiseModel& m) { return {{"upper_edges", m.upper_edges}, {"sigma", m.sigma}}; }

NoiseModel noise_model_from_json(const Json& j) {
  NoiseModel m{value_or(j, "upper_edges", std::vector<double>{}), value_or(j, "sigma", std::vector<double>{})};
  m.validate();
  return m;
}

Json to_json(const Cosmology& c) { return {{"hubble_constant", c.hubble_constant}, {"omega_matter", c.omega_matter}}; }

Cosmology cosmology_from_json(const Json& j) {
  Cosmology c;
  c.hubble_constant = value_or(j, "hubble_constant", c.hubble_constant);
  c.omega_matter = value_or(j, "omega_matter", c.omega_matter);
  c.validate();
  return c;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open " + path.string());
  try {
    return Json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::string& text, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + path.string());
  f << text;
}

void write_json_file(const Json& j, const std::filesystem::path& path) { write_text_file(j.dump(2) + "\n", path); }

}  // namespace connect_later
