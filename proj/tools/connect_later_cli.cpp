// connect-later: command line front end for the scenario runners.
//
// Every subcommand writes a JSON report (and CSV tables where relevant) into
// --out. Exit codes: 0 ok, 1 usage, 2 validation, 3 numerical, 4 augmentation
// retries exhausted.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "connect_later/connectivity.hpp"
#include "connect_later/errors.hpp"
#include "connect_later/harness.hpp"
#include "connect_later/lightcurve.hpp"
#include "connect_later/redshift.hpp"
#include "connect_later/serialization.hpp"
#include "connect_later/targeted_aug.hpp"

namespace fs = std::filesystem;
using namespace connect_later;

namespace {

struct Common {
  std::string config;
  std::uint64_t seed = 0;
  std::string out = ".";
  bool timing = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "JSON configuration file")->check(CLI::ExistingFile);
  app->add_option("--seed", c.seed, "RNG seed");
  app->add_option("--out", c.out, "output directory");
  app->add_flag("--timing", c.timing, "include wall-clock seconds in the JSON report");
}

Json load_config(const Common& c) { return c.config.empty() ? Json::object() : read_json_file(c.config); }

fs::path out_dir(const Common& c) {
  fs::path dir(c.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ValidationError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

void write_report(const ScenarioReport& r, const Common& c) {
  const fs::path dir = out_dir(c);
  write_json_file(r.to_json(c.timing), dir / (r.scenario + ".json"));
  for (const auto& [name, table] : r.tables) write_text_file(table.to_csv(), dir / (r.scenario + "_" + name + ".csv"));
  std::cout << "wrote " << (dir / (r.scenario + ".json")).string() << "\n";
}

void cmd_repro_appendix(const Common& c) {
  ScenarioReport r = run_appendix_repro(AppendixConfig::from_json(load_config(c)));
  r.seed = c.seed;
  write_report(r, c);
}

void cmd_sweep(const Common& c) {
  ScenarioReport r = run_misalignment_sweep(SweepConfig::from_json(load_config(c)));
  r.seed = c.seed;
  write_report(r, c);
}

// Config: {"averaging": "all_pairs" | "nonzero_only", "graphs": {id: graph document}}.
// Without "graphs" the aligned and misaligned 8-node graphs are used.
void cmd_connectivity_exact(const Common& c) {
  const Json cfg = load_config(c);
  const auto averaging = value_or<std::string>(cfg, "averaging", "all_pairs");
  PairAveraging mode;
  if (averaging == "all_pairs") mode = PairAveraging::all_pairs;
  else if (averaging == "nonzero_only") mode = PairAveraging::nonzero_only;
  else throw ValidationError("connectivity: unknown averaging '" + averaging + "'");

  std::vector<std::pair<std::string, AugmentationGraph>> graphs;
  if (cfg.contains("graphs")) {
    if (!cfg["graphs"].is_object()) throw ValidationError("connectivity: 'graphs' must be an object");
    for (const auto& [id, doc] : cfg["graphs"].items()) graphs.emplace_back(id, graph_from_json(doc));
  } else {
    graphs.emplace_back("aligned", graph_from_json({{"swapped", false}}));
    graphs.emplace_back("misaligned", graph_from_json({{"swapped", true}}));
  }

  ScenarioReport r = run_exact_connectivity(graphs, mode);
  r.seed = c.seed;
  write_report(r, c);
  std::string csv = connectivity_csv_header();
  for (const auto& [id, g] : graphs) csv += connectivity_csv_row(id, exact_connectivity(positive_pair_matrix(g), g, mode));
  write_text_file(csv, out_dir(c) / "connectivity.csv");
}

// Config: {"mean_a": [...], "mean_b": [...], "n_train", "n_test"}; unit
// isotropic Gaussians. "separation" is shorthand for 1-D means 0 and d.
void cmd_connectivity_estimate(const Common& c) {
  const Json cfg = load_config(c);
  Vector mean_a{0.0};
  Vector mean_b{value_or(cfg, "separation", 2.0)};
  mean_a = value_or(cfg, "mean_a", mean_a);
  mean_b = value_or(cfg, "mean_b", mean_b);
  if (mean_a.empty() || mean_a.size() != mean_b.size()) throw ValidationError("connectivity: means differ in dimension");
  EmpiricalConnectivityOptions opts;
  opts.n_train = value_or(cfg, "n_train", opts.n_train);
  opts.n_test = value_or(cfg, "n_test", opts.n_test);

  auto gaussian = [](Vector mean) {
    return PointSampler([mean](Rng& rng) {
      Vector x(mean.size());
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.normal(mean[i], 1.0);
      return x;
    });
  };
  Rng rng = Rng(c.seed).split("connectivity_estimate");
  const double est = empirical_connectivity(gaussian(mean_a), gaussian(mean_b), opts, rng);
  double d2 = 0.0;
  for (std::size_t i = 0; i < mean_a.size(); ++i) d2 += (mean_a[i] - mean_b[i]) * (mean_a[i] - mean_b[i]);

  ScenarioReport r;
  r.scenario = "connectivity_estimate";
  r.seed = c.seed;
  r.config = {{"mean_a", mean_a}, {"mean_b", mean_b}, {"n_train", opts.n_train}, {"n_test", opts.n_test}};
  r.metrics = {{"estimate", est}, {"bayes_error", gaussian_bayes_error(std::sqrt(d2))}};
  r.metrics["abs_diff"] = std::abs(est - r.metrics["bayes_error"]);
  r.check_finite();
  write_report(r, c);
}

void cmd_connectivity_validate(const Common& c) {
  write_report(run_connectivity_validation(ConnectivityValidationConfig::from_json(load_config(c), c.seed)), c);
}

// Config: {"noise_model": {...}, "cosmology": {...}, "max_retries", "strict_snr",
// "season_gap_days"}. Without a noise model the default synthetic target
// population estimate is used.
void cmd_augment_redshift(const Common& c, const std::string& input, const std::string& sidecar) {
  const Json cfg = load_config(c);
  const LightCurve lc = read_lightcurve(input, sidecar);
  const RedshiftDemoConfig demo;
  const NoiseModel noise = cfg.contains("noise_model") ? noise_model_from_json(cfg["noise_model"]) : default_noise_model(demo);
  const Cosmology cosmo = cfg.contains("cosmology") ? cosmology_from_json(cfg["cosmology"]) : Cosmology{};
  RedshiftAugmentOptions opts;
  opts.max_retries = value_or(cfg, "max_retries", opts.max_retries);
  opts.season_gap_days = value_or(cfg, "season_gap_days", opts.season_gap_days);
  if (value_or(cfg, "strict_snr", false)) opts.snr_rule = SnrRule::strictly_over;

  Rng rng = Rng(c.seed).split("augment_redshift");
  const AugmentedLightCurve aug = redshift_augment(lc, noise, cosmo, rng, opts);

  const fs::path dir = out_dir(c);
  const std::string stem = (lc.id.empty() ? std::string("curve") : lc.id) + "_augmented";
  write_text_file(lightcurve_csv(aug.curve), dir / (stem + ".csv"));
  Json meta = {{"redshift", aug.curve.redshift}, {"id", stem}, {"parent_id", aug.parent_id},
               {"z_prime", aug.z_prime},        {"retries", aug.retries}, {"seed", c.seed},
               {"n_obs", aug.curve.size()},     {"detections", count_detections(aug.curve, opts.snr_rule)}};
  if (aug.curve.class_label) meta["class"] = *aug.curve.class_label;
  write_json_file(meta, dir / (stem + ".json"));
  std::cout << "wrote " << (dir / (stem + ".csv")).string() << "\n";
}

// Smooth pink background with purple nuclei, loosely H&E-like.
RgbImage synthetic_tissue(std::size_t size, Rng& rng) {
  RgbImage img(size, size, Rgb{232, 190, 210});
  const int nuclei = 12;
  for (int n = 0; n < nuclei; ++n) {
    const double cx = rng.uniform(0.0, static_cast<double>(size));
    const double cy = rng.uniform(0.0, static_cast<double>(size));
    const double rad = rng.uniform(2.0, 6.0);
    for (std::size_t y = 0; y < size; ++y)
      for (std::size_t x = 0; x < size; ++x) {
        const double dx = static_cast<double>(x) - cx, dy = static_cast<double>(y) - cy;
        if (dx * dx + dy * dy <= rad * rad) img.at(x, y) = Rgb{92, 60, 150};
      }
  }
  return img;
}

void cmd_augment_stain(const Common& c, const std::string& input, bool synthetic, double sigma) {
  Rng rng = Rng(c.seed).split("augment_stain");
  RgbImage img;
  if (!input.empty()) img = read_ppm(input);
  else if (synthetic) {
    Rng img_rng = Rng(c.seed).split("synthetic_tissue");
    img = synthetic_tissue(64, img_rng);
  } else {
    throw ValidationError("augment stain: pass --input <ppm> or --synthetic");
  }
  const RgbImage out = stain_color_jitter(img, sigma, rng);

  const fs::path dir = out_dir(c);
  if (synthetic) write_ppm(img, dir / "stain_input.ppm");
  write_ppm(out, dir / "stain_output.ppm");

  double max_diff = 0.0, mean_diff = 0.0;
  for (std::size_t i = 0; i < img.pixels().size(); ++i) {
    const Rgb a = img.pixels()[i], b = out.pixels()[i];
    for (double d : {double(a.r) - b.r, double(a.g) - b.g, double(a.b) - b.b}) {
      max_diff = std::max(max_diff, std::abs(d));
      mean_diff += std::abs(d);
    }
  }
  mean_diff /= 3.0 * static_cast<double>(std::max<std::size_t>(img.pixels().size(), 1));

  ScenarioReport r;
  r.scenario = "stain_jitter";
  r.seed = c.seed;
  r.config = {{"sigma", sigma}, {"input", input.empty() ? "synthetic" : fs::path(input).filename().string()}};
  r.metrics = {{"width", static_cast<double>(img.width())},
               {"height", static_cast<double>(img.height())},
               {"max_abs_channel_change", max_diff},
               {"mean_abs_channel_change", mean_diff}};
  write_report(r, c);
}

// Writes <id>.csv and <id>.json for a synthetic source population; config
// keys follow the redshift demo.
void cmd_synth(const Common& c, std::size_t count) {
  const Json cfg = load_config(c);
  const RedshiftDemoConfig demo = RedshiftDemoConfig::from_json(cfg, c.seed);
  const fs::path dir = out_dir(c);
  const Rng root = Rng(c.seed).split("synth");
  Table t{{"index", "redshift", "n_obs", "detections", "class"}, {}};
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng = root.split(i);
    const double z = rng.uniform(demo.source_z_min, demo.source_z_max);
    const std::string id = "lc_" + std::to_string(i);
    const LightCurve lc = synth_population_member(demo, z, demo.source_noise, id, rng);
    write_lightcurve_csv(lc, dir / (id + ".csv"));
    Json meta = {{"redshift", lc.redshift}, {"id", lc.id}};
    if (lc.class_label) meta["class"] = *lc.class_label;
    write_json_file(meta, dir / (id + ".json"));
    t.rows.push_back({static_cast<double>(i), z, static_cast<double>(lc.size()),
                      static_cast<double>(count_detections(lc)), static_cast<double>(lc.class_label.value_or(0))});
  }
  ScenarioReport r;
  r.scenario = "synth_lightcurves";
  r.seed = c.seed;
  r.config = demo.to_json();
  r.config["count"] = count;
  r.metrics = {{"count", static_cast<double>(count)}};
  r.tables["index"] = std::move(t);
  write_report(r, c);
}

void cmd_demo(const Common& c) {
  const RedshiftDemoResult res = run_redshift_demo(RedshiftDemoConfig::from_json(load_config(c), c.seed));
  for (const auto& row : res.report.tables.at("summary").rows)
    if (row.back() == 0.0)
      std::cerr << "warning: source curve " << static_cast<std::size_t>(row[0]) << " exhausted its retries\n";
  write_report(res.report, c);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Connect Later numerical laboratory"};
  app.require_subcommand(1);
  Common common;

  auto* repro = app.add_subcommand("repro", "exact reproductions");
  repro->require_subcommand(1);
  auto* appendix = repro->add_subcommand("appendix", "8-node augmentation graph construction");
  add_common(appendix, common);

  auto* sweep = app.add_subcommand("sweep", "parameter sweeps");
  sweep->require_subcommand(1);
  auto* misalign = sweep->add_subcommand("misalignment", "interpolate aligned to misaligned kernels");
  add_common(misalign, common);

  auto* conn = app.add_subcommand("connectivity", "connectivity measures");
  conn->require_subcommand(1);
  auto* exact = conn->add_subcommand("exact", "exact connectivity of graphs");
  auto* estimate = conn->add_subcommand("estimate", "classifier-based estimate between two Gaussians");
  auto* validate = conn->add_subcommand("validate", "estimator against the Bayes error");
  for (auto* s : {exact, estimate, validate}) add_common(s, common);

  auto* augment = app.add_subcommand("augment", "targeted augmentations");
  augment->require_subcommand(1);
  std::string lc_input, lc_sidecar;
  auto* redshift = augment->add_subcommand("redshift", "redshift augmentation of one light curve");
  add_common(redshift, common);
  redshift->add_option("--input", lc_input, "light curve CSV")->required()->check(CLI::ExistingFile);
  redshift->add_option("--sidecar", lc_sidecar, "JSON sidecar {redshift, class, id}")->required()->check(CLI::ExistingFile);

  std::string ppm_input;
  bool synthetic = false;
  double sigma = 0.05;
  auto* stain = augment->add_subcommand("stain", "stain color jitter of a PPM image");
  add_common(stain, common);
  auto* in_opt = stain->add_option("--input", ppm_input, "binary PPM image")->check(CLI::ExistingFile);
  stain->add_flag("--synthetic", synthetic, "use a generated 64x64 tissue image")->excludes(in_opt);
  stain->add_option("--sigma", sigma, "jitter strength in [0, 1]");

  auto* synth = app.add_subcommand("synth", "synthetic data");
  synth->require_subcommand(1);
  std::size_t count = 10;
  auto* lcs = synth->add_subcommand("lightcurves", "synthetic source light curves");
  add_common(lcs, common);
  lcs->add_option("--count", count, "number of curves");

  auto* demo = app.add_subcommand("demo", "demonstrations");
  demo->require_subcommand(1);
  auto* dist = demo->add_subcommand("redshift-dist", "redshift distribution shift of the augmentation");
  add_common(dist, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*appendix) cmd_repro_appendix(common);
    else if (*misalign) cmd_sweep(common);
    else if (*exact) cmd_connectivity_exact(common);
    else if (*estimate) cmd_connectivity_estimate(common);
    else if (*validate) cmd_connectivity_validate(common);
    else if (*redshift) cmd_augment_redshift(common, lc_input, lc_sidecar);
    else if (*stain) cmd_augment_stain(common, ppm_input, synthetic, sigma);
    else if (*lcs) cmd_synth(common, count);
    else if (*dist) cmd_demo(common);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const AugmentationError& e) {
    std::cerr << "augmentation failed: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
