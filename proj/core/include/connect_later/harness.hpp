#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "connect_later/augmentation_graph.hpp"
#include "connect_later/cosmology.hpp"
#include "connect_later/heads.hpp"
#include "connect_later/lightcurve.hpp"
#include "connect_later/redshift.hpp"
#include "connect_later/serialization.hpp"
#include "connect_later/targeted_aug.hpp"

namespace connect_later {

// Named numeric table, emitted as CSV.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::string to_csv() const;
};

struct ScenarioReport {
  std::string scenario;
  Json config;  // resolved configuration, enough to rerun bit for bit
  std::uint64_t seed = 0;
  std::map<std::string, double> metrics;
  std::map<std::string, Table> tables;
  Json details = Json::object();
  double wall_clock_seconds = 0.0;

  // Wall-clock time is left out unless requested, so reports of identical
  // runs are byte-identical.
  Json to_json(bool include_timing = false) const;
  // Throws NumericalError naming the first non-finite metric.
  void check_finite() const;
};

// Repro of the 8-node construction.
struct AppendixConfig {
  GraphParams params;  // `swapped` is ignored: both kernels are evaluated
  double eta = kDefaultRidge;
  std::size_t k_min = 1;
  std::size_t k_max = 8;
  GraphAugMode aug_mode = GraphAugMode::class_consistent;

  static AppendixConfig from_json(const Json& j);
  Json to_json() const;
};

// One row per k: standard fine-tuning, Connect Later (configured and
// literal pairings) on the misaligned graph, and the probe on the aligned
// graph. Metrics carry the ERM minimizer bounds and best-k summaries.
ScenarioReport run_appendix_repro(const AppendixConfig& cfg);

struct SweepConfig {
  GraphParams params;
  double eta = kDefaultRidge;
  std::size_t steps = 11;  // grid points on [0, 1]
  std::size_t k = 2;
  GraphAugMode aug_mode = GraphAugMode::class_consistent;

  static SweepConfig from_json(const Json& j);
  Json to_json() const;
};

// Interpolates aligned (s = 0) to misaligned (s = 1) kernels.
ScenarioReport run_misalignment_sweep(const SweepConfig& cfg);

struct ConnectivityValidationConfig {
  std::vector<double> separations{0.0, 1.0, 2.0, 4.0};
  std::size_t n_train = 1000;
  std::size_t n_test = 10000;
  std::size_t n_seeds = 5;
  double tolerance = 0.05;
  std::uint64_t seed = 0;

  static ConnectivityValidationConfig from_json(const Json& j, std::uint64_t seed);
  Json to_json() const;
};

// Empirical connectivity between N(0,1) and N(d,1) against the Bayes error.
ScenarioReport run_connectivity_validation(const ConnectivityValidationConfig& cfg);

// Exact connectivity of each named graph.
ScenarioReport run_exact_connectivity(const std::vector<std::pair<std::string, AugmentationGraph>>& graphs,
                                      PairAveraging mode);

struct RedshiftDemoConfig {
  std::size_t n_source = 500;
  std::size_t n_target = 500;
  double source_z_min = 0.05;  // uniform
  double source_z_max = 0.35;
  double target_z_min = 0.1;  // loguniform
  double target_z_max = 1.0;
  double reference_amplitude = 3000.0;  // peak amplitude at reference_redshift
  double reference_redshift = 0.1;
  double source_noise = 10.0;
  double target_noise_min = 8.0;
  double target_noise_max = 15.0;
  std::vector<double> band_edges{4250.0, 5500.0, 6900.0, 8100.0, 9200.0, 11000.0};
  int max_retries = 10;
  double season_gap_days = kDefaultSeasonGapDays;
  std::size_t histogram_bins = 50;
  double histogram_max = 3.0;
  Cosmology cosmology;
  std::uint64_t seed = 0;

  static RedshiftDemoConfig from_json(const Json& j, std::uint64_t seed);
  Json to_json() const;
};

// Synthetic population generator shared by the demo and `synth lightcurves`.
// Intrinsic brightness is fixed, so observed amplitude falls with distance,
// and rise/fall times are dilated by (1 + z).
LightCurve synth_population_member(const RedshiftDemoConfig& cfg, double z, double noise, const std::string& id,
                                   Rng& rng);
std::vector<LightCurve> synth_target_population(const RedshiftDemoConfig& cfg);
NoiseModel default_noise_model(const RedshiftDemoConfig& cfg);

// 1-D Wasserstein distance between two histograms on the same uniform bins.
double histogram_w1(const std::vector<double>& a, const std::vector<double>& b, double bin_width);
std::vector<double> normalized_histogram(const std::vector<double>& values, std::size_t bins, double max);

struct RedshiftDemoResult {
  ScenarioReport report;
  std::vector<AugmentedLightCurve> augmented;
};

RedshiftDemoResult run_redshift_demo(const RedshiftDemoConfig& cfg);

}  // namespace connect_later
