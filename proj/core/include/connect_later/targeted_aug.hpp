#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "connect_later/augmentation_graph.hpp"
#include "connect_later/errors.hpp"
#include "connect_later/heads.hpp"
#include "connect_later/matrix.hpp"
#include "connect_later/rng.hpp"

namespace connect_later {

// Targeted augmentation built from a feature space Z:
//   1. feature_extractor labels each input with z,
//   2. shift_sampler draws z' ~ p_T(z' | z) fitted to the target domain,
//   3. transformer draws x' ~ T(x' | x, z'), or returns nullopt to reject,
// so that A_ft(x' | x) = sum_z' T(x' | x, z') p_T(z' | z).
template <class Input, class Feature>
struct TargetedAugmentation {
  std::function<Feature(const Input&)> feature_extractor;
  std::function<Feature(const Feature&, Rng&)> shift_sampler;
  std::function<std::optional<Input>(const Input&, const Feature&, Rng&)> transformer;
  int max_retries = 10;

  // Each attempt draws a fresh z'. Throws AugmentationError once the
  // transformer has rejected max_retries + 1 attempts.
  Input sample(const Input& x, Rng& rng) const {
    const Feature z = feature_extractor(x);
    for (int attempt = 0; attempt <= max_retries; ++attempt) {
      const Feature z_new = shift_sampler(z, rng);
      if (auto out = transformer(x, z_new, rng)) return std::move(*out);
    }
    throw AugmentationError("targeted augmentation rejected " + std::to_string(max_retries + 1) + " attempts");
  }
};

// Tabular form of the same construction over a finite input space.
struct FiniteTargetedAugmentation {
  std::vector<std::size_t> feature_of;  // input -> feature index
  Matrix shift;                         // shift(z, z') = p_T(z' | z)
  std::vector<Matrix> transform;        // transform[z'](x, x') = T(x' | x, z')

  // A_ft(x' | x) = sum_z' T(x' | x, z') p_T(z' | z(x)); validated to be row-stochastic.
  FtAugmentation compose() const;
  std::size_t sample(std::size_t x, Rng& rng) const;
};

enum class GraphAugMode {
  literal,          // 1 -> 4, 2 -> 3 exactly as the pairing is written
  class_consistent  // each source node -> the adjacent target node of its own class
};

GraphAugMode parse_graph_aug_mode(const std::string& s);
std::string to_string(GraphAugMode m);

// Finite targeted augmentation on the 8-node construction: a deterministic
// shift of the source nodes into the target domain, identity elsewhere.
FiniteTargetedAugmentation graph_targeted_aug_spec(const AugmentationGraph& g, GraphAugMode mode);
FtAugmentation graph_targeted_aug(const AugmentationGraph& g, GraphAugMode mode);

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(std::size_t width, std::size_t height, Rgb fill = {});

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  Rgb& at(std::size_t x, std::size_t y) { return pixels_[y * width_ + x]; }
  const Rgb& at(std::size_t x, std::size_t y) const { return pixels_[y * width_ + x]; }
  const std::vector<Rgb>& pixels() const { return pixels_; }
  std::vector<Rgb>& pixels() { return pixels_; }

  friend bool operator==(const RgbImage&, const RgbImage&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<Rgb> pixels_;
};

// Binary PPM (P6, maxval 255).
RgbImage read_ppm(const std::filesystem::path& path);
void write_ppm(const RgbImage& img, const std::filesystem::path& path);
RgbImage parse_ppm(const std::string& bytes);
std::string serialize_ppm(const RgbImage& img);

// Per-image scale and shift of each stain concentration.
struct StainJitterDraw {
  double scale[3];
  double shift[3];
};

// Hematoxylin-eosin-DAB color jitter. Pixels go to optical density
// -log10((v + 1) / 256), are unmixed into stain concentrations, each channel
// is scaled by U(1 - sigma, 1 + sigma) and shifted by U(-sigma, sigma) (one
// draw per image), then remixed and mapped back to 8-bit.
RgbImage stain_color_jitter(const RgbImage& img, double sigma, Rng& rng);
RgbImage apply_stain_jitter(const RgbImage& img, const StainJitterDraw& draw);

}  // namespace connect_later
