#include "connect_later/targeted_aug.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "connect_later/linalg.hpp"

namespace connect_later {

FtAugmentation FiniteTargetedAugmentation::compose() const {
  const std::size_t n = feature_of.size();
  if (transform.size() != shift.cols()) throw ValidationError("FiniteTargetedAugmentation: one transform per feature required");
  Matrix a(n, n);
  for (std::size_t x = 0; x < n; ++x) {
    const std::size_t z = feature_of[x];
    if (z >= shift.rows()) throw ValidationError("FiniteTargetedAugmentation: feature index out of range");
    for (std::size_t zp = 0; zp < shift.cols(); ++zp) {
      const double p = shift(z, zp);
      if (p == 0.0) continue;
      const Matrix& t = transform[zp];
      if (t.rows() != n || t.cols() != n) throw ValidationError("FiniteTargetedAugmentation: transform shape mismatch");
      for (std::size_t xp = 0; xp < n; ++xp) a(x, xp) += p * t(x, xp);
    }
  }
  return FtAugmentation(std::move(a));
}

namespace {
std::size_t sample_row(std::span<const double> probs, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    acc += probs[i];
    last = i;
    if (u < acc) return i;
  }
  return last;
}
}  // namespace

std::size_t FiniteTargetedAugmentation::sample(std::size_t x, Rng& rng) const {
  const std::size_t z_new = sample_row(shift.row(feature_of.at(x)), rng);
  return sample_row(transform.at(z_new).row(x), rng);
}

GraphAugMode parse_graph_aug_mode(const std::string& s) {
  if (s == "literal") return GraphAugMode::literal;
  if (s == "class_consistent" || s == "class-consistent") return GraphAugMode::class_consistent;
  throw ValidationError("unknown targeted augmentation mode '" + s + "'");
}

std::string to_string(GraphAugMode m) { return m == GraphAugMode::literal ? "literal" : "class_consistent"; }

FiniteTargetedAugmentation graph_targeted_aug_spec(const AugmentationGraph& g, GraphAugMode mode) {
  if (g.size() != 8 || g.source_nodes() != std::vector<std::size_t>{0, 1})
    throw ValidationError("graph_targeted_aug: requires the 8-node construction with source {1, 2}");

  // The written pairing sends input 1 to 4 and input 2 to 3 (0-based 0->3, 1->2).
  std::vector<std::size_t> image{3, 2};
  if (mode == GraphAugMode::class_consistent) {
    const std::vector<std::size_t> column{2, 3};
    for (std::size_t s = 0; s < 2; ++s) {
      const auto match = std::find_if(column.begin(), column.end(),
                                      [&](std::size_t t) { return g.class_of(t) == g.class_of(s); });
      if (match == column.end()) throw ValidationError("graph_targeted_aug: no same-class partner for a source node");
      image[s] = *match;
    }
  }

  // Z is the node set itself: p_T(z'|z) moves source nodes onto their image,
  // and T(x'|x, z') = 1[x' = z'].
  FiniteTargetedAugmentation spec;
  spec.feature_of.resize(8);
  spec.shift = Matrix::identity(8);
  for (std::size_t x = 0; x < 8; ++x) spec.feature_of[x] = x;
  for (std::size_t s = 0; s < 2; ++s) {
    spec.shift(s, s) = 0.0;
    spec.shift(s, image[s]) = 1.0;
  }
  spec.transform.reserve(8);
  for (std::size_t zp = 0; zp < 8; ++zp) {
    Matrix t(8, 8);
    for (std::size_t x = 0; x < 8; ++x) t(x, zp) = 1.0;
    spec.transform.push_back(std::move(t));
  }
  return spec;
}

FtAugmentation graph_targeted_aug(const AugmentationGraph& g, GraphAugMode mode) {
  return graph_targeted_aug_spec(g, mode).compose();
}

RgbImage::RgbImage(std::size_t width, std::size_t height, Rgb fill)
    : width_(width), height_(height), pixels_(width * height, fill) {}

RgbImage parse_ppm(const std::string& bytes) {
  std::istringstream in(bytes);
  std::string magic;
  in >> magic;
  if (magic != "P6") throw ValidationError("PPM: expected P6 magic");
  auto next_int = [&]() {
    // Skip whitespace and '#' comments between header fields.
    while (true) {
      in >> std::ws;
      if (in.peek() == '#') {
        std::string line;
        std::getline(in, line);
      } else {
        break;
      }
    }
    long v = -1;
    if (!(in >> v) || v < 0) throw ValidationError("PPM: malformed header");
    return v;
  };
  const long w = next_int();
  const long h = next_int();
  const long maxval = next_int();
  if (maxval != 255) throw ValidationError("PPM: only maxval 255 is supported");
  in.get();  // single whitespace before the raster

  RgbImage img(static_cast<std::size_t>(w), static_cast<std::size_t>(h));
  for (Rgb& p : img.pixels()) {
    char c[3];
    if (!in.read(c, 3)) throw ValidationError("PPM: truncated raster");
    p = {static_cast<std::uint8_t>(c[0]), static_cast<std::uint8_t>(c[1]), static_cast<std::uint8_t>(c[2])};
  }
  return img;
}

std::string serialize_ppm(const RgbImage& img) {
  std::string out = "P6\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  out.reserve(out.size() + 3 * img.pixels().size());
  for (const Rgb& p : img.pixels()) {
    out.push_back(static_cast<char>(p.r));
    out.push_back(static_cast<char>(p.g));
    out.push_back(static_cast<char>(p.b));
  }
  return out;
}

RgbImage read_ppm(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_ppm(ss.str());
}

void write_ppm(const RgbImage& img, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + path.string());
  const std::string bytes = serialize_ppm(img);
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

namespace {

// Rows are the RGB optical-density signatures of hematoxylin, eosin and DAB
// (Ruifrok & Johnston 2001, as used by scikit-image's rgb2hed).
const Matrix& stain_matrix() {
  static const Matrix m{{0.65, 0.70, 0.29}, {0.07, 0.99, 0.11}, {0.27, 0.57, 0.78}};
  return m;
}

const Matrix& unmixing_matrix() {
  static const Matrix inv = [] {
    const Matrix& m = stain_matrix();
    const double det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                       m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                       m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    if (std::abs(det) < 1e-12) throw NumericalError("stain_color_jitter: stain matrix is singular");
    Matrix r(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        const std::size_t a = (j + 1) % 3, b = (j + 2) % 3, c = (i + 1) % 3, d = (i + 2) % 3;
        r(i, j) = (m(a, c) * m(b, d) - m(a, d) * m(b, c)) / det;
      }
    return r;
  }();
  return inv;
}

std::uint8_t to_byte(double od) {
  const double v = 256.0 * std::pow(10.0, -od) - 1.0;
  return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
}

}  // namespace

RgbImage apply_stain_jitter(const RgbImage& img, const StainJitterDraw& draw) {
  const Matrix& mix = stain_matrix();
  const Matrix& unmix = unmixing_matrix();
  RgbImage out = img;
  for (Rgb& p : out.pixels()) {
    const double od[3] = {-std::log10((p.r + 1.0) / 256.0), -std::log10((p.g + 1.0) / 256.0),
                          -std::log10((p.b + 1.0) / 256.0)};
    double conc[3];
    for (std::size_t s = 0; s < 3; ++s) {
      conc[s] = od[0] * unmix(0, s) + od[1] * unmix(1, s) + od[2] * unmix(2, s);
      conc[s] = conc[s] * draw.scale[s] + draw.shift[s];
    }
    double remixed[3];
    for (std::size_t c = 0; c < 3; ++c) remixed[c] = conc[0] * mix(0, c) + conc[1] * mix(1, c) + conc[2] * mix(2, c);
    p = {to_byte(remixed[0]), to_byte(remixed[1]), to_byte(remixed[2])};
  }
  return out;
}

RgbImage stain_color_jitter(const RgbImage& img, double sigma, Rng& rng) {
  if (!(sigma >= 0.0 && sigma <= 1.0)) throw ValidationError("stain_color_jitter: sigma must lie in [0, 1]");
  StainJitterDraw draw{};
  for (std::size_t s = 0; s < 3; ++s) {
    draw.scale[s] = rng.uniform(1.0 - sigma, 1.0 + sigma);
    draw.shift[s] = rng.uniform(-sigma, sigma);
  }
  return apply_stain_jitter(img, draw);
}

}  // namespace connect_later
