#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "pixflow/error.hpp"
#include "pixflow/image.hpp"

namespace pixflow {

RasterImage::RasterImage(int w, int h, double fill)
    : width(w), height(h),
      intensities(static_cast<std::size_t>(std::max(w, 0)) * static_cast<std::size_t>(std::max(h, 0)),
                  fill) {}

void RasterImage::validate() const {
  if (width < 1 || height < 1) throw Error(ErrorCode::InvalidConfig, "image has zero extent");
  if (intensities.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(ErrorCode::InvalidConfig, "intensity buffer does not match width*height");
  }
  if (!channels.empty() && channels.size() != intensities.size()) {
    throw Error(ErrorCode::InvalidConfig, "channel buffer does not match width*height");
  }
  for (double v : intensities) {
    if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorCode::InvalidConfig, "intensity outside [0,1]");
  }
}

std::string_view to_string(ResizeMode mode) noexcept {
  return mode == ResizeMode::Nearest ? "nearest" : "area";
}

std::optional<ResizeMode> parse_resize_mode(std::string_view text) noexcept {
  if (text == "nearest") return ResizeMode::Nearest;
  if (text == "area") return ResizeMode::Area;
  return std::nullopt;
}

namespace {
// Widths and interpolation modes used for the physarum, rivers and retina sets.
constexpr std::array<PreprocessPreset, 3> kPresets{{
    {"physarum", 300, ResizeMode::Area, false, false, false},
    {"rivers", 200, ResizeMode::Area, true, true, false},
    {"retina", 200, ResizeMode::Nearest, true, true, true},
}};
}  // namespace

std::span<const PreprocessPreset> preprocess_presets() noexcept { return kPresets; }

std::optional<PreprocessPreset> find_preset(std::string_view name) noexcept {
  for (const auto& p : kPresets) {
    if (p.name == name) return p;
  }
  return std::nullopt;
}

double luminance(const Rgb& rgb) noexcept {
  return std::min(1.0, (0.299 * rgb[0] + 0.587 * rgb[1] + 0.114 * rgb[2]) / 255.0);
}

RasterImage crop(const RasterImage& image, std::optional<PixelCoord> center,
                 std::optional<int> width) {
  image.validate();
  const PixelCoord c = center.value_or(PixelCoord{image.width / 2, image.height / 2});
  int side = 0;
  if (width) {
    side = *width;
  } else {
    // largest square window around c
    for (side = std::min(image.width, image.height); side > 0; --side) {
      const int x0 = c.x - side / 2;
      const int y0 = c.y - side / 2;
      if (x0 >= 0 && y0 >= 0 && x0 + side <= image.width && y0 + side <= image.height) break;
    }
  }
  const int x0 = c.x - side / 2;
  const int y0 = c.y - side / 2;
  if (side < 1 || x0 < 0 || y0 < 0 || x0 + side > image.width || y0 + side > image.height) {
    throw Error(ErrorCode::InvalidCrop, "window of width " + std::to_string(side) + " at (" +
                                            std::to_string(c.x) + "," + std::to_string(c.y) +
                                            ") exceeds " + std::to_string(image.width) + "x" +
                                            std::to_string(image.height));
  }
  RasterImage out(side, side);
  if (image.has_color()) out.channels.resize(out.size());
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      const auto src = image.index(x0 + x, y0 + y);
      out.intensities[out.index(x, y)] = image.intensities[src];
      if (image.has_color()) out.channels[out.index(x, y)] = image.channels[src];
    }
  }
  return out;
}

RasterImage to_grayscale(const RasterImage& image) {
  RasterImage out(image.width, image.height);
  if (!image.has_color()) {
    out.intensities = image.intensities;
    return out;
  }
  for (std::size_t i = 0; i < image.size(); ++i) out.intensities[i] = luminance(image.channels[i]);
  return out;
}

// Clipped histogram equalization per tile with bilinear blending of the tile
// lookup tables, on a 256-level quantization of the input.
RasterImage enhance_contrast(const RasterImage& image, ClaheParams params) {
  image.validate();
  if (params.tiles < 1 || !(params.clip_limit > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "contrast enhancement needs tiles >= 1 and clip > 0");
  }
  constexpr int kLevels = 256;
  const int w = image.width;
  const int h = image.height;
  const int tx_count = std::min(params.tiles, w);
  const int ty_count = std::min(params.tiles, h);

  std::vector<int> level(image.size());
  for (std::size_t i = 0; i < image.size(); ++i) {
    level[i] = static_cast<int>(std::lround(image.intensities[i] * (kLevels - 1)));
  }

  auto tile_begin = [](int t, int count, int extent) { return t * extent / count; };
  std::vector<std::array<double, kLevels>> luts(static_cast<std::size_t>(tx_count * ty_count));

  for (int ty = 0; ty < ty_count; ++ty) {
    for (int tx = 0; tx < tx_count; ++tx) {
      const int x0 = tile_begin(tx, tx_count, w), x1 = tile_begin(tx + 1, tx_count, w);
      const int y0 = tile_begin(ty, ty_count, h), y1 = tile_begin(ty + 1, ty_count, h);
      std::array<int, kLevels> hist{};
      for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) ++hist[level[image.index(x, y)]];
      }
      const int area = (x1 - x0) * (y1 - y0);
      const int clip = std::max(1, static_cast<int>(params.clip_limit * area / kLevels));
      int excess = 0;
      for (int& b : hist) {
        if (b > clip) {
          excess += b - clip;
          b = clip;
        }
      }
      const int bulk = excess / kLevels;
      const int residual = excess % kLevels;
      for (int& b : hist) b += bulk;
      if (residual > 0) {
        const int stride = std::max(1, kLevels / residual);
        for (int k = 0, placed = 0; k < kLevels && placed < residual; k += stride, ++placed) {
          ++hist[k];
        }
      }
      auto& lut = luts[static_cast<std::size_t>(ty * tx_count + tx)];
      long cdf = 0;
      for (int k = 0; k < kLevels; ++k) {
        cdf += hist[k];
        lut[k] = std::min(1.0, static_cast<double>(cdf) / area);
      }
    }
  }

  RasterImage out(w, h);
  const double tile_w = static_cast<double>(w) / tx_count;
  const double tile_h = static_cast<double>(h) / ty_count;
  for (int y = 0; y < h; ++y) {
    const double fy = (y + 0.5) / tile_h - 0.5;
    const int ty0 = std::clamp(static_cast<int>(std::floor(fy)), 0, ty_count - 1);
    const int ty1 = std::min(ty0 + 1, ty_count - 1);
    const double wy = std::clamp(fy - ty0, 0.0, 1.0);
    for (int x = 0; x < w; ++x) {
      const double fx = (x + 0.5) / tile_w - 0.5;
      const int tx0 = std::clamp(static_cast<int>(std::floor(fx)), 0, tx_count - 1);
      const int tx1 = std::min(tx0 + 1, tx_count - 1);
      const double wx = std::clamp(fx - tx0, 0.0, 1.0);
      const int v = level[image.index(x, y)];
      auto lut = [&](int tx, int ty) { return luts[static_cast<std::size_t>(ty * tx_count + tx)][v]; };
      const double top = (1.0 - wx) * lut(tx0, ty0) + wx * lut(tx1, ty0);
      const double bottom = (1.0 - wx) * lut(tx0, ty1) + wx * lut(tx1, ty1);
      out.at(x, y) = std::clamp((1.0 - wy) * top + wy * bottom, 0.0, 1.0);
    }
  }
  return out;
}

RasterImage adaptive_threshold(const RasterImage& image, AdaptiveThresholdParams params) {
  image.validate();
  if (params.block_size < 3 || params.block_size % 2 == 0) {
    throw Error(ErrorCode::InvalidConfig, "adaptive threshold block size must be odd and >= 3");
  }
  const int radius = params.block_size / 2;
  const double sigma = 0.3 * ((params.block_size - 1) * 0.5 - 1.0) + 0.8;
  std::vector<double> kernel(static_cast<std::size_t>(params.block_size));
  double norm = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    const double g = std::exp(-(k * k) / (2.0 * sigma * sigma));
    kernel[static_cast<std::size_t>(k + radius)] = g;
    norm += g;
  }
  for (double& g : kernel) g /= norm;

  const int w = image.width;
  const int h = image.height;
  std::vector<double> horizontal(image.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        acc += kernel[static_cast<std::size_t>(k + radius)] * image.at(std::clamp(x + k, 0, w - 1), y);
      }
      horizontal[image.index(x, y)] = acc;
    }
  }
  RasterImage out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double mean = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        mean += kernel[static_cast<std::size_t>(k + radius)] *
                horizontal[image.index(x, std::clamp(y + k, 0, h - 1))];
      }
      out.at(x, y) = image.at(x, y) > mean - params.offset ? 1.0 : 0.0;
    }
  }
  return out;
}

RasterImage resize(const RasterImage& image, int target_width, ResizeMode mode) {
  image.validate();
  if (image.width != image.height) {
    throw Error(ErrorCode::InvalidConfig, "resize expects a square image");
  }
  if (target_width < 1) throw Error(ErrorCode::InvalidConfig, "target width must be positive");
  if (target_width > image.width) {
    throw Error(ErrorCode::UpscaleNotSupported,
                std::to_string(target_width) + " > " + std::to_string(image.width));
  }
  if (target_width == image.width) return image;

  const int src = image.width;
  const int dst = target_width;
  RasterImage out(dst, dst);

  if (mode == ResizeMode::Nearest) {
    if (image.has_color()) out.channels.resize(out.size());
    for (int y = 0; y < dst; ++y) {
      const int sy = static_cast<int>(static_cast<long>(y) * src / dst);
      for (int x = 0; x < dst; ++x) {
        const int sx = static_cast<int>(static_cast<long>(x) * src / dst);
        out.at(x, y) = image.at(sx, sy);
        if (image.has_color()) out.channels[out.index(x, y)] = image.channels[image.index(sx, sy)];
      }
    }
    return out;
  }

  // Output cell i covers [i*src/dst, (i+1)*src/dst) in source pixel units.
  struct Span {
    int first;
    std::vector<double> weights;
  };
  std::vector<Span> spans(static_cast<std::size_t>(dst));
  for (int i = 0; i < dst; ++i) {
    const double lo = static_cast<double>(i) * src / dst;
    const double hi = static_cast<double>(i + 1) * src / dst;
    const int first = static_cast<int>(std::floor(lo));
    const int last = std::min(src - 1, static_cast<int>(std::ceil(hi)) - 1);
    Span s{first, {}};
    for (int k = first; k <= last; ++k) {
      const double overlap = std::min(hi, k + 1.0) - std::max(lo, static_cast<double>(k));
      s.weights.push_back(std::max(0.0, overlap));
    }
    spans[static_cast<std::size_t>(i)] = std::move(s);
  }

  for (int y = 0; y < dst; ++y) {
    const auto& sy = spans[static_cast<std::size_t>(y)];
    for (int x = 0; x < dst; ++x) {
      const auto& sx = spans[static_cast<std::size_t>(x)];
      // Deviations from a reference pixel keep constant blocks exact.
      const double ref = image.at(sx.first, sy.first);
      double acc = 0.0;
      double total = 0.0;
      for (std::size_t j = 0; j < sy.weights.size(); ++j) {
        for (std::size_t i = 0; i < sx.weights.size(); ++i) {
          const double wgt = sy.weights[j] * sx.weights[i];
          acc += wgt * (image.at(sx.first + static_cast<int>(i), sy.first + static_cast<int>(j)) - ref);
          total += wgt;
        }
      }
      out.at(x, y) = std::clamp(ref + acc / total, 0.0, 1.0);
    }
  }
  return out;
}

RasterImage preprocess(const RasterImage& image, const PreprocessConfig& cfg) {
  image.validate();
  if (cfg.target_width && *cfg.target_width < 2) {
    throw Error(ErrorCode::InvalidConfig, "target width must be >= 2");
  }
  RasterImage img = image;
  if (cfg.crop_center || cfg.crop_width || img.width != img.height) {
    img = crop(img, cfg.crop_center, cfg.crop_width);
  }
  if (cfg.grayscale) img = to_grayscale(img);
  if (cfg.enhance) img = enhance_contrast(img);
  if (cfg.segment) img = adaptive_threshold(img);
  if (cfg.target_width) img = resize(img, *cfg.target_width, cfg.resize_mode);
  return img;
}

}  // namespace pixflow
