#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace pixflow {

using Rgb = std::array<std::uint8_t, 3>;

/// Row-major grid of intensities in [0,1], optionally carrying the RGB source.
struct RasterImage {
  int width = 0;
  int height = 0;
  std::vector<double> intensities;
  std::vector<Rgb> channels;  // empty for gray sources

  RasterImage() = default;
  RasterImage(int w, int h, double fill = 0.0);

  [[nodiscard]] bool has_color() const noexcept { return !channels.empty(); }
  [[nodiscard]] std::size_t size() const noexcept { return intensities.size(); }

  [[nodiscard]] double at(int x, int y) const { return intensities[index(x, y)]; }
  double& at(int x, int y) { return intensities[index(x, y)]; }

  [[nodiscard]] std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
           static_cast<std::size_t>(x);
  }

  /// Throws InvalidConfig when sizes or value ranges are broken.
  void validate() const;

  friend bool operator==(const RasterImage&, const RasterImage&) = default;
};

enum class ResizeMode { Nearest, Area };

std::string_view to_string(ResizeMode mode) noexcept;
std::optional<ResizeMode> parse_resize_mode(std::string_view text) noexcept;

struct PixelCoord {
  int x = 0;
  int y = 0;
  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

struct PreprocessConfig {
  std::optional<PixelCoord> crop_center;
  std::optional<int> crop_width;
  bool grayscale = false;
  bool enhance = false;
  bool segment = false;
  /// Unset keeps the cropped side length.
  std::optional<int> target_width;
  ResizeMode resize_mode = ResizeMode::Area;
};

/// Named preprocessing chains matching the three reference datasets.
struct PreprocessPreset {
  std::string_view name;
  int target_width;
  ResizeMode mode;
  bool grayscale;
  bool enhance;
  bool segment;
};

std::span<const PreprocessPreset> preprocess_presets() noexcept;
std::optional<PreprocessPreset> find_preset(std::string_view name) noexcept;

/// Rec. 601 luma of an 8-bit RGB triple, scaled to [0,1].
double luminance(const Rgb& rgb) noexcept;

// decoding / encoding -------------------------------------------------------

RasterImage load_image(const std::filesystem::path& path);
void save_png(const RasterImage& image, const std::filesystem::path& path);
void save_pgm(const RasterImage& image, const std::filesystem::path& path);

// preprocessing -------------------------------------------------------------

RasterImage crop(const RasterImage& image, std::optional<PixelCoord> center,
                 std::optional<int> width);
RasterImage to_grayscale(const RasterImage& image);

struct ClaheParams {
  int tiles = 8;
  double clip_limit = 3.0;
};
RasterImage enhance_contrast(const RasterImage& image, ClaheParams params = {});

struct AdaptiveThresholdParams {
  int block_size = 11;
  double offset = 2.0 / 255.0;
};
RasterImage adaptive_threshold(const RasterImage& image, AdaptiveThresholdParams params = {});

RasterImage resize(const RasterImage& image, int target_width, ResizeMode mode);

/// crop -> grayscale -> enhance -> segment -> resize.
RasterImage preprocess(const RasterImage& image, const PreprocessConfig& cfg);

}  // namespace pixflow
