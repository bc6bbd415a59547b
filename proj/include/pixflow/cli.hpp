#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pixflow/image.hpp"
#include "pixflow/metrics.hpp"
#include "pixflow/network_io.hpp"
#include "pixflow/pipeline.hpp"
#include "pixflow/pixel_graph.hpp"

namespace pixflow::cli {

enum class Extractor { Image2net, MstSteiner };

std::string_view to_string(Extractor e) noexcept;

inline constexpr double kDefaultBeta = 1.5;
inline constexpr std::size_t kDefaultRuns = 5;
inline constexpr int kDefaultGrid = 14;
inline constexpr double kDefaultTerminalFraction = 0.025;
inline constexpr double kDefaultDelta = 0.5;

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kEmptyGraph = 2,
  kRunsFailed = 3,
  kFailure = 4,
};

struct RunConfig {
  std::filesystem::path input;
  std::optional<std::filesystem::path> ground_truth;
  double delta = kDefaultDelta;
  double beta = kDefaultBeta;
  std::size_t n_runs = kDefaultRuns;
  std::uint64_t seed = 0;
  bool seed_from_entropy = false;
  Extractor extractor = Extractor::Image2net;
  int partition = kDefaultGrid;
  EdgeAssignment assignment = EdgeAssignment::Midpoint;
  std::optional<std::string> preset;
  PreprocessConfig preprocess;
  Connectivity connectivity = Connectivity::Eight;
  InitialConductivity mu0 = InitialConductivity::PixelWeight;
  double terminal_fraction = kDefaultTerminalFraction;
  bool summed_mst_weights = false;
  std::optional<std::filesystem::path> terminals_file;
  std::vector<double> sweep_delta;
  std::filesystem::path output_dir = ".";
  std::vector<NetworkFormat> formats{NetworkFormat::Json};
  std::size_t threads = 0;
  std::size_t max_iter = 5000;

  /// Settings that determine the output, in a fixed order. Threads and the
  /// output directory are left out so artifacts do not depend on them.
  [[nodiscard]] std::vector<std::pair<std::string, std::string>> describe() const;
};

/// Either a validated config or a message plus the exit code to leave with
/// (0 for --help).
struct ParseResult {
  std::optional<RunConfig> config;
  std::string message;
  int exit_code = kOk;
};

ParseResult parse_args(int argc, const char* const* argv);
std::string help_text();

/// Terminal list "x y" per line in preprocessed-image pixel coordinates.
std::vector<NodeId> read_terminals(const std::filesystem::path& path, const PixelGraph& gpe);

int run_extract(const RunConfig& config, std::ostream& log);

}  // namespace pixflow::cli
