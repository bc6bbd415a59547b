#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pixflow/metrics.hpp"
#include "pixflow/network.hpp"

namespace pixflow {

enum class NetworkFormat { Json, Tsv };

std::string_view to_string(NetworkFormat format) noexcept;
std::optional<NetworkFormat> parse_network_format(std::string_view text) noexcept;

/// Nearest double to the 12-significant-digit decimal rendering of v.
double round_significant(double v) noexcept;
std::string format_number(double v);

std::string network_to_json(const ExtractedNetwork& network);
std::string network_to_tsv(const ExtractedNetwork& network);
ExtractedNetwork network_from_json(std::string_view text);
ExtractedNetwork network_from_tsv(std::string_view text);

void write_network(const ExtractedNetwork& network, const std::filesystem::path& path,
                   NetworkFormat format);
ExtractedNetwork read_network(const std::filesystem::path& path);

/// A labelled similarity report, e.g. "input" or "ground_truth".
using NamedReport = std::pair<std::string, SimilarityReport>;

struct ReportDocument {
  std::vector<std::pair<std::string, std::string>> config;
  NetworkStats stats;
  std::size_t gpe_nodes = 0;
  std::size_t gpe_edges = 0;
  std::vector<NamedReport> similarity;
};

std::string report_to_json(const ReportDocument& report);
/// One `key\tvalue` line per scalar.
std::string report_to_text(const ReportDocument& report);

void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace pixflow
