#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pixflow/error.hpp"
#include "pixflow/network_io.hpp"

namespace pixflow {
namespace {

using Json = nlohmann::ordered_json;

Json run_to_json(const RunRecord& r) {
  Json j;
  j["index"] = r.index;
  j["seed"] = r.seed;
  j["source"] = r.source;
  j["succeeded"] = r.succeeded;
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["terminals"] = r.terminals;
  j["error"] = r.error;
  return j;
}

Json meta_to_json(const Provenance& m) {
  Json j;
  j["extractor"] = m.extractor;
  j["delta"] = round_significant(m.delta);
  j["beta"] = round_significant(m.beta);
  j["n_runs"] = m.n_runs;
  j["seed"] = m.seed;
  j["successful_runs"] = m.successful_runs;
  j["terminal_count"] = m.terminal_count;
  Json config = Json::object();
  for (const auto& [k, v] : m.config) config[k] = v;
  j["config"] = config;
  Json runs = Json::array();
  for (const auto& r : m.runs) runs.push_back(run_to_json(r));
  j["runs"] = runs;
  j["warnings"] = m.warnings;
  return j;
}

std::vector<double> rounded(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = round_significant(v[i]);
  return out;
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw Error(ErrorCode::IoError, "bad number '" + s + "'");
  return v;
}

template <typename Int>
Int parse_int(const std::string& s) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::IoError, "bad integer '" + s + "'");
  }
  return v;
}

// Tabs and newlines inside free text would break the line format.
std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

void require_fields(const std::vector<std::string>& f, std::size_t n, std::string_view kind) {
  if (f.size() != n) {
    throw Error(ErrorCode::IoError, "malformed " + std::string(kind) + " line");
  }
}

Json report_json(const SimilarityReport& r) {
  Json j;
  j["binary"] = round_significant(r.binary);
  j["weighted"] = round_significant(r.weighted);
  j["delta"] = round_significant(r.delta);
  j["grid"] = r.grid;
  j["cells"] = static_cast<std::size_t>(r.grid) * static_cast<std::size_t>(r.grid);
  j["assignment"] = r.assignment == EdgeAssignment::Midpoint ? "midpoint" : "fractional";
  j["edge_counts"] = rounded(r.edge_counts);
  j["pixel_counts"] = rounded(r.pixel_counts);
  j["edge_weights"] = rounded(r.edge_weights);
  j["pixel_sums"] = rounded(r.pixel_sums);
  return j;
}

}  // namespace

std::string_view to_string(NetworkFormat format) noexcept {
  return format == NetworkFormat::Json ? "json" : "tsv";
}

std::optional<NetworkFormat> parse_network_format(std::string_view text) noexcept {
  if (text == "json") return NetworkFormat::Json;
  if (text == "tsv") return NetworkFormat::Tsv;
  return std::nullopt;
}

double round_significant(double v) noexcept {
  if (!std::isfinite(v)) return v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;  // no negative zero
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", round_significant(v));
  return buf;
}

std::string network_to_json(const ExtractedNetwork& network) {
  Json doc;
  doc["meta"] = meta_to_json(network.meta);
  Json nodes = Json::array();
  for (const auto& n : network.nodes) {
    nodes.push_back(Json{{"id", n.id}, {"x", round_significant(n.x)}, {"y", round_significant(n.y)}});
  }
  doc["nodes"] = nodes;
  Json edges = Json::array();
  for (const auto& e : network.edges) {
    edges.push_back(Json{{"source", e.source},
                         {"target", e.target},
                         {"weight", round_significant(e.weight)},
                         {"length", round_significant(e.length)}});
  }
  doc["edges"] = edges;
  return doc.dump(2) + "\n";
}

ExtractedNetwork network_from_json(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::IoError, std::string("invalid network JSON: ") + e.what());
  }
  ExtractedNetwork net;
  try {
    const auto& m = doc.at("meta");
    net.meta.extractor = m.at("extractor").get<std::string>();
    net.meta.delta = m.at("delta").get<double>();
    net.meta.beta = m.at("beta").get<double>();
    net.meta.n_runs = m.at("n_runs").get<std::size_t>();
    net.meta.seed = m.at("seed").get<std::uint64_t>();
    net.meta.successful_runs = m.at("successful_runs").get<std::size_t>();
    net.meta.terminal_count = m.at("terminal_count").get<std::size_t>();
    for (const auto& [k, v] : m.at("config").items()) net.meta.config.emplace_back(k, v.get<std::string>());
    for (const auto& r : m.at("runs")) {
      net.meta.runs.push_back(RunRecord{r.at("index").get<std::size_t>(), r.at("seed").get<std::uint64_t>(),
                                        r.at("source").get<NodeId>(), r.at("succeeded").get<bool>(),
                                        r.at("converged").get<bool>(), r.at("iterations").get<std::size_t>(),
                                        r.at("terminals").get<std::size_t>(), r.at("error").get<std::string>()});
    }
    net.meta.warnings = m.at("warnings").get<std::vector<std::string>>();
    for (const auto& n : doc.at("nodes")) {
      net.nodes.push_back({n.at("id").get<NodeId>(), n.at("x").get<double>(), n.at("y").get<double>()});
    }
    for (const auto& e : doc.at("edges")) {
      net.edges.push_back({e.at("source").get<NodeId>(), e.at("target").get<NodeId>(),
                           e.at("weight").get<double>(), e.at("length").get<double>()});
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::IoError, std::string("network JSON is missing fields: ") + e.what());
  }
  return net;
}

std::string network_to_tsv(const ExtractedNetwork& network) {
  const auto& m = network.meta;
  std::ostringstream out;
  out << "# pixflow network\n";
  out << "# extractor\t" << m.extractor << '\n';
  out << "# delta\t" << format_number(m.delta) << '\n';
  out << "# beta\t" << format_number(m.beta) << '\n';
  out << "# n_runs\t" << m.n_runs << '\n';
  out << "# seed\t" << m.seed << '\n';
  out << "# successful_runs\t" << m.successful_runs << '\n';
  out << "# terminal_count\t" << m.terminal_count << '\n';
  for (const auto& [k, v] : m.config) out << "# config\t" << sanitize(k) << '\t' << sanitize(v) << '\n';
  for (const auto& r : m.runs) {
    out << "# run\t" << r.index << '\t' << r.seed << '\t' << r.source << '\t' << int(r.succeeded) << '\t'
        << int(r.converged) << '\t' << r.iterations << '\t' << r.terminals << '\t' << sanitize(r.error)
        << '\n';
  }
  for (const auto& w : m.warnings) out << "# warning\t" << sanitize(w) << '\n';
  for (const auto& n : network.nodes) {
    out << "node\t" << n.id << '\t' << format_number(n.x) << '\t' << format_number(n.y) << '\n';
  }
  for (const auto& e : network.edges) {
    out << "edge\t" << e.source << '\t' << e.target << '\t' << format_number(e.weight) << '\t'
        << format_number(e.length) << '\n';
  }
  return out.str();
}

ExtractedNetwork network_from_tsv(std::string_view text) {
  ExtractedNetwork net;
  auto& m = net.meta;
  for (const auto& raw : split(text, '\n')) {
    if (raw.empty()) continue;
    if (raw.rfind("# ", 0) == 0) {
      const auto f = split(std::string_view(raw).substr(2), '\t');
      const auto& key = f[0];
      if (f.size() == 1) continue;  // banner
      if (key == "extractor") m.extractor = f[1];
      else if (key == "delta") m.delta = parse_double(f[1]);
      else if (key == "beta") m.beta = parse_double(f[1]);
      else if (key == "n_runs") m.n_runs = parse_int<std::size_t>(f[1]);
      else if (key == "seed") m.seed = parse_int<std::uint64_t>(f[1]);
      else if (key == "successful_runs") m.successful_runs = parse_int<std::size_t>(f[1]);
      else if (key == "terminal_count") m.terminal_count = parse_int<std::size_t>(f[1]);
      else if (key == "config") {
        require_fields(f, 3, "config");
        m.config.emplace_back(f[1], f[2]);
      } else if (key == "run") {
        require_fields(f, 9, "run");
        m.runs.push_back(RunRecord{parse_int<std::size_t>(f[1]), parse_int<std::uint64_t>(f[2]),
                                   parse_int<NodeId>(f[3]), f[4] == "1", f[5] == "1",
                                   parse_int<std::size_t>(f[6]), parse_int<std::size_t>(f[7]), f[8]});
      } else if (key == "warning") {
        m.warnings.push_back(f[1]);
      }
      continue;
    }
    const auto f = split(raw, '\t');
    if (f[0] == "node") {
      require_fields(f, 4, "node");
      net.nodes.push_back({parse_int<NodeId>(f[1]), parse_double(f[2]), parse_double(f[3])});
    } else if (f[0] == "edge") {
      require_fields(f, 5, "edge");
      net.edges.push_back({parse_int<NodeId>(f[1]), parse_int<NodeId>(f[2]), parse_double(f[3]),
                           parse_double(f[4])});
    } else {
      throw Error(ErrorCode::IoError, "unknown record '" + f[0] + "'");
    }
  }
  return net;
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

void write_network(const ExtractedNetwork& network, const std::filesystem::path& path,
                   NetworkFormat format) {
  write_text_file(path, format == NetworkFormat::Json ? network_to_json(network) : network_to_tsv(network));
}

ExtractedNetwork read_network(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return network_from_json(text);
  return network_from_tsv(text);
}

std::string report_to_json(const ReportDocument& report) {
  Json doc;
  Json config = Json::object();
  for (const auto& [k, v] : report.config) config[k] = v;
  doc["config"] = config;
  doc["stats"] = Json{{"total_length", round_significant(report.stats.total_length)},
                      {"nodes", report.stats.nodes},
                      {"edges", report.stats.edges},
                      {"components", report.stats.components},
                      {"cyclomatic", report.stats.cyclomatic},
                      {"gpe_nodes", report.gpe_nodes},
                      {"gpe_edges", report.gpe_edges}};
  Json sim = Json::object();
  for (const auto& [name, r] : report.similarity) sim[name] = report_json(r);
  doc["similarity"] = sim;
  return doc.dump(2) + "\n";
}

std::string report_to_text(const ReportDocument& report) {
  std::ostringstream out;
  for (const auto& [k, v] : report.config) out << "config." << sanitize(k) << '\t' << sanitize(v) << '\n';
  out << "total_length\t" << format_number(report.stats.total_length) << '\n';
  out << "nodes\t" << report.stats.nodes << '\n';
  out << "edges\t" << report.stats.edges << '\n';
  out << "components\t" << report.stats.components << '\n';
  out << "cyclomatic\t" << report.stats.cyclomatic << '\n';
  out << "gpe_nodes\t" << report.gpe_nodes << '\n';
  out << "gpe_edges\t" << report.gpe_edges << '\n';
  for (const auto& [name, r] : report.similarity) {
    out << name << ".binary\t" << format_number(r.binary) << '\n';
    out << name << ".weighted\t" << format_number(r.weighted) << '\n';
    out << name << ".delta\t" << format_number(r.delta) << '\n';
    out << name << ".cells\t" << r.grid * r.grid << '\n';
  }
  return out.str();
}

}  // namespace pixflow
