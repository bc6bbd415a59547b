#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "pixflow/baseline.hpp"
#include "pixflow/cli.hpp"
#include "pixflow/error.hpp"

namespace pixflow::cli {
namespace {

struct RawArgs {
  std::string seed = "0";
  std::string target_width;
  std::string resize_mode;
  std::string extractor = "image2net";
  std::string formats = "json";
  std::string assignment = "midpoint";
  std::string mu0 = "weight";
  std::string crop_center;
  int connectivity = 8;
};

CLI::Validator open_unit_interval() {
  return CLI::Validator(
      [](std::string& s) -> std::string {
        double d = 0.0;
        if (!CLI::detail::lexical_cast(s, d) || !(d > 0.0 && d < 1.0)) return "value must lie in (0,1)";
        return {};
      },
      "(0,1)");
}

std::unique_ptr<CLI::App> make_app(RunConfig& cfg, RawArgs& raw) {
  auto app = std::make_unique<CLI::App>(
      "Extracts a weighted network from an image of a network-like structure by running "
      "adaptive transport dynamics on its pixel graph.",
      "pixflow");
  app->option_defaults()->always_capture_default();
  app->get_formatter()->column_width(34);

  auto* input = app->add_option("-i,--input", cfg.input, "Input image (PNG, JPEG, PGM/PPM)");
  app->add_option("--ground-truth", cfg.ground_truth, "Hand-labelled image to score against");
  app->add_option("--delta", cfg.delta, "Pixel intensity threshold, in (0,1)")
      ->check(open_unit_interval());
  app->add_option("--beta", cfg.beta,
                  "Adaptation exponent, >= 1. Default 1.5, the reference value of the branching regime")
      ->check(CLI::Range(1.0, std::numeric_limits<double>::max()));
  app->add_option("--n-runs", cfg.n_runs, "Single-source runs to superimpose. Default 5 recovers loops")
      ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()));
  app->add_option("--seed", raw.seed, "Master seed: unsigned 64-bit integer or 'random'");
  app->add_option("--extractor", raw.extractor, "image2net or mst-steiner")
      ->check(CLI::IsMember({"image2net", "mst-steiner"}));
  app->add_option("--partition", cfg.partition,
                  "Similarity grid cells per axis. Default 14, i.e. P = 196 cells")
      ->check(CLI::Range(1, 4096));
  app->add_option("--cell-assignment", raw.assignment, "Edge-to-cell rule: midpoint or fractional")
      ->check(CLI::IsMember({"midpoint", "fractional"}));
  app->add_option("--preset", cfg.preset,
                  "Preprocessing preset: physarum (width 300), rivers (width 200), retina (width 200)")
      ->check(CLI::IsMember({"physarum", "rivers", "retina"}));
  app->add_option("--target-width", raw.target_width,
                  "Resize width in pixels (>= 2) or a preset name: physarum=300, rivers=200, retina=200");
  app->add_option("--resize-mode", raw.resize_mode, "nearest or area")
      ->check(CLI::IsMember({"nearest", "area"}));
  app->add_flag("--grayscale", cfg.preprocess.grayscale, "Map RGB to luminance first");
  app->add_flag("--enhance", cfg.preprocess.enhance, "Tile-wise clipped histogram equalization");
  app->add_flag("--segment", cfg.preprocess.segment, "Adaptive threshold to a binary image");
  app->add_option("--crop-center", raw.crop_center, "Crop center as X,Y in pixels");
  app->add_option("--crop-width", cfg.preprocess.crop_width, "Crop side in pixels")->check(CLI::PositiveNumber);
  app->add_option("--connectivity", raw.connectivity, "Pixel neighborhood, 4 or 8")
      ->check(CLI::IsMember({4, 8}));
  app->add_option("--mu0", raw.mu0, "Initial conductivities: weight (pixel weight) or uniform")
      ->check(CLI::IsMember({"weight", "uniform"}));
  app->add_option("--max-iter", cfg.max_iter, "Iteration cap per dynamics run")->check(CLI::PositiveNumber);
  app->add_option("--terminal-fraction", cfg.terminal_fraction,
                  "mst-steiner: share of spanning-tree leaves used as terminals. Default 0.025 (2.5%)")
      ->check(CLI::Range(1e-12, 1.0));
  app->add_flag("--summed-weights", cfg.summed_mst_weights,
                "mst-steiner: add pixel-graph weights over runs instead of keeping them");
  app->add_option("--terminals-file", cfg.terminals_file, "User terminals, one 'x y' pixel pair per line")
      ->check(CLI::ExistingFile);
  app->add_option("--sweep-delta", cfg.sweep_delta, "Comma-separated thresholds; one network per value")
      ->delimiter(',');
  app->add_option("-o,--output-dir", cfg.output_dir, "Directory for networks and reports");
  app->add_option("--format", raw.formats, "Output formats, comma-separated: json, tsv");
  app->add_option("--threads", cfg.threads, "Worker threads, 0 = all cores");
  input->required();
  return app;
}

std::uint64_t parse_seed(const std::string& text, bool& entropy) {
  entropy = text == "random";
  if (entropy) {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }
  std::size_t used = 0;
  if (text.empty() || text[0] == '-') throw CLI::ValidationError("--seed", "expected an unsigned integer or 'random'");
  const auto v = std::stoull(text, &used, 10);
  if (used != text.size()) throw CLI::ValidationError("--seed", "expected an unsigned integer or 'random'");
  return v;
}

void finish(RunConfig& cfg, RawArgs& raw) {
  cfg.seed = parse_seed(raw.seed, cfg.seed_from_entropy);
  cfg.extractor = raw.extractor == "mst-steiner" ? Extractor::MstSteiner : Extractor::Image2net;
  cfg.connectivity = raw.connectivity == 4 ? Connectivity::Four : Connectivity::Eight;
  cfg.assignment = raw.assignment == "fractional" ? EdgeAssignment::FractionalLength : EdgeAssignment::Midpoint;
  cfg.mu0 = raw.mu0 == "uniform" ? InitialConductivity::Uniform : InitialConductivity::PixelWeight;

  if (cfg.preset) {
    const auto p = *find_preset(*cfg.preset);
    cfg.preprocess.grayscale |= p.grayscale;
    cfg.preprocess.enhance |= p.enhance;
    cfg.preprocess.segment |= p.segment;
    cfg.preprocess.target_width = p.target_width;
    cfg.preprocess.resize_mode = p.mode;
  }
  if (!raw.target_width.empty()) {
    if (const auto p = find_preset(raw.target_width)) {
      cfg.preprocess.target_width = p->target_width;
      if (raw.resize_mode.empty()) cfg.preprocess.resize_mode = p->mode;
    } else {
      std::size_t used = 0;
      int w = 0;
      try {
        w = std::stoi(raw.target_width, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != raw.target_width.size() || w < 2) {
        throw CLI::ValidationError("--target-width", "expected an integer >= 2 or a preset name");
      }
      cfg.preprocess.target_width = w;
    }
  }
  if (!raw.resize_mode.empty()) cfg.preprocess.resize_mode = *parse_resize_mode(raw.resize_mode);
  if (!raw.crop_center.empty()) {
    int x = 0, y = 0;
    char comma = 0;
    std::istringstream in(raw.crop_center);
    if (!(in >> x >> comma >> y) || comma != ',' || !in.eof()) {
      throw CLI::ValidationError("--crop-center", "expected X,Y");
    }
    cfg.preprocess.crop_center = PixelCoord{x, y};
  }
  cfg.formats.clear();
  std::istringstream fmts(raw.formats);
  for (std::string tok; std::getline(fmts, tok, ',');) {
    const auto f = parse_network_format(tok);
    if (!f) throw CLI::ValidationError("--format", "unknown format '" + tok + "'");
    if (std::find(cfg.formats.begin(), cfg.formats.end(), *f) == cfg.formats.end()) cfg.formats.push_back(*f);
  }
  if (cfg.formats.empty()) throw CLI::ValidationError("--format", "at least one format is required");
  for (double d : cfg.sweep_delta) {
    if (!(d > 0.0 && d < 1.0)) throw CLI::ValidationError("--sweep-delta", "thresholds must lie in (0,1)");
  }
}

std::string render(double v) { return format_number(v); }

struct Outcome {
  int exit_code = kOk;
  std::size_t gpe_nodes = 0;
  std::size_t gpe_edges = 0;
  std::optional<NetworkStats> stats;
  std::optional<SimilarityReport> self_report;
  std::optional<SimilarityReport> gt_report;
  std::string status = "ok";
};

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::EmptyGraph:
      return kEmptyGraph;
    case ErrorCode::AllRunsFailed:
    case ErrorCode::NotConverged:
    case ErrorCode::SolveFailure:
    case ErrorCode::DegenerateTree:
      return kRunsFailed;
    default:
      return kFailure;
  }
}

std::string stem_for(const RunConfig& cfg) {
  auto stem = cfg.input.stem().string();
  return stem.empty() ? std::string("network") : stem;
}

Outcome extract_one(const RunConfig& cfg, double delta, const RasterImage& image,
                    const std::optional<RasterImage>& gt, const std::string& stem, std::ostream& log) {
  Outcome out;
  try {
    const auto gpe = build_pixel_graph(image, delta, {cfg.connectivity});
    out.gpe_nodes = gpe.node_count();
    out.gpe_edges = gpe.edge_count();
    ExtractedNetwork net;
    if (cfg.extractor == Extractor::Image2net) {
      ExtractionOptions opts;
      opts.beta = cfg.beta;
      opts.n_runs = cfg.n_runs;
      opts.seed = cfg.seed;
      opts.mu0 = cfg.mu0;
      opts.threads = cfg.threads;
      opts.params.max_iter = cfg.max_iter;
      if (cfg.terminals_file) opts.terminals = read_terminals(*cfg.terminals_file, gpe);
      net = extract_network(gpe, opts);
    } else {
      MstOptions opts;
      opts.n_runs = cfg.n_runs;
      opts.fraction = cfg.terminal_fraction;
      opts.seed = cfg.seed;
      opts.threads = cfg.threads;
      opts.summed_weights = cfg.summed_mst_weights;
      net = extract_network_mst(gpe, opts);
      if (cfg.terminals_file) net.meta.warnings.push_back("--terminals-file is ignored by mst-steiner");
    }
    net.meta.delta = delta;
    net.meta.config = cfg.describe();
    net.meta.config.emplace_back("delta", render(delta));
    for (const auto& w : net.meta.warnings) log << "warning: " << w << '\n';

    const CellPartition part{cfg.partition};
    ReportDocument doc;
    doc.config = net.meta.config;
    doc.stats = network_stats(net);
    doc.gpe_nodes = out.gpe_nodes;
    doc.gpe_edges = out.gpe_edges;
    doc.similarity.emplace_back("input", compare_to_ground_truth(net, image, delta, part, cfg.assignment));
    if (gt) doc.similarity.emplace_back("ground_truth", compare_to_ground_truth(net, *gt, delta, part, cfg.assignment));

    std::filesystem::create_directories(cfg.output_dir);
    for (auto fmt : cfg.formats) {
      const auto ext = std::string(to_string(fmt));
      write_network(net, cfg.output_dir / (stem + ".network." + ext), fmt);
      write_text_file(cfg.output_dir / (stem + ".report." + (fmt == NetworkFormat::Json ? "json" : "txt")),
                      fmt == NetworkFormat::Json ? report_to_json(doc) : report_to_text(doc));
    }
    out.stats = doc.stats;
    out.self_report = doc.similarity[0].second;
    if (gt) out.gt_report = doc.similarity[1].second;
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    out.exit_code = exit_code_for(e);
    out.status = std::string(to_string(e.code()));
  }
  return out;
}

RasterImage prepare_ground_truth(const RasterImage& raw, const RunConfig& cfg, int width) {
  PreprocessConfig gt_cfg;
  gt_cfg.crop_center = cfg.preprocess.crop_center;
  gt_cfg.crop_width = cfg.preprocess.crop_width;
  gt_cfg.resize_mode = cfg.preprocess.resize_mode;
  auto img = preprocess(raw, gt_cfg);
  if (img.width != width) img = resize(img, width, cfg.preprocess.resize_mode);
  return img;
}

}  // namespace

std::string_view to_string(Extractor e) noexcept {
  return e == Extractor::Image2net ? "image2net" : "mst-steiner";
}

std::vector<std::pair<std::string, std::string>> RunConfig::describe() const {
  std::vector<std::pair<std::string, std::string>> d;
  d.emplace_back("input", input.generic_string());
  d.emplace_back("ground_truth", ground_truth ? ground_truth->generic_string() : "");
  d.emplace_back("extractor", std::string(to_string(extractor)));
  d.emplace_back("beta", render(beta));
  d.emplace_back("n_runs", std::to_string(n_runs));
  d.emplace_back("seed", std::to_string(seed));
  d.emplace_back("partition", std::to_string(partition));
  d.emplace_back("cell_assignment", assignment == EdgeAssignment::Midpoint ? "midpoint" : "fractional");
  d.emplace_back("preset", preset.value_or(""));
  d.emplace_back("crop_center", preprocess.crop_center ? std::to_string(preprocess.crop_center->x) + "," +
                                                            std::to_string(preprocess.crop_center->y)
                                                      : "");
  d.emplace_back("crop_width", preprocess.crop_width ? std::to_string(*preprocess.crop_width) : "");
  d.emplace_back("grayscale", preprocess.grayscale ? "true" : "false");
  d.emplace_back("enhance", preprocess.enhance ? "true" : "false");
  d.emplace_back("segment", preprocess.segment ? "true" : "false");
  d.emplace_back("target_width", preprocess.target_width ? std::to_string(*preprocess.target_width) : "");
  d.emplace_back("resize_mode", std::string(to_string(preprocess.resize_mode)));
  d.emplace_back("connectivity", connectivity == Connectivity::Four ? "4" : "8");
  d.emplace_back("mu0", mu0 == InitialConductivity::Uniform ? "uniform" : "weight");
  d.emplace_back("max_iter", std::to_string(max_iter));
  if (extractor == Extractor::MstSteiner) {
    d.emplace_back("terminal_fraction", render(terminal_fraction));
    d.emplace_back("summed_weights", summed_mst_weights ? "true" : "false");
  }
  d.emplace_back("terminals_file", terminals_file ? terminals_file->generic_string() : "");
  return d;
}

std::string help_text() {
  RunConfig cfg;
  RawArgs raw;
  return make_app(cfg, raw)->help();
}

ParseResult parse_args(int argc, const char* const* argv) {
  RunConfig cfg;
  RawArgs raw;
  auto app = make_app(cfg, raw);
  ParseResult result;
  try {
    app->parse(argc, argv);
    finish(cfg, raw);
  } catch (const CLI::CallForHelp&) {
    result.message = app->help();
    result.exit_code = kOk;
    return result;
  } catch (const CLI::ParseError& e) {
    result.message = std::string(to_string(ErrorCode::UsageError)) + ": " + e.what() + "\nRun with --help for usage.";
    result.exit_code = kUsage;
    return result;
  } catch (const std::exception& e) {
    result.message = std::string(to_string(ErrorCode::UsageError)) + ": " + e.what();
    result.exit_code = kUsage;
    return result;
  }
  result.config = std::move(cfg);
  return result;
}

std::vector<NodeId> read_terminals(const std::filesystem::path& path, const PixelGraph& gpe) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  std::map<std::pair<int, int>, NodeId> by_pixel;
  for (std::size_t i = 0; i < gpe.node_count(); ++i) {
    const auto& n = gpe.nodes()[i];
    by_pixel.emplace(std::pair{n.pixel_x, n.pixel_y}, static_cast<NodeId>(i));
  }
  std::vector<NodeId> ids;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    int x = 0, y = 0;
    if (!(fields >> x >> y)) {
      throw Error(ErrorCode::InvalidConfig, path.string() + ":" + std::to_string(lineno) + ": expected 'x y'");
    }
    const auto it = by_pixel.find({x, y});
    if (it == by_pixel.end()) {
      throw Error(ErrorCode::PreconditionViolation, path.string() + ":" + std::to_string(lineno) + ": pixel (" +
                                                        std::to_string(x) + ", " + std::to_string(y) +
                                                        ") is not a graph node");
    }
    ids.push_back(it->second);
  }
  return ids;
}

int run_extract(const RunConfig& config, std::ostream& log) {
  RasterImage image;
  std::optional<RasterImage> gt;
  try {
    image = preprocess(load_image(config.input), config.preprocess);
    if (config.ground_truth) gt = prepare_ground_truth(load_image(*config.ground_truth), config, image.width);
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kFailure;
  }
  if (config.seed_from_entropy) log << "seed: " << config.seed << '\n';

  const auto stem = stem_for(config);
  if (config.sweep_delta.empty()) return extract_one(config, config.delta, image, gt, stem, log).exit_code;

  std::ostringstream table;
  table << "delta\tstatus\tgpe_nodes\tgpe_edges\tnodes\tedges\ttotal_length\tcyclomatic\tbinary\tweighted";
  if (gt) table << "\tgt_binary\tgt_weighted";
  table << '\n';
  int first_failure = kOk;
  bool any_ok = false;
  for (double delta : config.sweep_delta) {
    const auto o = extract_one(config, delta, image, gt, stem + ".delta-" + render(delta), log);
    table << render(delta) << '\t' << o.status << '\t' << o.gpe_nodes << '\t' << o.gpe_edges;
    if (o.stats) {
      table << '\t' << o.stats->nodes << '\t' << o.stats->edges << '\t' << render(o.stats->total_length) << '\t'
            << o.stats->cyclomatic << '\t' << render(o.self_report->binary) << '\t'
            << render(o.self_report->weighted);
      if (gt) table << '\t' << render(o.gt_report->binary) << '\t' << render(o.gt_report->weighted);
    } else {
      table << "\t\t\t\t\t\t";
      if (gt) table << "\t\t";
    }
    table << '\n';
    if (o.exit_code == kOk) any_ok = true;
    else if (first_failure == kOk) first_failure = o.exit_code;
  }
  try {
    std::filesystem::create_directories(config.output_dir);
    write_text_file(config.output_dir / (stem + ".sweep.tsv"), table.str());
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kFailure;
  }
  return any_ok ? kOk : first_failure;
}

}  // namespace pixflow::cli
