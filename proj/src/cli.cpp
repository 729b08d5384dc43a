#include "cmrt/cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "cmrt/coeff_tables.hpp"
#include "cmrt/forward.hpp"
#include "cmrt/inversion.hpp"
#include "cmrt/io.hpp"
#include "cmrt/mean_field.hpp"
#include "cmrt/odd_polynomial.hpp"
#include "cmrt/verify.hpp"

namespace cmrt::cli {
namespace {

// Everything an experiment needs in one JSON document; individual flags
// override the corresponding fields. Field names mirror the flag names.
struct ExperimentConfig {
  std::optional<nlohmann::json> phantom;  // inline object
  std::string phantom_file;
  GridSpec grid{-0.5, 1.0, 64, 0.05, 2.0, 64};
  SeriesConfig series;
  int circle_nodes = kDefaultCircleNodes;
  int fd_order = 4;
  double smooth_sigma = 0.0;
  unsigned threads = 0;
  std::uint64_t seed = 42;
};

ExperimentConfig load_config(const std::string& path) {
  ExperimentConfig cfg;
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json doc = nlohmann::json::parse(in);
  if (doc.contains("phantom")) cfg.phantom = doc["phantom"];
  cfg.phantom_file = doc.value("phantom_file", std::string{});
  if (doc.contains("grid")) {
    const auto& g = doc["grid"];
    cfg.grid = GridSpec{g.value("x0", cfg.grid.x0), g.value("x1", cfg.grid.x1),
                        g.value("nx", cfg.grid.nx), g.value("y0", cfg.grid.y0),
                        g.value("y1", cfg.grid.y1), g.value("ny", cfg.grid.ny)};
  }
  if (doc.contains("series")) {
    cfg.series.n_max = doc["series"].value("n_max", cfg.series.n_max);
    cfg.series.radial_nodes =
        doc["series"].value("radial_nodes", cfg.series.radial_nodes);
  }
  cfg.circle_nodes = doc.value("circle_nodes", cfg.circle_nodes);
  cfg.fd_order = doc.value("fd_order", cfg.fd_order);
  cfg.smooth_sigma = doc.value("smooth_sigma", cfg.smooth_sigma);
  cfg.threads = doc.value("threads", cfg.threads);
  cfg.seed = doc.value("seed", cfg.seed);
  return cfg;
}

Phantom resolve_phantom(const ExperimentConfig& cfg,
                        const std::string& flag_path) {
  if (!flag_path.empty()) return load_phantom(flag_path);
  if (!cfg.phantom_file.empty()) return load_phantom(cfg.phantom_file);
  if (cfg.phantom) return phantom_from_json_text(cfg.phantom->dump());
  throw std::runtime_error("no phantom given (use --phantom or the config)");
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // LF line endings everywhere
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

std::pair<double, double> parse_range(const std::string& text) {
  double lo, hi;
  if (std::sscanf(text.c_str(), "%lf:%lf", &lo, &hi) != 2)
    throw CLI::ValidationError("range", "expected lo:hi, got '" + text + "'");
  return {lo, hi};
}

GridSpec parse_grid(const std::string& text, const GridSpec& fallback) {
  if (text.empty()) return fallback;
  GridSpec g;
  if (std::sscanf(text.c_str(), "%lf:%lf:%d:%lf:%lf:%d", &g.x0, &g.x1, &g.nx,
                  &g.y0, &g.y1, &g.ny) != 6)
    throw CLI::ValidationError(
        "grid", "expected x0:x1:nx:y0:y1:ny, got '" + text + "'");
  return g;
}

std::vector<std::pair<double, double>> parse_points(const std::string& text) {
  std::vector<std::pair<double, double>> pts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    double x, y;
    if (std::sscanf(item.c_str(), "%lf,%lf", &x, &y) != 2)
      throw CLI::ValidationError("points",
                                 "expected x,y;x,y;..., got '" + item + "'");
    pts.emplace_back(x, y);
  }
  if (pts.empty()) throw CLI::ValidationError("points", "no points parsed");
  return pts;
}

void validate_grid(const GridSpec& g) {
  if (g.nx < 2 || g.ny < 2)
    throw std::runtime_error("grid resolutions must be >= 2");
  if (!(g.y0 > 0.0) || !(g.y1 > 0.0))
    throw std::runtime_error("grid y-range must be strictly positive");
}

int cmd_coeffs(const std::string& config_path, int order,
               const std::string& out_path, const std::string& sample,
               const std::string& sample_out, int sample_count) {
  (void)config_path;
  const CoeffTables tables = build_tables(order);
  if (!out_path.empty()) {
    auto out = open_output(out_path);
    out << tables_to_json(tables);
  } else {
    std::cout << tables_to_json(tables);
  }
  if (!sample.empty()) {
    char family;
    int k, i;
    if (std::sscanf(sample.c_str(), "%c:%d:%d", &family, &k, &i) != 3 ||
        (family != 'A' && family != 'B' && family != 'Z'))
      throw std::runtime_error("bad --sample spec, expected FAMILY:K:I like Z:3:1");
    const KernelFamily fam = family == 'A'   ? KernelFamily::A
                             : family == 'B' ? KernelFamily::B
                                             : KernelFamily::Z;
    const OddPolynomial kernel = kernel_for(tables, fam, k, i);
    if (sample_out.empty())
      throw std::runtime_error("--sample needs --sample-out FILE");
    auto out = open_output(sample_out);
    write_kernel_csv(out, kernel, sample_count);
  }
  return 0;
}

int cmd_forward(const ExperimentConfig& cfg, const std::string& phantom_path,
                const std::string& p_range, const std::string& r_range, int np,
                int nr, int nodes, const std::string& out_path) {
  const Phantom phantom = resolve_phantom(cfg, phantom_path);
  const auto [p0, p1] = parse_range(p_range);
  const auto [r0, r1] = parse_range(r_range);
  if (np < 2 || nr < 2) throw std::runtime_error("need --np, --nr >= 2");
  if (r0 < 0.0) throw std::runtime_error("r-range must be non-negative");
  const SampledMeanField sino =
      sample_forward(phantom, p0, p1, np, r0, r1, nr, nodes, cfg.fd_order);
  auto out = open_output(out_path);
  sino.write_csv(out);
  return 0;
}

int cmd_reconstruct(const ExperimentConfig& cfg,
                    const std::string& phantom_path,
                    const std::string& sinogram_path,
                    const std::string& grid_text, int n_max,
                    const std::string& out_path, const std::string& image_path,
                    unsigned threads) {
  SeriesConfig series = cfg.series;
  if (n_max >= 0) series.n_max = n_max;
  const GridSpec grid = parse_grid(grid_text, cfg.grid);
  validate_grid(grid);

  std::optional<Phantom> phantom;
  if (!phantom_path.empty() || cfg.phantom || !cfg.phantom_file.empty())
    phantom = resolve_phantom(cfg, phantom_path);

  std::unique_ptr<MeanField> field;
  if (!sinogram_path.empty()) {
    std::ifstream in(sinogram_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open sinogram: " + sinogram_path);
    auto sampled = SampledMeanField::read_csv(in, cfg.fd_order);
    if (cfg.smooth_sigma > 0.0) sampled = sampled.smoothed(cfg.smooth_sigma);
    field = std::make_unique<SampledMeanField>(std::move(sampled));
  } else if (phantom) {
    field = std::make_unique<AnalyticMeanField>(*phantom, cfg.circle_nodes);
  } else {
    throw std::runtime_error("need --phantom or --sinogram");
  }

  const CoeffTables tables = build_tables(std::max(1, series.n_max));
  const GridResult result =
      reconstruct_grid(tables, *field, grid, series,
                       phantom ? &*phantom : nullptr, threads ? threads : cfg.threads);
  if (!out_path.empty()) {
    auto out = open_output(out_path);
    write_grid_csv(out, result);
  }
  if (!image_path.empty()) {
    auto img = open_output(image_path);
    write_pgm(img, result.values, grid.nx, grid.ny);
  }
  if (!result.truth.empty()) {
    const ErrorSummary err = compute_error(result.values, result.truth);
    std::cout << "reconstructed " << grid.nx << "x" << grid.ny
              << " grid at n=" << series.n_max << ": l2 " << err.l2
              << ", linf " << err.linf << " (" << result.seconds << " s)\n";
  } else {
    std::cout << "reconstructed " << grid.nx << "x" << grid.ny
              << " grid at n=" << series.n_max << " (" << result.seconds
              << " s)\n";
  }
  return 0;
}

int cmd_convergence(const ExperimentConfig& cfg,
                    const std::string& phantom_path,
                    const std::string& points_text, int num_points, int n_max,
                    const std::string& out_path) {
  const Phantom phantom = resolve_phantom(cfg, phantom_path);
  SeriesConfig series = cfg.series;
  if (n_max >= 0) series.n_max = n_max;

  std::vector<std::pair<double, double>> points;
  if (!points_text.empty()) {
    points = parse_points(points_text);
  } else {
    // seeded probes around the first component's center
    if (phantom.components().empty())
      throw std::runtime_error("empty phantom needs explicit --points");
    const Bump& b = phantom.components().front();
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> dx(-2.0 * b.scale, 2.0 * b.scale);
    for (int i = 0; i < num_points; ++i)
      points.emplace_back(b.x0 + dx(rng), std::max(0.1, b.y0 + dx(rng)));
  }

  const AnalyticMeanField field(phantom, cfg.circle_nodes);
  const CoeffTables tables = build_tables(std::max(1, series.n_max));
  const KernelBank bank(tables, series.n_max);

  std::vector<std::vector<double>> errors;  // per point, per order
  for (const auto& [x, y] : points) {
    const auto rep = reconstruct_point(bank, field, x, y, series, &phantom);
    errors.push_back(rep.abs_errors());
  }
  ErrorSummary summary;
  auto out = open_output(out_path);
  out << "n,linf,l2\n";
  for (int n = 0; n <= series.n_max; ++n) {
    double linf = 0.0, sq = 0.0;
    for (const auto& e : errors) {
      linf = std::max(linf, e[n]);
      sq += e[n] * e[n];
    }
    const double l2 = std::sqrt(sq / errors.size());
    summary.per_order_linf.emplace_back(n, linf);
    out << n << ',' << format_double(linf) << ',' << format_double(l2) << '\n';
  }
  std::cout << "convergence over " << points.size() << " probes written to "
            << out_path << "\n";
  return 0;
}

int cmd_verify() {
  const auto results = run_verification();
  for (const auto& r : results) {
    std::printf("%-24s %s  (%.2f s)  %s\n", r.name.c_str(),
                r.passed ? "PASS" : "FAIL", r.seconds, r.detail.c_str());
  }
  return all_passed(results) ? 0 : 1;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{
      "circular-mean transform tools: exact inversion kernels, forward "
      "simulation and series reconstruction for functions supported above "
      "the detector line"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON config; flags override it")
      ->check(CLI::ExistingFile);

  // coeffs
  auto* coeffs = app.add_subcommand("coeffs", "emit coefficient tables as JSON");
  int order = 12;
  std::string coeffs_out, sample, sample_out;
  int sample_count = 256;
  coeffs->add_option("--order", order, "table depth")->check(CLI::Range(1, 64));
  coeffs->add_option("--out", coeffs_out, "output JSON path (default stdout)");
  coeffs->add_option("--sample", sample, "kernel to sample, FAMILY:K:I (e.g. Z:3:1)");
  coeffs->add_option("--sample-out", sample_out, "CSV path for kernel samples");
  coeffs->add_option("--sample-count", sample_count, "sample count")
      ->check(CLI::Range(2, 1 << 20));

  // forward
  auto* forward = app.add_subcommand("forward", "phantom to sinogram CSV");
  std::string fwd_phantom, p_range = "-0.5:1.0", r_range = "0.0:2.0", fwd_out;
  int np = 64, nr = 64, nodes = kDefaultCircleNodes;
  forward->add_option("--phantom", fwd_phantom, "phantom JSON file");
  forward->add_option("--p-range", p_range, "center range lo:hi");
  forward->add_option("--r-range", r_range, "radius range lo:hi");
  forward->add_option("--np", np, "centers");
  forward->add_option("--nr", nr, "radii");
  forward->add_option("--nodes", nodes, "circle quadrature nodes")
      ->check(CLI::Range(16, 1 << 28));
  forward->add_option("--out", fwd_out, "sinogram CSV path")->required();

  // reconstruct
  auto* rec = app.add_subcommand("reconstruct", "series reconstruction on a grid");
  std::string rec_phantom, rec_sinogram, rec_grid, rec_out, rec_image;
  int rec_nmax = -1;
  unsigned rec_threads = 0;
  rec->add_option("--phantom", rec_phantom, "phantom JSON file");
  rec->add_option("--sinogram", rec_sinogram, "sampled Mf CSV (p,r,mf)");
  rec->add_option("--grid", rec_grid, "x0:x1:nx:y0:y1:ny");
  rec->add_option("--n-max", rec_nmax, "truncation order");
  rec->add_option("--out", rec_out, "grid CSV path");
  rec->add_option("--image", rec_image, "PGM (P2) image path");
  rec->add_option("--threads", rec_threads, "worker threads (0 = auto)");

  // convergence
  auto* conv = app.add_subcommand("convergence", "per-order error at probe points");
  std::string conv_phantom, conv_points, conv_out;
  int conv_nmax = -1, conv_num_points = 5;
  conv->add_option("--phantom", conv_phantom, "phantom JSON file");
  conv->add_option("--points", conv_points, "probes x,y;x,y;...");
  conv->add_option("--num-points", conv_num_points, "seeded probe count");
  conv->add_option("--n-max", conv_nmax, "truncation order");
  conv->add_option("--out", conv_out, "per-order error CSV")->required();

  // verify
  app.add_subcommand("verify",
                     "run the built-in validation suites (exit 1 on failure)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const ExperimentConfig cfg = load_config(config_path);
    if (coeffs->parsed())
      return cmd_coeffs(config_path, order, coeffs_out, sample, sample_out,
                        sample_count);
    if (forward->parsed())
      return cmd_forward(cfg, fwd_phantom, p_range, r_range, np, nr, nodes,
                         fwd_out);
    if (rec->parsed())
      return cmd_reconstruct(cfg, rec_phantom, rec_sinogram, rec_grid,
                             rec_nmax, rec_out, rec_image, rec_threads);
    if (conv->parsed())
      return cmd_convergence(cfg, conv_phantom, conv_points, conv_num_points,
                             conv_nmax, conv_out);
    return cmd_verify();
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace cmrt::cli
