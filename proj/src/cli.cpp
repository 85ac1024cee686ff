#include <atomic>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "drs/certify.hpp"
#include "drs/classifier.hpp"
#include "drs/data_io.hpp"
#include "drs/deform.hpp"
#include "drs/image.hpp"
#include "drs/report.hpp"
#include "drs/smoothing.hpp"

namespace drs {

namespace {

struct DistOpts {
  std::string kind = "uniform";
  double lambda = 0.5;
  double sigma = 0.1;

  SmoothingDist make() const {
    if (kind == "uniform") return Uniform{lambda};
    if (kind == "gaussian") return Gaussian{sigma};
    throw CLI::ValidationError("--dist must be 'uniform' or 'gaussian'");
  }
};

void add_dist_options(CLI::App* cmd, DistOpts& opts) {
  cmd->add_option("--dist", opts.kind, "Smoothing distribution: uniform or gaussian");
  cmd->add_option("--lambda", opts.lambda, "Uniform half-width");
  cmd->add_option("--sigma", opts.sigma, "Gaussian standard deviation");
}

std::vector<double> parse_params(const std::string& csv) {
  std::vector<double> out;
  std::istringstream ss(csv);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(std::stod(field));
  return out;
}

int worker_count() {
  if (const char* env = std::getenv("DRS_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

int cmd_synth(const std::string& images_path, const std::string& labels_path, int count,
              int size, std::uint64_t seed) {
  save_idx(synth_shapes(count, size, seed), images_path, labels_path);
  return 0;
}

int cmd_train(const std::string& images_path, const std::string& labels_path,
              const std::string& family_name, const DistOpts& dist_opts, int epochs, double lr,
              std::uint64_t seed, const std::string& model_path) {
  const Dataset ds = load_idx(images_path, labels_path);
  double accuracy = 0.0;
  const LinearSoftmaxModel model = train(ds, parse_family(family_name), dist_opts.make(),
                                         TrainConfig{epochs, lr, seed}, &accuracy);
  save_model(model, model_path);
  std::cout << "trained on " << ds.images.size() << " images, final training accuracy "
            << accuracy << "\n";
  return 0;
}

int cmd_certify(const std::string& model_path, const std::string& images_path,
                const std::string& labels_path, const std::string& family_name,
                const DistOpts& dist_opts, int n0, int n, double alpha, std::uint64_t seed,
                int limit, const std::string& csv_path) {
  const LinearSoftmaxModel model = load_model(model_path);
  const Dataset ds = load_idx(images_path, labels_path);
  const Predictor predictor = make_predictor(model);

  CertifyConfig cfg;
  cfg.n0 = n0;
  cfg.n = n;
  cfg.alpha = alpha;
  cfg.dist = dist_opts.make();
  cfg.family = parse_family(family_name);
  cfg.seed = seed;

  const std::size_t total =
      limit > 0 ? std::min<std::size_t>(limit, ds.images.size()) : ds.images.size();
  std::vector<ResultRow> rows(total);

  // Fan out over inputs; rows land at their input index regardless of
  // completion order.
  std::atomic<std::size_t> next{0};
  const int workers = std::min<int>(worker_count(), static_cast<int>(total));
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= total) return;
      const auto start = std::chrono::steady_clock::now();
      CertifyConfig local = cfg;
      local.seed = cfg.seed + i;  // independent streams per input
      const CertificationResult res = certify_parametric(predictor, ds.images[i], local);
      const auto stop = std::chrono::steady_clock::now();
      ResultRow& row = rows[i];
      row.index = static_cast<int>(i);
      row.true_label = ds.labels[i];
      row.verdict = res.verdict;
      row.pA_lower = res.pA_lower;
      row.radius = res.radius;
      row.norm_kind = res.norm_kind;
      row.correct = res.verdict == ds.labels[i];
      row.wall_time_ms =
          std::chrono::duration<double, std::milli>(stop - start).count();
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (std::thread& t : pool) t.join();

  write_result_csv(rows, csv_path);
  std::cout << "wrote " << rows.size() << " rows to " << csv_path << "\n";
  return 0;
}

int cmd_attack(const std::string& model_path, const std::string& images_path,
               const std::string& labels_path, int index, const std::string& family_name,
               const DistOpts& dist_opts, double radius, int budget, std::uint64_t seed) {
  const LinearSoftmaxModel model = load_model(model_path);
  const Dataset ds = load_idx(images_path, labels_path);
  if (index < 0 || index >= static_cast<int>(ds.images.size()))
    throw std::runtime_error("attack: image index out of range");
  const auto counterexample =
      empirical_attack(make_predictor(model), ds.images[index], parse_family(family_name),
                       dist_opts.make(), radius, budget, seed);
  if (counterexample) {
    std::cout << "counterexample at parameters";
    for (double p : *counterexample) std::cout << ' ' << p;
    std::cout << "\n";
  } else {
    std::cout << "no counterexample within radius " << radius << " (budget " << budget << ")\n";
  }
  return 0;
}

int cmd_warp(const std::string& images_path, const std::string& labels_path, int index,
             const std::string& family_name, const std::string& params_csv,
             const std::string& field_path, const std::string& out_path) {
  const Dataset ds = load_idx(images_path, labels_path);
  if (index < 0 || index >= static_cast<int>(ds.images.size()))
    throw std::runtime_error("warp: image index out of range");
  const Image& image = ds.images[index];
  VectorField field;
  if (!field_path.empty()) {
    field = load_vector_field(field_path);
  } else {
    const CoordinateField grid = normalized_grid(image.width(), image.height());
    field = family_field(parse_family(family_name), parse_params(params_csv), grid);
  }
  write_pgm(warp(image, field), out_path);
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

int cmd_report(const std::string& csv_path, const std::string& at_csv, int pixels_width) {
  const std::vector<ResultRow> rows = read_result_csv(csv_path);
  const double scale = pixels_width > 1 ? pixels_per_unit(pixels_width) : 1.0;
  const char* unit = pixels_width > 1 ? " px" : "";
  std::cout << "radius\tcertified_accuracy\n";
  for (double r : parse_params(at_csv)) {
    // --at values are given in reporting units.
    std::cout << r << unit << "\t" << certified_accuracy(rows, r / scale) << "\n";
  }
  std::cout << "ACR\t" << average_certified_radius(rows) * scale << unit << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Deformation-smoothed classification and certification"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "Generate the synthetic shapes dataset as IDX");
  std::string sy_images, sy_labels;
  int sy_count = 100, sy_size = 16;
  std::uint64_t sy_seed = 0;
  synth->add_option("--out-images", sy_images)->required();
  synth->add_option("--out-labels", sy_labels)->required();
  synth->add_option("--count", sy_count, "Images per class");
  synth->add_option("--size", sy_size, "Image side length");
  synth->add_option("--seed", sy_seed);

  // train
  auto* tr = app.add_subcommand("train", "Train a linear softmax model with deformation augmentation");
  std::string tr_images, tr_labels, tr_family = "rotation", tr_model;
  DistOpts tr_dist;
  int tr_epochs = 20;
  double tr_lr = 0.05;
  std::uint64_t tr_seed = 0;
  tr->add_option("--images", tr_images)->required();
  tr->add_option("--labels", tr_labels)->required();
  tr->add_option("--family", tr_family);
  add_dist_options(tr, tr_dist);
  tr->add_option("--epochs", tr_epochs);
  tr->add_option("--lr", tr_lr);
  tr->add_option("--seed", tr_seed);
  tr->add_option("--out", tr_model, "Model output path")->required();

  // certify
  auto* ce = app.add_subcommand("certify", "Certify a test set and write a result CSV");
  std::string ce_model, ce_images, ce_labels, ce_family = "rotation", ce_csv = "results.csv";
  DistOpts ce_dist;
  int ce_n0 = 100, ce_n = 10000, ce_limit = 0;
  double ce_alpha = 0.001;
  std::uint64_t ce_seed = 0;
  ce->add_option("--model", ce_model)->required();
  ce->add_option("--images", ce_images)->required();
  ce->add_option("--labels", ce_labels)->required();
  ce->add_option("--family", ce_family);
  add_dist_options(ce, ce_dist);
  ce->add_option("--n0", ce_n0, "Selection samples");
  ce->add_option("--n", ce_n, "Estimation samples");
  ce->add_option("--alpha", ce_alpha, "Failure probability");
  ce->add_option("--seed", ce_seed);
  ce->add_option("--limit", ce_limit, "Certify only the first N images");
  ce->add_option("--out", ce_csv, "Result CSV path");

  // attack
  auto* at = app.add_subcommand("attack", "Search for a counterexample within a radius");
  std::string at_model, at_images, at_labels, at_family = "rotation";
  DistOpts at_dist;
  int at_index = 0, at_budget = 2001;
  double at_radius = 0.0;
  std::uint64_t at_seed = 0;
  at->add_option("--model", at_model)->required();
  at->add_option("--images", at_images)->required();
  at->add_option("--labels", at_labels)->required();
  at->add_option("--index", at_index, "Image index");
  at->add_option("--family", at_family);
  add_dist_options(at, at_dist);
  at->add_option("--radius", at_radius)->required();
  at->add_option("--budget", at_budget);
  at->add_option("--seed", at_seed);

  // warp
  auto* wa = app.add_subcommand("warp", "Apply a deformation to one image and write a PGM");
  std::string wa_images, wa_labels, wa_family = "rotation", wa_params = "0", wa_field, wa_out;
  int wa_index = 0;
  wa->add_option("--images", wa_images)->required();
  wa->add_option("--labels", wa_labels)->required();
  wa->add_option("--index", wa_index);
  wa->add_option("--family", wa_family);
  wa->add_option("--params", wa_params, "Comma-separated family parameters");
  wa->add_option("--field", wa_field, "Raw vector field file (overrides --family)");
  wa->add_option("--out", wa_out, "Output PGM path")->required();

  // report
  auto* re = app.add_subcommand("report", "Certified-accuracy table and ACR from a result CSV");
  std::string re_csv, re_at = "0";
  int re_pixels = 0;
  re->add_option("--csv", re_csv)->required();
  re->add_option("--at", re_at, "Comma-separated radii to report");
  re->add_option("--pixels", re_pixels,
                 "Report radii in pixels for an image of this width");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (synth->parsed()) return cmd_synth(sy_images, sy_labels, sy_count, sy_size, sy_seed);
    if (tr->parsed())
      return cmd_train(tr_images, tr_labels, tr_family, tr_dist, tr_epochs, tr_lr, tr_seed,
                       tr_model);
    if (ce->parsed())
      return cmd_certify(ce_model, ce_images, ce_labels, ce_family, ce_dist, ce_n0, ce_n,
                         ce_alpha, ce_seed, ce_limit, ce_csv);
    if (at->parsed())
      return cmd_attack(at_model, at_images, at_labels, at_index, at_family, at_dist, at_radius,
                        at_budget, at_seed);
    if (wa->parsed())
      return cmd_warp(wa_images, wa_labels, wa_index, wa_family, wa_params, wa_field, wa_out);
    if (re->parsed()) return cmd_report(re_csv, re_at, re_pixels);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args);
}

}  // namespace drs
