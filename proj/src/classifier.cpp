#include "drs/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace drs {

namespace {

void check_dims(int w, int h, int ch, const Image& image, const char* what) {
  if (image.width() != w || image.height() != h || image.channels() != ch)
    throw std::invalid_argument(std::string(what) + ": image dimensions do not match model");
}

LabelDist softmax(std::vector<double> logits) {
  const double mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double& z : logits) {
    z = std::exp(z - mx);
    sum += z;
  }
  for (double& z : logits) z /= sum;
  return logits;
}

}  // namespace

LabelDist predict(const LinearSoftmaxModel& model, const Image& image) {
  check_dims(model.input_width, model.input_height, model.input_channels, image, "predict");
  const std::size_t n = image.size();
  std::vector<double> logits(model.class_count);
  for (int k = 0; k < model.class_count; ++k) {
    const double* w = model.weights.data() + static_cast<std::size_t>(k) * n;
    double z = model.bias[k];
    const double* x = image.pixels().data();
    for (std::size_t j = 0; j < n; ++j) z += w[j] * x[j];
    logits[k] = z;
  }
  return softmax(std::move(logits));
}

LabelDist predict(const CentroidModel& model, const Image& image) {
  check_dims(model.input_width, model.input_height, model.input_channels, image, "predict");
  // Soft scores from negative squared distances.
  std::vector<double> logits(model.centroids.size());
  for (std::size_t k = 0; k < model.centroids.size(); ++k) {
    double d2 = 0.0;
    for (std::size_t j = 0; j < image.size(); ++j) {
      const double d = image.pixels()[j] - model.centroids[k].pixels()[j];
      d2 += d * d;
    }
    logits[k] = -d2;
  }
  return softmax(std::move(logits));
}

int hard_label(const LabelDist& dist) {
  if (dist.empty()) throw std::invalid_argument("hard_label: empty distribution");
  int best = 0;
  for (int i = 1; i < static_cast<int>(dist.size()); ++i)
    if (dist[i] > dist[best]) best = i;
  return best;
}

int family_dim(const Family& family, int width, int height) {
  switch (family.tag) {
    case FamilyTag::Translation: return 2;
    case FamilyTag::Rotation: return 1;
    case FamilyTag::Scaling: return 1;
    case FamilyTag::Affine: return 6;
    case FamilyTag::Dct: return 2 * family.dct_k * family.dct_k;
    case FamilyTag::VectorField: return 2 * width * height;
  }
  throw std::logic_error("family_dim: unknown family");
}

VectorField family_field(const Family& family, const std::vector<double>& phi,
                         const CoordinateField& grid) {
  if (static_cast<int>(phi.size()) != family_dim(family, grid.width, grid.height))
    throw std::invalid_argument("family_field: wrong parameter dimension");
  switch (family.tag) {
    case FamilyTag::Translation:
      return field_translation(phi[0], phi[1], grid);
    case FamilyTag::Rotation:
      return field_rotation(phi[0], grid);
    case FamilyTag::Scaling:
      // The certified parameter is alpha - 1.
      return field_scale_delta(phi[0], grid);
    case FamilyTag::Affine:
      return field_affine(phi[0], phi[1], phi[2], phi[3], phi[4], phi[5], grid);
    case FamilyTag::Dct:
      return field_dct(phi, family.dct_k, grid);
    case FamilyTag::VectorField: {
      VectorField f(grid.width, grid.height);
      std::copy(phi.begin(), phi.begin() + f.pixel_count(), f.u.begin());
      std::copy(phi.begin() + f.pixel_count(), phi.end(), f.v.begin());
      return f;
    }
  }
  throw std::logic_error("family_field: unknown family");
}

Family parse_family(const std::string& name) {
  if (name == "translation") return {FamilyTag::Translation};
  if (name == "rotation") return {FamilyTag::Rotation};
  if (name == "scaling") return {FamilyTag::Scaling};
  if (name == "affine") return {FamilyTag::Affine};
  if (name == "dct") return {FamilyTag::Dct, 2};
  if (name == "field") return {FamilyTag::VectorField};
  throw std::invalid_argument("unknown deformation family: " + name);
}

std::string family_name(const Family& family) {
  switch (family.tag) {
    case FamilyTag::Translation: return "translation";
    case FamilyTag::Rotation: return "rotation";
    case FamilyTag::Scaling: return "scaling";
    case FamilyTag::Affine: return "affine";
    case FamilyTag::Dct: return "dct";
    case FamilyTag::VectorField: return "field";
  }
  return "?";
}

LinearSoftmaxModel train(const Dataset& dataset, const Family& family,
                         const SmoothingDist& dist, const TrainConfig& cfg,
                         double* accuracy_out, std::vector<double>* epoch_loss_out) {
  if (dataset.images.empty()) throw std::invalid_argument("train: empty dataset");
  for (int l : dataset.labels)
    if (l < 0 || l >= dataset.class_count) throw std::invalid_argument("train: label out of range");

  const Image& first = dataset.images.front();
  const int K = dataset.class_count;
  const std::size_t n = first.size();
  LinearSoftmaxModel model{first.width(), first.height(), first.channels(), K,
                           std::vector<double>(static_cast<std::size_t>(K) * n, 0.0),
                           std::vector<double>(K, 0.0)};
  const CoordinateField grid = normalized_grid(first.width(), first.height());
  const int dim = family_dim(family, first.width(), first.height());
  const std::size_t count = dataset.images.size();

  std::uint64_t draw = 0;
  long correct = 0;
  if (epoch_loss_out) epoch_loss_out->clear();
  // Polyak-averaged iterate; the average is what gets returned, since plain
  // SGD with augmentation noise never settles.
  LinearSoftmaxModel avg = model;
  std::uint64_t steps = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    // 1/t step-size decay so the iterates settle instead of bouncing around
    // the optimum.
    const double lr = cfg.lr / (1.0 + epoch);
    // Deterministic shuffle from the counter stream.
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = count; i > 1; --i) {
      const RandomStream s(cfg.seed + 1, static_cast<std::uint64_t>(epoch) * count + i);
      std::swap(order[i - 1], order[static_cast<std::size_t>(s.u01(0) * i)]);
    }
    correct = 0;
    for (std::size_t idx : order) {
      const RandomStream s(cfg.seed, draw++);
      const std::vector<double> eps = sample_perturbation(dist, dim, s);
      const Image warped = warp(dataset.images[idx], family_field(family, eps, grid));
      const LabelDist probs = predict(model, warped);
      const int label = dataset.labels[idx];
      if (hard_label(probs) == label) ++correct;
      const double loss = -std::log(std::max(probs[label], 1e-300));
      if (!std::isfinite(loss))
        throw std::runtime_error("train: non-finite loss (learning rate too large?)");
      // Gradient step on cross-entropy.
      const double* x = warped.pixels().data();
      for (int k = 0; k < K; ++k) {
        const double g = probs[k] - (k == label ? 1.0 : 0.0);
        double* w = model.weights.data() + static_cast<std::size_t>(k) * n;
        for (std::size_t j = 0; j < n; ++j) w[j] -= lr * g * x[j];
        model.bias[k] -= lr * g;
      }
      ++steps;
      for (std::size_t j = 0; j < avg.weights.size(); ++j)
        avg.weights[j] += (model.weights[j] - avg.weights[j]) / steps;
      for (int k = 0; k < K; ++k) avg.bias[k] += (model.bias[k] - avg.bias[k]) / steps;
    }
    if (epoch_loss_out) {
      // Measure on the clean training set so the curve is not dominated by
      // the per-epoch augmentation draw.
      double clean_loss = 0.0;
      for (std::size_t i = 0; i < count; ++i) {
        const LabelDist probs = predict(avg, dataset.images[i]);
        clean_loss += -std::log(std::max(probs[dataset.labels[i]], 1e-300));
      }
      epoch_loss_out->push_back(clean_loss / count);
    }
  }
  if (accuracy_out)
    *accuracy_out = cfg.epochs > 0 ? static_cast<double>(correct) / count : 0.0;
  return cfg.epochs > 0 ? avg : model;
}

CentroidModel train_centroids(const Dataset& dataset) {
  if (dataset.images.empty()) throw std::invalid_argument("train_centroids: empty dataset");
  const Image& first = dataset.images.front();
  CentroidModel model{first.width(), first.height(), first.channels(), {}};
  std::vector<long> counts(dataset.class_count, 0);
  model.centroids.assign(dataset.class_count,
                         Image(first.width(), first.height(), first.channels()));
  for (std::size_t i = 0; i < dataset.images.size(); ++i) {
    const int l = dataset.labels[i];
    ++counts[l];
    for (std::size_t j = 0; j < first.size(); ++j)
      model.centroids[l].pixels()[j] += dataset.images[i].pixels()[j];
  }
  for (int k = 0; k < dataset.class_count; ++k)
    if (counts[k] > 0)
      for (double& p : model.centroids[k].pixels()) p /= counts[k];
  return model;
}

namespace {

constexpr char kModelMagic[5] = {'D', 'R', 'S', 'M', '1'};

void put_u32le(std::ostream& out, std::uint32_t v) {
  char b[4] = {static_cast<char>(v), static_cast<char>(v >> 8),
               static_cast<char>(v >> 16), static_cast<char>(v >> 24)};
  out.write(b, 4);
}

std::uint32_t get_u32le(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f64le(std::ostream& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>(bits >> (8 * i));
  out.write(b, 8);
}

double get_f64le(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace

void save_model(const LinearSoftmaxModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_model: cannot open " + path);
  out.write(kModelMagic, sizeof(kModelMagic));
  put_u32le(out, static_cast<std::uint32_t>(model.input_width));
  put_u32le(out, static_cast<std::uint32_t>(model.input_height));
  put_u32le(out, static_cast<std::uint32_t>(model.input_channels));
  put_u32le(out, static_cast<std::uint32_t>(model.class_count));
  for (double w : model.weights) put_f64le(out, w);
  for (double b : model.bias) put_f64le(out, b);
}

LinearSoftmaxModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_model: cannot open " + path);
  char magic[5];
  in.read(magic, 5);
  if (!in || std::memcmp(magic, kModelMagic, 5) != 0)
    throw std::runtime_error("load_model: bad magic in " + path);
  LinearSoftmaxModel model;
  model.input_width = static_cast<int>(get_u32le(in));
  model.input_height = static_cast<int>(get_u32le(in));
  model.input_channels = static_cast<int>(get_u32le(in));
  model.class_count = static_cast<int>(get_u32le(in));
  const std::size_t n = static_cast<std::size_t>(model.input_width) * model.input_height *
                        model.input_channels;
  model.weights.resize(static_cast<std::size_t>(model.class_count) * n);
  model.bias.resize(model.class_count);
  for (double& w : model.weights) w = get_f64le(in);
  for (double& b : model.bias) b = get_f64le(in);
  if (!in) throw std::runtime_error("load_model: truncated file " + path);
  return model;
}

}  // namespace drs
