#ifndef DRS_CLASSIFIER_HPP
#define DRS_CLASSIFIER_HPP

#include <string>
#include <variant>
#include <vector>

#include "drs/data_io.hpp"
#include "drs/deform.hpp"
#include "drs/image.hpp"
#include "drs/smoothing.hpp"

namespace drs {

// Probability simplex over K labels.
using LabelDist = std::vector<double>;

struct LinearSoftmaxModel {
  int input_width = 0;
  int input_height = 0;
  int input_channels = 0;
  int class_count = 0;
  std::vector<double> weights;  // class_count x n, row-major
  std::vector<double> bias;     // class_count
};

struct CentroidModel {
  int input_width = 0;
  int input_height = 0;
  int input_channels = 0;
  std::vector<Image> centroids;  // one per class
};

LabelDist predict(const LinearSoftmaxModel& model, const Image& image);
LabelDist predict(const CentroidModel& model, const Image& image);

// Smallest index achieving the maximum score.
int hard_label(const LabelDist& dist);

// Deformation families the smoothing pipeline perturbs.
enum class FamilyTag { Translation, Rotation, Scaling, Affine, Dct, VectorField };

struct Family {
  FamilyTag tag = FamilyTag::Rotation;
  int dct_k = 2;  // only for Dct
};

// Parameter dimension of a family on a WxH grid.
int family_dim(const Family& family, int width, int height);

// Deformation field at parameter vector phi (phi = 0 is the identity).
VectorField family_field(const Family& family, const std::vector<double>& phi,
                         const CoordinateField& grid);

Family parse_family(const std::string& name);
std::string family_name(const Family& family);

struct TrainConfig {
  int epochs = 20;
  double lr = 0.05;
  std::uint64_t seed = 0;
};

// SGD on cross-entropy; each example is warped by a deformation whose
// parameters are drawn from dist before the gradient step. Deterministic for
// a fixed seed. Returns final-epoch training accuracy through *accuracy_out.
LinearSoftmaxModel train(const Dataset& dataset, const Family& family,
                         const SmoothingDist& dist, const TrainConfig& cfg,
                         double* accuracy_out = nullptr,
                         std::vector<double>* epoch_loss_out = nullptr);

CentroidModel train_centroids(const Dataset& dataset);

// Little-endian binary: magic "DRSM1", dims, f64 weights.
void save_model(const LinearSoftmaxModel& model, const std::string& path);
LinearSoftmaxModel load_model(const std::string& path);

}  // namespace drs

#endif
