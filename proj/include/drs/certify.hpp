#ifndef DRS_CERTIFY_HPP
#define DRS_CERTIFY_HPP

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "drs/classifier.hpp"
#include "drs/deform.hpp"
#include "drs/image.hpp"
#include "drs/smoothing.hpp"

namespace drs {

inline constexpr int kAbstain = -1;

using Predictor = std::function<LabelDist(const Image&)>;

Predictor make_predictor(const LinearSoftmaxModel& model);
Predictor make_predictor(const CentroidModel& model);

struct CertifyConfig {
  int n0 = 100;        // selection samples
  int n = 10000;       // estimation samples
  double alpha = 0.001;
  SmoothingDist dist = Uniform{1.0};
  Family family;
  std::uint64_t seed = 0;
  // Bound p_B as 1 - pA_lower (default) or estimate it with a second
  // Clopper-Pearson bound at alpha/2 each.
  bool two_sided_pb = false;
};

struct CertificationResult {
  int verdict = kAbstain;      // class index or kAbstain
  double pA_lower = 0.0;
  double radius = 0.0;         // parameter (or field) units
  NormKind norm_kind = NormKind::L1;
  long samples_used = 0;
};

// Exact one-sided binomial lower confidence bound on the success probability.
double clopper_pearson_lower(long successes, long trials, double alpha);

// Certified radii; floored at 0.
double radius_uniform(double lambda, double pA, double pB);
double radius_gaussian(double sigma, double pA, double pB);

// Two-phase Monte-Carlo certification around phi = 0.
CertificationResult certify_parametric(const Predictor& predict, const Image& image,
                                       const CertifyConfig& cfg);
// Same protocol with the perturbation drawn over the full 2WH field.
CertificationResult certify_vectorfield(const Predictor& predict, const Image& image,
                                        const CertifyConfig& cfg);

// Hard-label step profile of a scalar-parameter family: breakpoints found by
// scanning `nodes` points and bisecting each sign change.
struct StepProfile {
  int class_count = 0;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> breaks;  // ascending, interior
  std::vector<int> labels;     // breaks.size() + 1 piece labels
};

StepProfile scan_hard_labels(const Predictor& predict, const Image& image,
                             const Family& family, double lo, double hi, int nodes);

// Exact smoothing of the step profile at a given parameter center.
LabelDist profile_smoothed_score(const StepProfile& profile, const SmoothingDist& dist,
                                 double center);

// Near-exact smoothed score for 1-D families. Hard mode integrates the label
// step function exactly between scanned breakpoints; soft mode averages the
// simplex outputs by midpoint quadrature (Gaussian support truncated at 6 sigma).
LabelDist smoothed_score_quadrature(const Predictor& predict, const Image& image,
                                    const Family& family, const SmoothingDist& dist,
                                    int nodes, double center = 0.0, bool soft = false);

using Interval = std::pair<double, double>;

// Maximum of the composite-certificate parameter norm over a grid that
// includes the box corners. tsq is the bound axis for t_u^2 + t_v^2.
double max_composite_lhs(const ShearRotation&, Interval s_range, Interval theta_range,
                         int resolution);
double max_composite_lhs(const RotScaleTrans&, Interval theta_range, Interval alpha_range,
                         Interval tsq_range, int resolution);

// Soundness fuzzer: search parameters with norm <= radius for a point where
// the smoothed verdict differs from the verdict at 0. 1-D families sweep the
// exact profile; others use random search against a high-sample MC verdict.
std::optional<std::vector<double>> empirical_attack(const Predictor& predict,
                                                    const Image& image,
                                                    const Family& family,
                                                    const SmoothingDist& dist,
                                                    double radius, int budget,
                                                    std::uint64_t seed);

}  // namespace drs

#endif
