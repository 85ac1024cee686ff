#include "drs/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace drs {

Predictor make_predictor(const LinearSoftmaxModel& model) {
  return [model](const Image& image) { return predict(model, image); };
}

Predictor make_predictor(const CentroidModel& model) {
  return [model](const Image& image) { return predict(model, image); };
}

namespace {

// P(X >= k) for X ~ Binomial(n, p).
double binomial_tail_geq(long k, long n, double p) {
  if (k <= 0) return 1.0;
  if (k > n) return 0.0;
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  double log_term = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
                    k * std::log(p) + (n - k) * std::log1p(-p);
  double term = std::exp(log_term);
  double sum = term;
  const double ratio_base = p / (1.0 - p);
  for (long i = k + 1; i <= n; ++i) {
    term *= static_cast<double>(n - i + 1) / i * ratio_base;
    sum += term;
    if (i > p * n && term < sum * 1e-17) break;
  }
  return std::min(sum, 1.0);
}

}  // namespace

double clopper_pearson_lower(long successes, long trials, double alpha) {
  if (trials < 1 || successes < 0 || successes > trials)
    throw std::invalid_argument("clopper_pearson_lower: invalid counts");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("clopper_pearson_lower: alpha must be in (0,1)");
  if (successes == 0) return 0.0;
  if (successes == trials) return std::pow(alpha, 1.0 / trials);
  // Largest p accepted by the one-sided test: P(X >= k | p) = alpha.
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (binomial_tail_geq(successes, trials, mid) < alpha)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double radius_uniform(double lambda, double pA, double pB) {
  if (!(lambda > 0.0)) throw std::invalid_argument("radius_uniform: lambda must be > 0");
  return std::max(0.0, lambda * (pA - pB));
}

double radius_gaussian(double sigma, double pA, double pB) {
  if (!(sigma > 0.0)) throw std::invalid_argument("radius_gaussian: sigma must be > 0");
  const double a = std::clamp(pA, 1e-12, 1.0 - 1e-12);
  const double b = std::clamp(pB, 1e-12, 1.0 - 1e-12);
  return std::max(0.0, 0.5 * sigma * (std_normal_quantile(a) - std_normal_quantile(b)));
}

namespace {

void validate_config(const CertifyConfig& cfg) {
  if (cfg.n0 < 1 || cfg.n < 1) throw std::invalid_argument("certify: n0 and n must be >= 1");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
    throw std::invalid_argument("certify: alpha must be in (0,1)");
  validate(cfg.dist);
}

int sampled_hard_label(const Predictor& predict, const Image& image, const Family& family,
                       const SmoothingDist& dist, const CoordinateField& grid, int dim,
                       std::uint64_t seed, std::uint64_t sample_index,
                       const std::vector<double>& center) {
  const RandomStream stream(seed, sample_index);
  std::vector<double> eps = sample_perturbation(dist, dim, stream);
  if (!center.empty())
    for (int i = 0; i < dim; ++i) eps[i] += center[i];
  return hard_label(predict(warp(image, family_field(family, eps, grid))));
}

}  // namespace

CertificationResult certify_parametric(const Predictor& predict, const Image& image,
                                       const CertifyConfig& cfg) {
  validate_config(cfg);
  const CoordinateField grid = normalized_grid(image.width(), image.height());
  const int dim = family_dim(cfg.family, image.width(), image.height());
  const LipschitzInfo lip = lipschitz_norm(cfg.dist);
  const std::vector<double> origin;

  // Phase 1: select the candidate class.
  std::vector<long> counts;
  for (int i = 0; i < cfg.n0; ++i) {
    const int label = sampled_hard_label(predict, image, cfg.family, cfg.dist, grid, dim,
                                         cfg.seed, static_cast<std::uint64_t>(i), origin);
    if (label >= static_cast<int>(counts.size())) counts.resize(label + 1, 0);
    ++counts[label];
  }
  int candidate = 0;
  for (int i = 1; i < static_cast<int>(counts.size()); ++i)
    if (counts[i] > counts[candidate]) candidate = i;

  // Phase 2: estimate with fresh draws (disjoint counter indices).
  long successes = 0;
  std::vector<long> other_counts;
  for (int i = 0; i < cfg.n; ++i) {
    const int label =
        sampled_hard_label(predict, image, cfg.family, cfg.dist, grid, dim, cfg.seed,
                           static_cast<std::uint64_t>(cfg.n0) + i, origin);
    if (label == candidate) {
      ++successes;
    } else if (cfg.two_sided_pb) {
      if (label >= static_cast<int>(other_counts.size())) other_counts.resize(label + 1, 0);
      ++other_counts[label];
    }
  }

  CertificationResult result;
  result.norm_kind = lip.norm;
  result.samples_used = cfg.n0 + cfg.n;

  const double bound_alpha = cfg.two_sided_pb ? cfg.alpha / 2.0 : cfg.alpha;
  const double pA_lower = clopper_pearson_lower(successes, cfg.n, bound_alpha);
  double pB;
  if (cfg.two_sided_pb) {
    long runner_up = 0;
    for (long c : other_counts) runner_up = std::max(runner_up, c);
    // Upper bound on the runner-up probability at alpha/2.
    pB = 1.0 - clopper_pearson_lower(cfg.n - runner_up, cfg.n, bound_alpha);
  } else {
    pB = 1.0 - pA_lower;
  }

  if (pA_lower <= 0.5) return result;  // ABSTAIN

  double radius;
  if (const auto* u = std::get_if<Uniform>(&cfg.dist))
    radius = radius_uniform(u->lambda, pA_lower, pB);
  else
    radius = radius_gaussian(std::get<Gaussian>(cfg.dist).sigma, pA_lower, pB);
  if (radius <= 0.0) return result;  // ABSTAIN

  result.verdict = candidate;
  result.pA_lower = pA_lower;
  result.radius = radius;
  return result;
}

CertificationResult certify_vectorfield(const Predictor& predict, const Image& image,
                                        const CertifyConfig& cfg) {
  CertifyConfig vf_cfg = cfg;
  vf_cfg.family = Family{FamilyTag::VectorField};
  return certify_parametric(predict, image, vf_cfg);
}

StepProfile scan_hard_labels(const Predictor& predict, const Image& image,
                             const Family& family, double lo, double hi, int nodes) {
  if (nodes < 3) throw std::invalid_argument("scan_hard_labels: nodes must be >= 3");
  if (!(lo < hi)) throw std::invalid_argument("scan_hard_labels: empty range");
  const CoordinateField grid = normalized_grid(image.width(), image.height());
  if (family_dim(family, image.width(), image.height()) != 1)
    throw std::invalid_argument("scan_hard_labels: family must have a scalar parameter");

  const auto label_at = [&](double t) {
    return hard_label(predict(warp(image, family_field(family, {t}, grid))));
  };

  StepProfile profile;
  profile.lo = lo;
  profile.hi = hi;
  profile.class_count = static_cast<int>(predict(image).size());

  double prev_t = lo;
  int prev_label = label_at(lo);
  profile.labels.push_back(prev_label);
  for (int i = 1; i < nodes; ++i) {
    const double t = lo + (hi - lo) * i / (nodes - 1);
    const int label = label_at(t);
    if (label != prev_label) {
      // Bisect the jump between the two samples.
      double a = prev_t, b = t;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (a + b);
        if (label_at(mid) == prev_label)
          a = mid;
        else
          b = mid;
      }
      profile.breaks.push_back(0.5 * (a + b));
      profile.labels.push_back(label);
    }
    prev_t = t;
    prev_label = label;
  }
  return profile;
}

LabelDist profile_smoothed_score(const StepProfile& profile, const SmoothingDist& dist,
                                 double center) {
  validate(dist);
  LabelDist score(profile.class_count, 0.0);
  const std::size_t pieces = profile.labels.size();
  for (std::size_t i = 0; i < pieces; ++i) {
    // Edge pieces extend beyond the scanned range.
    const double a = i == 0 ? -std::numeric_limits<double>::infinity() : profile.breaks[i - 1];
    const double b = i + 1 == pieces ? std::numeric_limits<double>::infinity() : profile.breaks[i];
    double mass;
    if (const auto* u = std::get_if<Uniform>(&dist)) {
      const double lo = std::max(a, center - u->lambda);
      const double hi = std::min(b, center + u->lambda);
      mass = std::max(0.0, hi - lo) / (2.0 * u->lambda);
    } else {
      const double sigma = std::get<Gaussian>(dist).sigma;
      const double ca = std::isinf(a) ? 0.0 : std_normal_cdf((a - center) / sigma);
      const double cb = std::isinf(b) ? 1.0 : std_normal_cdf((b - center) / sigma);
      mass = std::max(0.0, cb - ca);
    }
    score[profile.labels[i]] += mass;
  }
  return score;
}

LabelDist smoothed_score_quadrature(const Predictor& predict, const Image& image,
                                    const Family& family, const SmoothingDist& dist,
                                    int nodes, double center, bool soft) {
  if (nodes < 3) throw std::invalid_argument("smoothed_score_quadrature: nodes must be >= 3");
  validate(dist);
  if (family_dim(family, image.width(), image.height()) != 1)
    throw std::invalid_argument("smoothed_score_quadrature: family must have a scalar parameter");

  const auto* uni = std::get_if<Uniform>(&dist);
  const double half_span = uni ? uni->lambda : 8.0 * std::get<Gaussian>(dist).sigma;

  if (!soft) {
    const StepProfile profile = scan_hard_labels(predict, image, family, center - half_span,
                                                 center + half_span, nodes);
    return profile_smoothed_score(profile, dist, center);
  }

  // Soft mode: midpoint quadrature on the simplex outputs.
  const CoordinateField grid = normalized_grid(image.width(), image.height());
  const double lo = uni ? center - uni->lambda : center - 6.0 * std::get<Gaussian>(dist).sigma;
  const double hi = uni ? center + uni->lambda : center + 6.0 * std::get<Gaussian>(dist).sigma;
  LabelDist score;
  double total_weight = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double t = lo + (hi - lo) * (i + 0.5) / nodes;
    double w = 1.0;
    if (!uni) {
      const double sigma = std::get<Gaussian>(dist).sigma;
      const double z = (t - center) / sigma;
      w = std::exp(-0.5 * z * z);
    }
    const LabelDist probs = predict(warp(image, family_field(family, {t}, grid)));
    if (score.empty()) score.assign(probs.size(), 0.0);
    for (std::size_t k = 0; k < probs.size(); ++k) score[k] += w * probs[k];
    total_weight += w;
  }
  for (double& s : score) s /= total_weight;
  return score;
}

double max_composite_lhs(const ShearRotation&, Interval s_range, Interval theta_range,
                         int resolution) {
  if (resolution < 2) throw std::invalid_argument("max_composite_lhs: resolution must be >= 2");
  double best = 0.0;
  for (int i = 0; i < resolution; ++i) {
    const double s = s_range.first + (s_range.second - s_range.first) * i / (resolution - 1);
    for (int j = 0; j < resolution; ++j) {
      const double th =
          theta_range.first + (theta_range.second - theta_range.first) * j / (resolution - 1);
      const double val = std::sqrt(s * s - 2.0 * s * std::sin(th) - 4.0 * std::cos(th) + 4.0);
      best = std::max(best, val);
    }
  }
  return best;
}

double max_composite_lhs(const RotScaleTrans&, Interval theta_range, Interval alpha_range,
                         Interval tsq_range, int resolution) {
  if (resolution < 2) throw std::invalid_argument("max_composite_lhs: resolution must be >= 2");
  double best = 0.0;
  for (int i = 0; i < resolution; ++i) {
    const double th =
        theta_range.first + (theta_range.second - theta_range.first) * i / (resolution - 1);
    for (int j = 0; j < resolution; ++j) {
      const double al =
          alpha_range.first + (alpha_range.second - alpha_range.first) * j / (resolution - 1);
      for (int l = 0; l < resolution; ++l) {
        const double tsq =
            tsq_range.first + (tsq_range.second - tsq_range.first) * l / (resolution - 1);
        const double val =
            std::sqrt(2.0 + 2.0 * al * al - 4.0 * al * std::cos(th) + tsq);
        best = std::max(best, val);
      }
    }
  }
  return best;
}

namespace {

int mc_smoothed_verdict(const Predictor& predict, const Image& image, const Family& family,
                        const SmoothingDist& dist, const CoordinateField& grid, int dim,
                        const std::vector<double>& center, std::uint64_t seed, int samples) {
  std::vector<long> counts;
  for (int i = 0; i < samples; ++i) {
    const int label = sampled_hard_label(predict, image, family, dist, grid, dim, seed,
                                         static_cast<std::uint64_t>(i), center);
    if (label >= static_cast<int>(counts.size())) counts.resize(label + 1, 0);
    ++counts[label];
  }
  int best = 0;
  for (int i = 1; i < static_cast<int>(counts.size()); ++i)
    if (counts[i] > counts[best]) best = i;
  return best;
}

}  // namespace

std::optional<std::vector<double>> empirical_attack(const Predictor& predict,
                                                    const Image& image, const Family& family,
                                                    const SmoothingDist& dist, double radius,
                                                    int budget, std::uint64_t seed) {
  if (radius <= 0.0 || budget < 1) return std::nullopt;
  validate(dist);
  const int dim = family_dim(family, image.width(), image.height());

  if (dim == 1) {
    // Exact mode: sweep the smoothed profile.
    const auto* uni = std::get_if<Uniform>(&dist);
    const double half_span = uni ? uni->lambda : 8.0 * std::get<Gaussian>(dist).sigma;
    const int nodes = std::max(budget, 1001);
    const StepProfile profile = scan_hard_labels(predict, image, family,
                                                 -radius - half_span, radius + half_span, nodes);
    const int certified = hard_label(profile_smoothed_score(profile, dist, 0.0));
    for (int i = 0; i < budget; ++i) {
      const double t = budget == 1 ? 0.0 : -radius + 2.0 * radius * i / (budget - 1);
      if (hard_label(profile_smoothed_score(profile, dist, t)) != certified)
        return std::vector<double>{t};
    }
    return std::nullopt;
  }

  // Sampled mode: random points inside the ball, refined by a high-sample MC verdict.
  const CoordinateField grid = normalized_grid(image.width(), image.height());
  const int verdict_samples = 2000;
  const std::vector<double> origin(dim, 0.0);
  const int certified = mc_smoothed_verdict(predict, image, family, dist, grid, dim, origin,
                                            seed ^ 0xa77acULL, verdict_samples);
  const bool l1 = std::holds_alternative<Uniform>(dist);
  for (int trial = 0; trial < budget; ++trial) {
    const RandomStream stream(seed, static_cast<std::uint64_t>(trial));
    std::vector<double> params(dim);
    double norm = 0.0;
    for (int i = 0; i < dim; ++i) {
      params[i] = stream.normal(static_cast<std::uint64_t>(i));
      norm += l1 ? std::abs(params[i]) : params[i] * params[i];
    }
    if (!l1) norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    const double scale =
        radius * std::pow(stream.u01(2 * static_cast<std::uint64_t>(dim) + 7), 1.0 / dim) / norm;
    for (double& p : params) p *= scale;
    if (mc_smoothed_verdict(predict, image, family, dist, grid, dim, params,
                            seed ^ 0xa77acULL, verdict_samples) != certified)
      return params;
  }
  return std::nullopt;
}

}  // namespace drs
