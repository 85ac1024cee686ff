#include "drs/smoothing.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace drs {

void validate(const SmoothingDist& dist) {
  if (const auto* u = std::get_if<Uniform>(&dist)) {
    if (!(u->lambda > 0.0)) throw std::invalid_argument("Uniform: lambda must be > 0");
  } else {
    if (!(std::get<Gaussian>(dist).sigma > 0.0))
      throw std::invalid_argument("Gaussian: sigma must be > 0");
  }
}

LipschitzInfo lipschitz_norm(const SmoothingDist& dist) {
  validate(dist);
  if (const auto* u = std::get_if<Uniform>(&dist))
    return {NormKind::L1, 1.0 / (2.0 * u->lambda)};
  return {NormKind::L2, 1.0 / std::get<Gaussian>(dist).sigma};
}

namespace {

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t sample, std::uint64_t coord) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ mix64(sample + 0x632be59bd9b4e019ULL));
  h = mix64(h ^ mix64(coord + 0x9e6c63d0876a9a47ULL));
  return h;
}

}  // namespace

double RandomStream::u01(std::uint64_t c) const {
  return static_cast<double>(counter_hash(seed_, sample_, c) >> 11) * 0x1.0p-53;
}

double RandomStream::normal(std::uint64_t c) const {
  // Box-Muller on counters (2c, 2c+1); u1 shifted into (0,1].
  const double u1 = 1.0 - u01(2 * c);
  const double u2 = u01(2 * c + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<double> sample_perturbation(const SmoothingDist& dist, int dim,
                                        const RandomStream& stream) {
  if (dim < 1) throw std::invalid_argument("sample_perturbation: dim must be >= 1");
  validate(dist);
  std::vector<double> out(dim);
  if (const auto* u = std::get_if<Uniform>(&dist)) {
    for (int i = 0; i < dim; ++i)
      out[i] = (2.0 * stream.u01(static_cast<std::uint64_t>(i)) - 1.0) * u->lambda;
  } else {
    const double sigma = std::get<Gaussian>(dist).sigma;
    for (int i = 0; i < dim; ++i)
      out[i] = sigma * stream.normal(static_cast<std::uint64_t>(i));
  }
  return out;
}

double std_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("std_normal_quantile: p must be in (0,1)");
  double lo = -40.0, hi = 40.0;
  // Bisection to below 1e-13 interval width.
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (std_normal_cdf(mid) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace drs
