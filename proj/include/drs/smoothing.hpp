#ifndef DRS_SMOOTHING_HPP
#define DRS_SMOOTHING_HPP

#include <cstdint>
#include <variant>
#include <vector>

namespace drs {

struct Uniform { double lambda = 1.0; };    // U[-lambda, lambda]
struct Gaussian { double sigma = 1.0; };    // N(0, sigma^2)

using SmoothingDist = std::variant<Uniform, Gaussian>;

void validate(const SmoothingDist& dist);

enum class NormKind { L1, L2 };

struct LipschitzInfo {
  NormKind norm;
  double constant;  // on the raw score (uniform) or its probit (gaussian)
};

LipschitzInfo lipschitz_norm(const SmoothingDist& dist);

// Counter-based stream: every draw is a pure function of
// (seed, sample index, coordinate), so parallel sampling is order-independent.
class RandomStream {
public:
  RandomStream(std::uint64_t seed, std::uint64_t sample_index)
      : seed_(seed), sample_(sample_index) {}

  // Uniform in [0,1) for coordinate counter c.
  double u01(std::uint64_t c) const;
  // Standard normal via Box-Muller on counters (2c, 2c+1).
  double normal(std::uint64_t c) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t sample_index() const { return sample_; }

private:
  std::uint64_t seed_;
  std::uint64_t sample_;
};

std::vector<double> sample_perturbation(const SmoothingDist& dist, int dim,
                                        const RandomStream& stream);

// Phi^{-1} by bisection on the erfc-based normal CDF; |Phi(result)-p| <= 1e-12.
double std_normal_quantile(double p);
// Standard normal CDF.
double std_normal_cdf(double x);

}  // namespace drs

#endif
