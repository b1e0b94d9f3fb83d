#include "mvsc/weighting.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mvsc {

double WeightingScheme::conjugacy_residual(double ell, std::span<const double> grid) const {
  if (grid.empty()) throw std::invalid_argument("conjugacy_residual: empty grid");
  double best = std::numeric_limits<double>::infinity();
  for (double p : grid) {
    if (p <= 0.0) throw std::invalid_argument("conjugacy_residual: grid entries must be > 0");
    best = std::min(best, p * ell + psi(p));
  }
  return std::abs(best - latent_loss(ell));
}

WeightRegularizer::WeightRegularizer(double gamma) : gamma_(gamma) {
  if (gamma < 0.0) throw std::invalid_argument("gamma must be nonnegative");
}

double WeightRegularizer::psi(double p) const {
  if (p <= 0.0) throw std::invalid_argument("psi: p must be > 0");
  return gamma_ * p + 1.0 / p - 2.0;
}

double WeightRegularizer::latent_loss(double ell) const {
  if (ell < 0.0) throw std::invalid_argument("latent_loss: ell must be >= 0");
  return 2.0 * (std::sqrt(gamma_ + ell) - 1.0);
}

double WeightRegularizer::minimizer(double ell) const {
  if (ell < 0.0) throw std::invalid_argument("minimizer: ell must be >= 0");
  if (gamma_ + ell == 0.0)
    throw std::invalid_argument("minimizer: gamma + ell must be > 0");
  return 1.0 / std::sqrt(gamma_ + ell);
}

}  // namespace mvsc
