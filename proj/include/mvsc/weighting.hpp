#pragma once

#include <span>

namespace mvsc {

/**
 * @brief A weight regularizer psi together with the latent loss and minimizer
 *        functions it induces through convex conjugacy.
 *
 * The trio is tied by phi(l) = min_{p >= 0} { p*l + psi(p) } with sigma(l)
 * the argmin; sigma maps a sample's reconstruction loss to its confidence
 * weight. Implementations are pure functions of immutable state.
 */
class WeightingScheme {
 public:
  virtual ~WeightingScheme() = default;

  /// The regularizer psi(p); domain p > 0.
  virtual double psi(double p) const = 0;

  /// The latent loss phi(ell); domain ell >= 0.
  virtual double latent_loss(double ell) const = 0;

  /// The minimizer sigma(ell) = argmin_{p > 0} { p*ell + psi(p) }.
  virtual double minimizer(double ell) const = 0;

  /// |min over grid of (p*ell + psi(p)) - latent_loss(ell)|. The grid must be
  /// non-empty with positive entries and should bracket minimizer(ell).
  double conjugacy_residual(double ell, std::span<const double> grid) const;
};

/// The shipped instance: psi(p) = gamma*p + 1/p - 2, giving
/// phi(l) = 2(sqrt(gamma + l) - 1) and sigma(l) = 1/sqrt(gamma + l).
class WeightRegularizer final : public WeightingScheme {
 public:
  explicit WeightRegularizer(double gamma = 1e-5);

  double gamma() const { return gamma_; }
  double psi(double p) const override;
  double latent_loss(double ell) const override;
  double minimizer(double ell) const override;

 private:
  double gamma_;
};

}  // namespace mvsc
