#pragma once

// Heat semigroup e^{t Laplacian} for Lebesgue densities and the
// Ornstein-Uhlenbeck semigroup e^{tL}, L = Laplacian - x.grad, for densities
// relative to the standard Gaussian. P_theta is the OU semigroup at
// cos(theta) = e^{-t}.

#include <functional>
#include <optional>

#include "entroframe/density.hpp"

namespace entroframe {

/// Flow time t >= 0, or equivalently theta = arccos(e^{-t}) in [0, pi/2].
class FlowTime {
 public:
  explicit FlowTime(double t = 0.0);
  static FlowTime from_theta(double theta);

  double t() const noexcept { return t_; }
  double theta() const;
  /// e^{-t} = cos(theta).
  double contraction() const;

 private:
  double t_;
};

/// Convolution with the Gaussian of variance 2t, truncated at 8 standard
/// deviations and normalized to unit sum. The result lives on the input grid.
/// Without an explicit method, long kernels go through the FFT.
GridDensity1D heat_flow(const GridDensity1D& f, FlowTime t,
                        std::optional<ConvolutionMethod> method = std::nullopt);
GridDensity2D heat_flow(const GridDensity2D& f, FlowTime t,
                        std::optional<ConvolutionMethod> method = std::nullopt);

/// Mehler form (e^{tL} f)(x) = int f(e^{-t} x + sqrt(1 - e^{-2t}) y) dgamma(y),
/// evaluated as a Gaussian-kernel sum over the grid samples with the constant
/// extension beyond the grid. Very short times use Gauss-Hermite quadrature.
GridFunction1D ou_flow(const GridFunction1D& f, FlowTime t);
GridDensity1D ou_flow(const GridDensity1D& f, FlowTime t);
GridDensity2D ou_flow(const GridDensity2D& f, FlowTime t);

/// P_theta f(x) = int f(cos(theta) x + sin(theta) y) dgamma(y) by 64-node
/// Gauss-Hermite quadrature; grid samples are interpolated with cubics.
GridFunction1D hermite_p_theta(const GridFunction1D& f, double theta);
GridFunction1D hermite_p_theta(const std::function<double(double)>& f, double theta,
                               const UniformGrid& grid);

struct DeBruijnResult {
  double dsdt = 0.0;      ///< central difference of S along the flow
  double fisher = 0.0;    ///< I at time t
  double residual = 0.0;  ///< |dsdt + fisher|
};

/// Heat flow for Lebesgue densities, OU flow for Gaussian-reference ones.
/// Requires t >= h > 0.
DeBruijnResult de_bruijn_check(const GridDensity1D& f, FlowTime t, double h = 1e-3);
DeBruijnResult de_bruijn_check(const GaussianDensity& f, FlowTime t, double h = 1e-3);

/// Closed-form flows of a Gaussian law.
GaussianDensity heat_flow(const GaussianDensity& f, FlowTime t);
GaussianDensity ou_flow(const GaussianDensity& f, FlowTime t);

/// sup_x |marginal(flow(f, t), d) - flow(marginal(f, d), t)| on the axis grid.
double stability_check(const GridDensity2D& f, Direction d, FlowTime t);

}  // namespace entroframe
