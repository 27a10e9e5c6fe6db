#pragma once

// Entropy S_mu(f) = int f log f dmu, Fisher information I_mu(f) = int |grad f|^2 / f dmu
// and L^p(mu) norms, by quadrature on grids or in closed form for Gaussians.

#include "entroframe/density.hpp"

namespace entroframe {

enum class Method { ClosedForm, Quadrature };

std::string_view to_string(Method m) noexcept;

struct EntropyValue {
  double value = 0.0;
  ReferenceMeasure reference = ReferenceMeasure::Lebesgue;
  Method method = Method::Quadrature;
};

struct FisherValue {
  double value = 0.0;
  ReferenceMeasure reference = ReferenceMeasure::Lebesgue;
  Method method = Method::Quadrature;
  /// The Fisher values from the h and 2h gradients differ by more than 5%.
  bool nonsmooth_warning = false;
};

/// f log f is taken as 0 where f < 1e-300.
EntropyValue entropy(const GridDensity1D& f);
EntropyValue entropy(const GridDensity2D& f);
EntropyValue entropy(const GaussianDensity& f);

/// Fourth-order central differences, lower order at the two outermost points
/// on each side. The integrand is 0 where f < 1e-300.
FisherValue fisher(const GridDensity1D& f);
FisherValue fisher(const GridDensity2D& f);
FisherValue fisher(const GaussianDensity& f);

/// (int |f|^p dmu)^(1/p); p >= 1.
double lp_norm(const GridFunction1D& f, double p, ReferenceMeasure r);
double lp_norm(const GridDensity1D& f, double p);

/// Derivative samples used by fisher(); exposed for testing.
std::vector<double> grid_derivative(std::span<const double> f, double step);

}  // namespace entroframe
