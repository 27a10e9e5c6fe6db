#pragma once

// Verifiers for the entropy, Fisher, convolution and hypercontractivity
// inequalities built on decompositions of the identity. Every check returns
// a report with both sides and slack = rhs - lhs; asserting is left to the
// caller.

#include <string>
#include <utility>
#include <vector>

#include "entroframe/density.hpp"
#include "entroframe/frame2.hpp"

namespace entroframe {

namespace tolerance {
inline constexpr double kEntropy = 1e-4;
inline constexpr double kFisher = 1e-3;
inline constexpr double kHyper = 1e-5;
/// Equality cases stack several numerical steps.
inline constexpr double kEqualityFactor = 10.0;
}  // namespace tolerance

struct InequalityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  /// Additive (entropy forms) or multiplicative (norm forms) constant.
  double constant = 0.0;
  double slack = 0.0;
  double tolerance = 0.0;
  std::string inputs_digest;
  /// False when the inequality is not claimed for these inputs (for example
  /// hypercontractivity past the critical angle); the report is still valid.
  bool contract_applies = true;

  bool violated() const { return contract_applies && slack < -tolerance; }
};

InequalityReport make_report(std::string name, double lhs, double rhs, double constant,
                             double tolerance, std::string digest, bool applies = true);

// --- subadditivity ------------------------------------------------------------

/// sum c_i S(f_(u_i)) <= S(f).
InequalityReport check_subadditivity(const Frame2& frame, const GridDensity2D& f);
InequalityReport check_subadditivity(const Frame2& frame, const GaussianDensity& f);

/// sum c_i I(f_(u_i)) <= I(f).
InequalityReport check_fisher_subadditivity(const Frame2& frame, const GridDensity2D& f);
InequalityReport check_fisher_subadditivity(const Frame2& frame, const GaussianDensity& f);

/// sum (1/p_i) S(f_(theta_i)) <= S(f) with the angles of the exponent triple.
InequalityReport check_main_entropy(const ExponentTriple& t, const GridDensity2D& f);
InequalityReport check_main_entropy(const ExponentTriple& t, const GaussianDensity& f);

/// || int g(x.u2) h(x.u3) dmu(y) ||_{L^{p1'}(mu(dx))} <= ||g||_{p2} ||h||_{p3}.
InequalityReport check_main_integral(const ExponentTriple& t, const GridFunction1D& g,
                                     const GridFunction1D& h, ReferenceMeasure r);

/// Equality data: |g_i|^{p_i} dmu = K_i exp(-lambda (t - a_i)^2) dt.
struct GaussianExtremizer {
  double a2 = 0.0;
  double a3 = 0.0;
  double lambda = 0.5;
  double k2 = 1.0;
  double k3 = 1.0;
};

/// g with |g|^p dmu = k exp(-lambda (t - a)^2) dt, sampled on the grid.
GridFunction1D extremizer_function(double a, double lambda, double k, double p, ReferenceMeasure r,
                                   const UniformGrid& grid);
std::pair<GridFunction1D, GridFunction1D> extremizer_pair(const GaussianExtremizer& e, double p2,
                                                          double p3, ReferenceMeasure r,
                                                          const UniformGrid& grid);

// --- Young --------------------------------------------------------------------

/// C_p C_q / C_r with C_t = sqrt(t^{1/t} / t'^{1/t'}).
double young_constant(double p, double q, double r);
/// log(C_p C_q / C_r) as the six-term sum of (1/t) log sqrt(t) terms.
double young_log_constant(double p, double q, double r);
/// The same constant from the frame angles:
/// (1 - 1/r') log|cot t3 - cot t2| + (1/p) log sin t2 + (1/q) log sin t3.
double young_log_constant_geometric(double p, double q, double r);

/// ||f * g||_r <= C ||f||_p ||g||_q (Lebesgue).
InequalityReport check_young_convolution(const GridFunction1D& f, const GridFunction1D& g, double p,
                                         double q, double r);
InequalityReport check_young_convolution(const GridDensity1D& f, const GridDensity1D& g, double p,
                                         double q, double r);

/// (1/r') S(X) + (1/p) S(X - Y) + (1/q) S(Y) <= S(X, Y) + log(C_p C_q / C_r).
InequalityReport check_young_entropy(const GridDensity2D& f, double p, double q, double r);
InequalityReport check_young_entropy(const GaussianDensity& f, double p, double q, double r);

/// Covariance of (X, Y) for which the entropic Young inequality is an
/// equality: the image of the identity under (W, Z) -> (X, Y).
Mat2 young_entropy_extremal_covariance(double p, double q, double r);

// --- Shannon ------------------------------------------------------------------

/// S((X + Y)/sqrt2) <= (S(X) + S(Y)) / 2 for independent X ~ g, Y ~ h.
InequalityReport check_shannon(const GridDensity1D& g, const GridDensity1D& h);
InequalityReport check_shannon(const GaussianDensity& g, const GaussianDensity& h);

/// First: I((X + Y)/sqrt2) <= (I(X) + I(Y)) / 2.
/// Second: I(X + Y) <= I(X) I(Y) / (I(X) + I(Y)).
std::pair<InequalityReport, InequalityReport> check_blachmann_stam(const GridDensity1D& g,
                                                                   const GridDensity1D& h);
std::pair<InequalityReport, InequalityReport> check_blachmann_stam(const GaussianDensity& g,
                                                                   const GaussianDensity& h);

struct ShannonTaylorPoint {
  double s = 0.0;
  /// c1 S(cos s X + sin s Y) + c2 S((X + Y)/sqrt2) + c3 S(sin s X + cos s Y).
  double lhs = 0.0;
  /// S(X) + S(Y).
  double rhs = 0.0;
  /// [rhs - lhs] / s - [4 S((X + Y)/sqrt2) - 2 S(X) - 2 S(Y)]; O(s).
  double residual = 0.0;
};

std::vector<ShannonTaylorPoint> shannon_taylor_check(const GridDensity1D& g, const GridDensity1D& h,
                                                     const std::vector<double>& s_values);
std::vector<ShannonTaylorPoint> shannon_taylor_check(const GaussianDensity& g,
                                                     const GaussianDensity& h,
                                                     const std::vector<double>& s_values);

// --- Gaussian measure ---------------------------------------------------------

/// q from 1/p + 1/r = 1 + 1/q, with the angles cos(theta) = sqrt((p-1)/(q-1))
/// and cos(xi) = -sqrt((r-1)/(q-1)).
struct HyperAngles {
  double q = 0.0;
  double theta = 0.0;
  double xi = 0.0;
};
HyperAngles hyper_angles(double p, double r);

/// || int f(cos t x + sin t y) g(cos xi x + sin xi y) dgamma(y) ||_{L^q(gamma)}
/// <= ||f||_{L^p(gamma)} ||g||_{L^r(gamma)}.
InequalityReport check_hyper_two_function(const GridFunction1D& f, const GridFunction1D& g, double p,
                                          double r);
/// Closed form for f = e^{alpha x}, g = e^{beta x}; always an equality.
InequalityReport hyper_two_function_exponential(double alpha, double beta, double p, double r);

/// ||P_theta f||_{L^q(gamma)} <= ||f||_{L^p(gamma)}; claimed only for
/// cos(theta) <= sqrt((p-1)/(q-1)).
InequalityReport check_hypercontractivity(const GridFunction1D& f, double p, double q, double theta);
/// Closed form for f = e^{a x}.
InequalityReport hypercontractivity_exponential(double a, double p, double q, double theta);
/// Critical angle arccos(sqrt((p-1)/(q-1))).
double hypercontractivity_threshold(double p, double q);

/// S_gamma(f) <= I_gamma(f) / 2.
InequalityReport check_log_sobolev(const GridDensity1D& f);
InequalityReport check_log_sobolev(const GaussianDensity& f);

/// S_gamma(P_theta f) <= cos^2(theta) S_gamma(f).
InequalityReport check_integrated_lsi(const GridDensity1D& f, double theta);
InequalityReport check_integrated_lsi(const GaussianDensity& f, double theta);

// --- Brascamp-Lieb -------------------------------------------------------------

/// int prod f_i(x.u_i)^{c_i} dmu_2 <= prod (int f_i dmu)^{c_i}; the 2D
/// quadrature runs on the grid of f1.
InequalityReport check_brascamp_lieb(const Frame2& frame, const GridFunction1D& f1,
                                     const GridFunction1D& f2, const GridFunction1D& f3,
                                     ReferenceMeasure r);

}  // namespace entroframe
