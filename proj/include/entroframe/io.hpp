#pragma once

// Density specifications, CSV density files and report serialization.
//
// 1D specs:  gauss:m,v   gaussmix:w,m,v;w,m,v;...   uniform:a,b   exp:a
//            csv:path    json:path    or an inline JSON object.
// 2D specs:  gauss2:s11,s12,s22   gauss2:m1,m2,s11,s12,s22   csv2d:path
//            json:path   or an inline JSON object.
//
// gauss, gaussmix and uniform name laws; the sampled density is taken with
// respect to the chosen reference measure. uniform is smoothed by a Gaussian
// of standard deviation 0.05. exp:a is e^{ax - a^2/2}, the density of
// N(a, 1) relative to the standard Gaussian, and needs that reference.
//
// Inline JSON objects take either {"type": ...} with the kinds above, or
// {"family": "gaussian" | "gaussian_mixture" | "uniform", "reference": ...}
// with mean/variance, components [{weight, mean, variance}] (weights summing
// to 1), or a/b.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "entroframe/density.hpp"
#include "entroframe/inequality.hpp"

namespace entroframe {

inline constexpr double kUniformSmoothing = 0.05;

GridDensity1D parse_density(std::string_view spec, ReferenceMeasure r, const UniformGrid& grid);
GridDensity2D parse_density_2d(std::string_view spec, ReferenceMeasure r, const UniformGrid& grid);

/// Header "x,f"; uniformly spaced x; values relative to the reference.
GridDensity1D read_density_csv(const std::string& path, ReferenceMeasure r);
/// Header "x,y,f"; a full square grid in any row order.
GridDensity2D read_density_csv_2d(const std::string& path, ReferenceMeasure r);

/// Comma-separated reals; throws Parse if the count differs from expected
/// (0 accepts any count).
std::vector<double> parse_reals(std::string_view text, std::size_t expected = 0);

/// {name, lhs, rhs, constant, slack, tolerance, inputs_digest} in that order.
std::string report_to_json(const InequalityReport& r);
InequalityReport report_from_json(std::string_view json);

struct SweepRow {
  double param = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
};

/// Header param,lhs,rhs,slack; shortest round-trip formatting.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace entroframe
