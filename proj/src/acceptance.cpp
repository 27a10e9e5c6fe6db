#include "entroframe/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "entroframe/error.hpp"
#include "entroframe/functional.hpp"
#include "entroframe/inequality.hpp"
#include "entroframe/semigroup.hpp"

namespace entroframe {

namespace {

using Clock = std::chrono::steady_clock;
using R = ReferenceMeasure;
constexpr double kPi = std::numbers::pi;
constexpr double kRuntimeBudget = 60.0;

struct Context {
  UniformGrid grid;
  double scale = 1.0;  // grid-dependent tolerance multiplier
};

struct Outcome {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string law(double m, double v) { return fmt::format("N({:.3g},{:.3g})", m, v); }

// Mixture of two or three Gaussians with moderate spread.
std::function<double(double)> random_mixture(std::mt19937_64& rng, double mean_range, double vmin, double vmax) {
  std::uniform_int_distribution<int> count(2, 3);
  std::uniform_real_distribution<double> w(0.2, 1.0), m(-mean_range, mean_range), v(vmin, vmax);
  struct C {
    double w, m, v;
  };
  std::vector<C> comps(static_cast<std::size_t>(count(rng)));
  double total = 0.0;
  for (auto& c : comps) {
    c = {w(rng), m(rng), v(rng)};
    total += c.w;
  }
  for (auto& c : comps) c.w /= total;
  return [comps](double x) {
    double s = 0.0;
    for (const auto& c : comps) s += c.w * std::exp(-0.5 * (x - c.m) * (x - c.m) / c.v) / std::sqrt(2.0 * kPi * c.v);
    return std::log(s);
  };
}

// --- 1, 2: frames ---------------------------------------------------------

Outcome frame_round_trip(const Context&) {
  Outcome o;
  std::mt19937_64 rng(20240501);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  double worst_w = 0.0, worst_res = 0.0;
  int done = 0;
  const auto start = Clock::now();
  while (done < 100) {
    const double c1 = u(rng), c2 = u(rng), c3 = 2.0 - c1 - c2;
    if (!(c3 > 0.05 && c3 < 0.95)) continue;
    const Frame2 a = directions_from_weights(c1, c2, c3);
    const Frame2 b = weights_from_directions(a.direction(0), a.direction(1), a.direction(2));
    const std::array<double, 3> c{c1, c2, c3};
    for (int i = 0; i < 3; ++i) worst_w = std::max(worst_w, std::abs(b.weight(i) - c[static_cast<std::size_t>(i)]));
    worst_res = std::max({worst_res, a.residual(), b.residual()});
    ++done;
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  o.require(worst_w <= 1e-10, fmt::format("weight error {:.2e} > 1e-10", worst_w));
  o.require(worst_res <= 1e-12, fmt::format("residual {:.2e} > 1e-12", worst_res));
  o.require(secs < 1.0, fmt::format("took {:.2f} s", secs));
  o.detail = o.passed ? fmt::format("max weight error {:.2e}, max residual {:.2e}", worst_w, worst_res) : o.detail;
  return o;
}

Outcome mercedes(const Context&) {
  Outcome o;
  const Frame2 f = weights_from_directions(Direction(0.0), Direction(kPi / 3.0), Direction(2.0 * kPi / 3.0));
  double err = 0.0;
  for (int i = 0; i < 3; ++i) err = std::max(err, std::abs(f.weight(i) - 2.0 / 3.0));
  o.require(err <= 1e-13, fmt::format("weight error {:.2e} > 1e-13", err));
  if (o.passed) o.detail = fmt::format("max weight error {:.2e}", err);
  return o;
}

// --- 3, 4: Young ----------------------------------------------------------

Outcome young_constant_criterion(const Context&) {
  Outcome o;
  const double c = young_constant(4.0 / 3.0, 4.0 / 3.0, 2.0);
  const double expect = std::pow(4.0 / 3.0, 0.75) * std::pow(4.0, -0.25);
  o.require(std::abs(c - expect) <= 1e-12, fmt::format("constant {:.15f} vs {:.15f}", c, expect));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  double worst = 0.0;
  int done = 0;
  while (done < 20) {
    const double ip = u(rng), iq = u(rng);
    const double ir = ip + iq - 1.0;
    if (!(ir > 0.02)) continue;
    const double p = 1.0 / ip, q = 1.0 / iq, r = 1.0 / ir;
    const double logc = std::log(young_constant(p, q, r));
    worst = std::max({worst, std::abs(young_log_constant(p, q, r) - logc),
                      std::abs(young_log_constant_geometric(p, q, r) - logc)});
    ++done;
  }
  o.require(worst <= 1e-12, fmt::format("D mismatch {:.2e} > 1e-12", worst));
  if (o.passed) o.detail = fmt::format("C = {:.12f}, max D mismatch {:.2e}", c, worst);
  return o;
}

Outcome young_equality(const Context& ctx) {
  Outcome o;
  const auto start = Clock::now();
  const GridDensity1D f = GaussianDensity::make1d(R::Lebesgue, 0.0, 1.0).to_grid(ctx.grid);
  double best = INFINITY, best_sigma = 0.0;
  for (int k = 0; k <= 40; ++k) {
    const double sigma = std::pow(2.0, -1.0 + k / 20.0);
    const GridDensity1D g = GaussianDensity::make1d(R::Lebesgue, 0.0, sigma * sigma).to_grid(ctx.grid);
    const auto rep = check_young_convolution(f, g, 4.0 / 3.0, 4.0 / 3.0, 2.0);
    const double rel = std::abs(rep.slack) / rep.rhs;
    if (rel < best) {
      best = rel;
      best_sigma = sigma;
    }
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  o.require(best <= 1e-3 * ctx.scale, fmt::format("min |slack|/rhs {:.2e}", best));
  o.require(secs < 30.0, fmt::format("took {:.1f} s", secs));
  if (o.passed) o.detail = fmt::format("min |slack|/rhs {:.2e} at sigma {:.4f}", best, best_sigma);
  return o;
}

// --- 5, 6: Shannon --------------------------------------------------------

Outcome shannon(const Context& ctx) {
  Outcome o;
  std::mt19937_64 rng(11);
  double worst = INFINITY;
  for (int k = 0; k < 50; ++k) {
    const auto g = sample_density(R::Lebesgue, ctx.grid, random_mixture(rng, 2.5, 0.2, 2.0));
    const auto h = sample_density(R::Lebesgue, ctx.grid, random_mixture(rng, 2.5, 0.2, 2.0));
    worst = std::min(worst, check_shannon(g, h).slack);
  }
  o.require(worst >= -1e-4 * ctx.scale, fmt::format("mixture slack {:.2e}", worst));
  const auto n01 = GaussianDensity::make1d(R::Lebesgue, 0.0, 1.0);
  const auto n04 = GaussianDensity::make1d(R::Lebesgue, 0.0, 4.0);
  const double iid = check_shannon(n01.to_grid(ctx.grid), n01.to_grid(ctx.grid)).slack;
  o.require(std::abs(iid) <= 1e-5 * ctx.scale, fmt::format("iid slack {:.2e}", iid));
  const double expect = 0.5 * std::log(1.25);
  const double grid_slack = check_shannon(n01.to_grid(ctx.grid), n04.to_grid(ctx.grid)).slack;
  const double closed_slack = check_shannon(n01, n04).slack;
  o.require(std::abs(grid_slack - expect) <= 1e-4 * ctx.scale,
            fmt::format("grid slack {:.6f} vs {:.6f}", grid_slack, expect));
  o.require(std::abs(closed_slack - expect) <= 1e-12, fmt::format("closed slack {:.8f}", closed_slack));
  if (o.passed) {
    o.detail = fmt::format("min mixture slack {:.2e}, iid {:.1e}, {} vs {}: {:.6f}", worst, iid, law(0, 1),
                           law(0, 4), grid_slack);
  }
  return o;
}

Outcome shannon_limit(const Context& ctx) {
  Outcome o;
  for (double s : {-1e-2, -1e-3}) {
    const Frame2 f = shannon_limit_frame(s);
    const std::array<double, 3> approx{1.0 + 2.0 * s, -4.0 * s, 1.0 + 2.0 * s};
    for (int i = 0; i < 3; ++i) {
      const double err = std::abs(f.weight(i) - approx[static_cast<std::size_t>(i)]);
      o.require(err <= 5.0 * s * s, fmt::format("s={} c{} error {:.2e} > 5s^2 = {:.1e}", s, i + 1, err, 5.0 * s * s));
    }
  }
  const std::vector<double> svals{-1e-2, -3e-3, -1e-3};
  const std::vector<std::pair<double, double>> corpus{{1.0, 4.0}, {0.5, 2.0}, {1.0, 1.5}, {3.0, 0.7}};
  // rho(s) = O(s): the log-log slope of |rho| against |s| should be 1.
  auto slope = [](const std::vector<ShannonTaylorPoint>& pts) {
    return std::log(std::abs(pts.front().residual / pts.back().residual)) /
           std::log(std::abs(pts.front().s / pts.back().s));
  };
  double worst_slope = 1.0;
  for (const auto& [va, vb] : corpus) {
    const auto pts = shannon_taylor_check(GaussianDensity::make1d(R::Lebesgue, 0.0, va),
                                          GaussianDensity::make1d(R::Lebesgue, 0.3, vb), svals);
    for (std::size_t k = 1; k < pts.size(); ++k) {
      o.require(std::abs(pts[k].residual) < std::abs(pts[k - 1].residual),
                fmt::format("rho not decreasing for variances ({}, {})", va, vb));
    }
    const double sl = slope(pts);
    if (std::abs(sl - 1.0) > std::abs(worst_slope - 1.0)) worst_slope = sl;
  }
  o.require(std::abs(worst_slope - 1.0) <= 0.1, fmt::format("log-log slope of rho {:.3f}", worst_slope));
  // The same on the grid for one pair.
  const auto grid_pts = shannon_taylor_check(GaussianDensity::make1d(R::Lebesgue, 0.0, 1.0).to_grid(ctx.grid),
                                             GaussianDensity::make1d(R::Lebesgue, 0.0, 4.0).to_grid(ctx.grid), svals);
  const double grid_slope = slope(grid_pts);
  o.require(std::abs(grid_slope - 1.0) <= 0.1 * ctx.scale, fmt::format("grid log-log slope {:.3f}", grid_slope));
  if (o.passed) o.detail = fmt::format("rho slope {:.3f} (closed form), {:.3f} (grid)", worst_slope, grid_slope);
  return o;
}

// --- 7, 8: Gaussian measure -----------------------------------------------

Outcome hyper_sharpness(const Context& ctx) {
  Outcome o;
  const double p = 2.0, q = 4.0;
  auto slack = [&](double theta) { return hypercontractivity_exponential(1.0, p, q, theta).slack; };
  // Slack is negative for small theta and positive past the threshold.
  double lo = 0.05, hi = kPi / 2.0 - 0.05;
  o.require(slack(lo) < 0.0 && slack(hi) > 0.0, "no sign change in (0, pi/2)");
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    (slack(mid) < 0.0 ? lo : hi) = mid;
  }
  const double expect = std::acos(std::sqrt(1.0 / 3.0));
  o.require(std::abs(lo - expect) <= 1e-3, fmt::format("sign change at {:.6f}, expected {:.6f}", lo, expect));
  const GridFunction1D f = GridFunction1D::sample(ctx.grid, [](double x) { return std::exp(x); }, Extension::Clamp);
  double worst = 0.0;
  for (double theta : {0.3, 0.7, expect, 1.2}) {
    const auto a = check_hypercontractivity(f, p, q, theta);
    const auto b = hypercontractivity_exponential(1.0, p, q, theta);
    worst = std::max({worst, std::abs(a.lhs - b.lhs) / b.lhs, std::abs(a.rhs - b.rhs) / b.rhs});
  }
  o.require(worst <= 1e-6, fmt::format("quadrature vs closed form {:.2e}", worst));
  if (o.passed) o.detail = fmt::format("sign change at {:.6f} (expected {:.6f}), quadrature error {:.1e}", lo, expect, worst);
  return o;
}

Outcome log_sobolev(const Context& ctx) {
  Outcome o;
  double worst = 0.0;
  for (double a : {0.5, 1.0, 2.0}) {
    const auto f = GaussianDensity::make1d(R::StandardGaussian, a, 1.0).to_grid(ctx.grid);
    worst = std::max({worst, std::abs(entropy(f).value - 0.5 * a * a), std::abs(fisher(f).value - a * a)});
  }
  o.require(worst <= 1e-5 * ctx.scale, fmt::format("exponential S/I error {:.2e}", worst));
  std::mt19937_64 rng(23);
  double min_slack = INFINITY;
  for (int k = 0; k < 50; ++k) {
    const auto f = sample_density(R::StandardGaussian, ctx.grid, random_mixture(rng, 1.5, 0.3, 1.8));
    min_slack = std::min(min_slack, check_log_sobolev(f).slack);
  }
  o.require(min_slack >= -1e-5 * ctx.scale, fmt::format("mixture slack {:.2e}", min_slack));
  if (o.passed) o.detail = fmt::format("exponential error {:.1e}, min mixture slack {:.2e}", worst, min_slack);
  return o;
}

// --- 9: flows -------------------------------------------------------------

Outcome de_bruijn(const Context& ctx) {
  Outcome o;
  double closed = 0.0, gauss = 0.0, mix = 0.0, stab = 0.0;
  std::mt19937_64 rng(31);
  std::vector<GridDensity1D> mixtures;
  for (int k = 0; k < 3; ++k) mixtures.push_back(sample_density(R::Lebesgue, ctx.grid, random_mixture(rng, 2.0, 0.2, 1.5)));
  for (double t : {0.1, 0.5}) {
    for (double v : {1.0, 2.0, 4.0}) {
      const auto g = GaussianDensity::make1d(R::Lebesgue, 0.0, v);
      closed = std::max(closed, de_bruijn_check(g, FlowTime(t)).residual);
      gauss = std::max(gauss, de_bruijn_check(g.to_grid(ctx.grid), FlowTime(t)).residual);
    }
    for (const auto& m : mixtures) mix = std::max(mix, de_bruijn_check(m, FlowTime(t)).residual);
  }
  o.require(closed <= 1e-6, fmt::format("closed-form residual {:.2e}", closed));
  o.require(gauss <= 1e-3 * ctx.scale, fmt::format("grid Gaussian residual {:.2e}", gauss));
  o.require(mix <= 1e-3 * ctx.scale, fmt::format("mixture residual {:.2e}", mix));

  const std::vector<std::tuple<Mat2, double, double>> corpus{
      {{2.0, 1.0, 1.0, 2.0}, kPi / 3.0, 0.5},
      {{1.0, 0.5, 0.5, 2.0}, 0.4, 0.3},
      {{1.5, -0.6, -0.6, 1.0}, 2.2, 0.5},
  };
  for (const auto& [cov, theta, t] : corpus) {
    const auto f = GaussianDensity::make2d(R::Lebesgue, {0.0, 0.0}, cov).to_grid_2d(ctx.grid);
    stab = std::max(stab, stability_check(f, Direction(theta), FlowTime(t)));
  }
  o.require(stab <= 1e-4 * ctx.scale, fmt::format("stability error {:.2e}", stab));
  if (o.passed) {
    o.detail = fmt::format("residuals: closed {:.1e}, grid Gaussian {:.1e}, mixtures {:.1e}; stability {:.1e}", closed,
                           gauss, mix, stab);
  }
  return o;
}

// --- 10: subadditivity ----------------------------------------------------

Outcome subadditivity(const Context& ctx) {
  Outcome o;
  const auto g = GaussianDensity::make2d(R::Lebesgue, {0.0, 0.0}, Mat2::identity());
  const auto f = g.to_grid_2d(ctx.grid);
  std::vector<Frame2> frames{mercedes_frame(), directions_from_weights(0.9, 0.6, 0.5),
                             directions_from_weights(0.3, 0.8, 0.9), young_frame(4.0 / 3.0, 4.0 / 3.0, 2.0)};
  double worst_s = 0.0, worst_i = 0.0;
  for (const auto& frame : frames) {
    worst_s = std::max(worst_s, std::abs(check_subadditivity(frame, f).slack));
    worst_i = std::max(worst_i, std::abs(check_fisher_subadditivity(frame, f).slack));
  }
  o.require(worst_s <= 1e-4 * ctx.scale, fmt::format("entropy equality slack {:.2e}", worst_s));
  o.require(worst_i <= 1e-4 * ctx.scale, fmt::format("Fisher equality slack {:.2e}", worst_i));
  const auto aniso = GaussianDensity::make2d(R::Lebesgue, {0.0, 0.0}, {4.0, 0.0, 0.0, 1.0});
  const double closed = check_subadditivity(mercedes_frame(), aniso).slack;
  const double closed_i = check_fisher_subadditivity(mercedes_frame(), aniso).slack;
  const double grid = check_subadditivity(mercedes_frame(), aniso.to_grid_2d(ctx.grid)).slack;
  o.require(closed > 1e-3, fmt::format("anisotropic slack {:.2e}", closed));
  o.require(closed_i > 1e-3, fmt::format("anisotropic Fisher slack {:.2e}", closed_i));
  o.require(grid > 1e-3, fmt::format("anisotropic grid slack {:.2e}", grid));
  if (o.passed) {
    o.detail = fmt::format("equality slack {:.1e} (entropy), {:.1e} (Fisher); diag(4,1): {:.6f} closed, {:.6f} grid",
                           worst_s, worst_i, closed, grid);
  }
  return o;
}

struct Criterion {
  int id;
  const char* group;
  const char* title;
  Outcome (*run)(const Context&);
};

const std::array<Criterion, 10> kCriteria{{
    {1, "frames", "frame round-trip", frame_round_trip},
    {2, "frames", "Mercedes identity", mercedes},
    {3, "young", "sharp Young constant", young_constant_criterion},
    {4, "young", "Young equality attainment", young_equality},
    {5, "shannon", "Shannon inequality", shannon},
    {6, "shannon", "Shannon limit", shannon_limit},
    {7, "hyper", "hypercontractivity sharpness", hyper_sharpness},
    {8, "hyper", "log-Sobolev equality", log_sobolev},
    {9, "flow", "de Bruijn and stability", de_bruijn},
    {10, "subadditivity", "subadditivity equality", subadditivity},
}};

}  // namespace

const std::vector<std::string>& acceptance_groups() {
  static const std::vector<std::string> groups{"frames", "young", "shannon", "hyper", "flow", "subadditivity"};
  return groups;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  if (options.only && std::find(acceptance_groups().begin(), acceptance_groups().end(), *options.only) ==
                          acceptance_groups().end()) {
    throw Error(ErrorKind::InvalidArgument, fmt::format("unknown group '{}'", *options.only));
  }
  Context ctx{UniformGrid::symmetric(options.half_width, options.grid_n), 1.0};
  const double ratio = 2048.0 / static_cast<double>(options.grid_n - 1);
  ctx.scale = std::max(1.0, ratio * ratio);

  std::vector<CriterionResult> out;
  const auto start = Clock::now();
  for (const auto& c : kCriteria) {
    if (options.only && *options.only != c.group) continue;
    CriterionResult r{c.id, c.group, c.title, false, {}, 0.0};
    const auto t0 = Clock::now();
    try {
      const Outcome o = c.run(ctx);
      r.passed = o.passed;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.detail = fmt::format("error: {}", e.what());
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    out.push_back(std::move(r));
  }
  const double total = std::chrono::duration<double>(Clock::now() - start).count();
  out.push_back({11, "runtime", "selftest runtime", total < kRuntimeBudget,
                 fmt::format("{:.1f} s for {} criteria (budget {:.0f} s)", total, out.size(), kRuntimeBudget), total});
  return out;
}

std::string format_result(const CriterionResult& r) {
  return fmt::format("[{}] criterion {:>2} {:<30} {:6.2f}s  {}", r.passed ? "PASS" : "FAIL", r.id, r.title,
                     r.seconds, r.detail);
}

}  // namespace entroframe
