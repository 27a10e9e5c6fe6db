// Command-line front end: frames, inequality checks, parameter sweeps and the
// built-in acceptance run.
//
// Exit codes: 0 pass, 1 inequality violated beyond tolerance, 2 input error.

#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "entroframe/acceptance.hpp"
#include "entroframe/error.hpp"
#include "entroframe/frame2.hpp"
#include "entroframe/inequality.hpp"
#include "entroframe/io.hpp"

namespace {

using namespace entroframe;

constexpr int kExitPass = 0;
constexpr int kExitViolated = 1;
constexpr int kExitInput = 2;

// Decimal inputs such as 0.6667 or 1.3333 are accepted when they are within
// this distance of satisfying a constraint.
constexpr double kSnapTol = 1e-3;
constexpr double kExactTol = 1e-9;

const std::vector<std::string> kInequalities{
    "subadditivity", "fisher", "main-entropy", "main-integral", "young-conv", "young-entropy", "shannon",
    "blachmann-stam", "hyper", "hyper2", "lsi", "lsi-integrated", "brascamp-lieb"};

std::size_t default_grid_n() {
  if (const char* env = std::getenv("ENTROFRAME_GRID_N")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::InvalidArgument, fmt::format("ENTROFRAME_GRID_N='{}' is not a positive integer", env));
  }
  return 2049;
}

void note(const std::string& msg) { std::cerr << "note: " << msg << "\n"; }

// Comma-separated numbers for the frame options; each may also be a fraction a/b.
std::vector<double> parse_triple(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, end - start);
    const std::size_t slash = item.find('/');
    if (slash == std::string::npos) {
      out.push_back(parse_reals(item, 1)[0]);
    } else {
      const double den = parse_reals(item.substr(slash + 1), 1)[0];
      if (den == 0.0) throw Error(ErrorKind::Parse, fmt::format("'{}' divides by zero", item));
      out.push_back(parse_reals(item.substr(0, slash), 1)[0] / den);
    }
    start = end + 1;
  }
  if (out.size() != 3) throw Error(ErrorKind::Parse, fmt::format("expected 3 numbers in '{}', got {}", text, out.size()));
  return out;
}

// Nearest fraction with denominator <= 12, or the value itself.
double nearest_fraction(double v) {
  double best = v, err = INFINITY;
  for (int d = 1; d <= 12; ++d) {
    const double n = std::round(v * d);
    const double e = std::abs(v - n / d);
    if (e < err) {
      err = e;
      best = n / d;
    }
  }
  return err <= 5e-4 ? best : v;
}

// Values whose sum should be `target`: exact inputs pass through; otherwise
// try nearby simple fractions, then a proportional rescale.
std::vector<double> snap_sum(std::vector<double> v, double target, const char* what,
                             const std::function<double(double)>& term = [](double x) { return x; },
                             const std::function<double(double)>& inverse = [](double x) { return x; }) {
  auto total = [&](const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += term(x);
    return s;
  };
  const double raw = total(v);
  if (std::abs(raw - target) <= kExactTol) return v;
  std::vector<double> snapped = v;
  for (double& x : snapped) x = nearest_fraction(x);
  if (std::abs(total(snapped) - target) <= 1e-12) {
    note(fmt::format("{} read as simple fractions", what));
    return snapped;
  }
  if (std::abs(raw - target) <= kSnapTol) {
    note(fmt::format("{} rescaled to satisfy the constraint (off by {:.2e})", what, raw - target));
    for (double& x : v) x = inverse(term(x) * target / raw);
  }
  return v;
}

std::vector<double> snap_weights(std::vector<double> c) { return snap_sum(std::move(c), 2.0, "weights"); }

std::vector<double> snap_exponents(std::vector<double> p) {
  return snap_sum(std::move(p), 2.0, "exponents", [](double x) { return 1.0 / x; }, [](double x) { return 1.0 / x; });
}

// (p, q, r) with 1/p + 1/q = 1 + 1/r.
std::array<double, 3> snap_young(double p, double q, double r) {
  const double mismatch = 1.0 / p + 1.0 / q - 1.0 - 1.0 / r;
  if (std::abs(mismatch) <= kExactTol) return {p, q, r};
  const double sp = nearest_fraction(p), sq = nearest_fraction(q), sr = nearest_fraction(r);
  if (std::abs(1.0 / sp + 1.0 / sq - 1.0 - 1.0 / sr) <= 1e-12) {
    note("Young exponents read as simple fractions");
    return {sp, sq, sr};
  }
  if (std::abs(mismatch) <= kSnapTol && 1.0 / p + 1.0 / q > 1.0) {
    note(fmt::format("r recomputed from p and q (off by {:.2e})", mismatch));
    return {p, q, 1.0 / (1.0 / p + 1.0 / q - 1.0)};
  }
  return {p, q, r};
}

struct FrameArgs {
  std::optional<std::string> angles, weights, exponents, young;

  int count() const { return !!angles + !!weights + !!exponents + !!young; }
};

Frame2 build_frame(const FrameArgs& a, bool required) {
  if (a.count() > 1) {
    throw Error(ErrorKind::InvalidArgument, "give exactly one of --angles, --weights, --exponents, --young");
  }
  if (a.angles) {
    const auto t = parse_triple(*a.angles);
    return weights_from_directions(Direction(t[0]), Direction(t[1]), Direction(t[2]));
  }
  if (a.weights) {
    const auto c = snap_weights(parse_triple(*a.weights));
    return directions_from_weights(c[0], c[1], c[2]);
  }
  if (a.exponents) {
    const auto p = snap_exponents(parse_triple(*a.exponents));
    return angles_from_exponents(ExponentTriple::make(p[0], p[1], p[2]));
  }
  if (a.young) {
    const auto v = parse_triple(*a.young);
    const auto y = snap_young(v[0], v[1], v[2]);
    return young_frame(y[0], y[1], y[2]);
  }
  if (required) {
    throw Error(ErrorKind::InvalidArgument, "give one of --angles, --weights, --exponents, --young");
  }
  return mercedes_frame();
}

struct CheckArgs {
  std::string inequality;
  FrameArgs frame;
  std::optional<std::string> f, g, h, x, y, f1, f2, f3, ref, out;
  std::optional<double> p, q, r, theta;
  double half_width = 10.0;
  std::optional<std::size_t> n;
  bool harmonic = false;

  // sweep only
  std::string param;
  std::string range;
  int steps = 0;
  bool log_spacing = false;
};

UniformGrid grid_of(const CheckArgs& a) { return UniformGrid::symmetric(a.half_width, a.n.value_or(default_grid_n())); }

ReferenceMeasure reference_of(const CheckArgs& a) {
  if (a.ref) {
    if (*a.ref == "lebesgue") return ReferenceMeasure::Lebesgue;
    if (*a.ref == "gaussian" || *a.ref == "gamma") return ReferenceMeasure::StandardGaussian;
    throw Error(ErrorKind::InvalidArgument, fmt::format("--ref must be lebesgue or gaussian, got '{}'", *a.ref));
  }
  const bool gaussian = a.inequality == "hyper" || a.inequality == "hyper2" || a.inequality == "lsi" ||
                        a.inequality == "lsi-integrated";
  return gaussian ? ReferenceMeasure::StandardGaussian : ReferenceMeasure::Lebesgue;
}

const std::string& need(const std::optional<std::string>& v, const char* flag) {
  if (!v) throw Error(ErrorKind::InvalidArgument, fmt::format("{} is required", flag));
  return *v;
}

double need(const std::optional<double>& v, const char* flag) {
  if (!v) throw Error(ErrorKind::InvalidArgument, fmt::format("{} is required", flag));
  return *v;
}

GridDensity1D density(const std::optional<std::string>& spec, const char* flag, const CheckArgs& a) {
  return parse_density(need(spec, flag), reference_of(a), grid_of(a));
}

GridDensity2D density_2d(const CheckArgs& a) {
  if (a.f && (a.x || a.y)) throw Error(ErrorKind::InvalidArgument, "give either --f or --x/--y, not both");
  if (a.f) return parse_density_2d(*a.f, reference_of(a), grid_of(a));
  if (a.x && a.y) return independent_product(density(a.x, "--x", a), density(a.y, "--y", a));
  throw Error(ErrorKind::InvalidArgument, "a 2D density is required: --f SPEC2D or --x SPEC --y SPEC");
}

std::array<double, 3> young_exponents(const CheckArgs& a) {
  if (a.frame.young) {
    if (a.p || a.q || a.r) throw Error(ErrorKind::InvalidArgument, "give either --young or --p/--q/--r, not both");
    const auto v = parse_triple(*a.frame.young);
    return snap_young(v[0], v[1], v[2]);
  }
  return snap_young(need(a.p, "--p"), need(a.q, "--q"), need(a.r, "--r"));
}

ExponentTriple exponent_triple(const CheckArgs& a) {
  const auto p = snap_exponents(parse_triple(need(a.frame.exponents, "--exponents")));
  return ExponentTriple::make(p[0], p[1], p[2]);
}

InequalityReport run_check(const CheckArgs& a) {
  const std::string& name = a.inequality;
  if (name == "subadditivity") return check_subadditivity(build_frame(a.frame, false), density_2d(a));
  if (name == "fisher") return check_fisher_subadditivity(build_frame(a.frame, false), density_2d(a));
  if (name == "main-entropy") return check_main_entropy(exponent_triple(a), density_2d(a));
  if (name == "main-integral") {
    return check_main_integral(exponent_triple(a), density(a.g, "--g", a).function(),
                               density(a.h, "--h", a).function(), reference_of(a));
  }
  if (name == "young-conv") {
    const auto y = young_exponents(a);
    return check_young_convolution(density(a.f, "--f", a), density(a.g, "--g", a), y[0], y[1], y[2]);
  }
  if (name == "young-entropy") {
    const auto y = young_exponents(a);
    return check_young_entropy(density_2d(a), y[0], y[1], y[2]);
  }
  if (name == "shannon") return check_shannon(density(a.g, "--g", a), density(a.h, "--h", a));
  if (name == "blachmann-stam") {
    const auto both = check_blachmann_stam(density(a.g, "--g", a), density(a.h, "--h", a));
    return a.harmonic ? both.second : both.first;
  }
  if (name == "hyper") {
    return check_hypercontractivity(density(a.f, "--f", a).function(), need(a.p, "--p"), need(a.q, "--q"),
                                    need(a.theta, "--theta"));
  }
  if (name == "hyper2") {
    return check_hyper_two_function(density(a.f, "--f", a).function(), density(a.g, "--g", a).function(),
                                    need(a.p, "--p"), need(a.r, "--r"));
  }
  if (name == "lsi") return check_log_sobolev(density(a.f, "--f", a));
  if (name == "lsi-integrated") return check_integrated_lsi(density(a.f, "--f", a), need(a.theta, "--theta"));
  if (name == "brascamp-lieb") {
    return check_brascamp_lieb(build_frame(a.frame, false), density(a.f1, "--f1", a).function(),
                               density(a.f2, "--f2", a).function(), density(a.f3, "--f3", a).function(),
                               reference_of(a));
  }
  throw Error(ErrorKind::InvalidArgument, fmt::format("unknown inequality '{}'", name));
}

void emit(const CheckArgs& a, const std::string& text) {
  if (a.out) {
    std::ofstream out(*a.out);
    if (!out) throw Error(ErrorKind::Io, fmt::format("cannot write {}", *a.out));
    out << text;
  } else {
    std::cout << text;
  }
}

int cmd_check(const CheckArgs& a) {
  const InequalityReport r = run_check(a);
  emit(a, report_to_json(r) + "\n");
  return r.slack < -r.tolerance ? kExitViolated : kExitPass;
}

std::vector<double> sweep_values(const CheckArgs& a) {
  const std::size_t colon = a.range.find(':', 1);
  if (colon == std::string::npos) throw Error(ErrorKind::Parse, "--range must look like a:b");
  const double lo = parse_reals(a.range.substr(0, colon), 1)[0];
  const double hi = parse_reals(a.range.substr(colon + 1), 1)[0];
  if (a.steps < 1) throw Error(ErrorKind::InvalidArgument, "--steps must be at least 1");
  if (a.log_spacing && !(lo * hi > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "--log needs both ends nonzero with the same sign");
  }
  std::vector<double> v;
  for (int k = 0; k < a.steps; ++k) {
    const double t = a.steps == 1 ? 0.0 : static_cast<double>(k) / (a.steps - 1);
    v.push_back(a.log_spacing ? lo * std::pow(hi / lo, t) : lo + t * (hi - lo));
  }
  return v;
}

int cmd_sweep(const CheckArgs& base) {
  const auto values = sweep_values(base);
  std::vector<SweepRow> rows;
  const std::string& name = base.inequality;
  const std::string& param = base.param;
  auto unsupported = [&] {
    return Error(ErrorKind::InvalidArgument, fmt::format("cannot sweep '{}' over '{}'", name, param));
  };

  if (name == "shannon-limit") {
    if (param != "s") throw unsupported();
    for (double s : values) {
      const Frame2 f = shannon_limit_frame(s);
      rows.push_back({s, f.weight(1), -4.0 * s, -4.0 * s - f.weight(1)});
    }
  } else if (name == "shannon-taylor") {
    if (param != "s") throw unsupported();
    for (const auto& pt : shannon_taylor_check(density(base.g, "--g", base), density(base.h, "--h", base), values)) {
      rows.push_back({pt.s, pt.lhs, pt.rhs, pt.rhs - pt.lhs});
    }
  } else if (param == "theta" && (name == "hyper" || name == "lsi-integrated")) {
    const GridDensity1D f = density(base.f, "--f", base);
    for (double theta : values) {
      const InequalityReport r = name == "hyper"
                                     ? check_hypercontractivity(f.function(), need(base.p, "--p"), need(base.q, "--q"), theta)
                                     : check_integrated_lsi(f, theta);
      rows.push_back({theta, r.lhs, r.rhs, r.slack});
    }
  } else if (param == "sigma" && name == "young-conv") {
    const auto y = young_exponents(base);
    const GridDensity1D f = density(base.f, "--f", base);
    for (double sigma : values) {
      const GridDensity1D g =
          GaussianDensity::make1d(ReferenceMeasure::Lebesgue, 0.0, sigma * sigma).to_grid(grid_of(base));
      const InequalityReport r = check_young_convolution(f, g, y[0], y[1], y[2]);
      rows.push_back({sigma, r.lhs, r.rhs, r.slack});
    }
  } else {
    throw unsupported();
  }
  std::ostringstream out;
  write_sweep_csv(out, rows);
  emit(base, out.str());
  return kExitPass;
}

int cmd_frame(const FrameArgs& a, bool as_json) {
  if (a.count() != 1) {
    throw Error(ErrorKind::InvalidArgument, "give exactly one of --angles, --weights, --exponents, --young");
  }
  const Frame2 f = build_frame(a, true);
  if (as_json) {
    std::cout << fmt::format(
        "{{\"theta\": [{}, {}, {}], \"weights\": [{}, {}, {}], \"residual\": {}}}\n", f.direction(0).theta(),
        f.direction(1).theta(), f.direction(2).theta(), f.weight(0), f.weight(1), f.weight(2), f.residual());
  } else {
    std::cout << fmt::format("theta:    {:.10f} {:.10f} {:.10f}\n", f.direction(0).theta(), f.direction(1).theta(),
                             f.direction(2).theta())
              << fmt::format("weights:  {:.10f} {:.10f} {:.10f}\n", f.weight(0), f.weight(1), f.weight(2))
              << fmt::format("residual: {:.3e}\n", f.residual());
  }
  return kExitPass;
}

int cmd_selftest(const std::optional<std::string>& only, std::optional<std::size_t> grid_n) {
  AcceptanceOptions o;
  o.only = only;
  o.grid_n = grid_n.value_or(default_grid_n());
  bool ok = true;
  for (const auto& r : run_acceptance(o)) {
    std::cout << format_result(r) << "\n";
    ok = ok && r.passed;
  }
  std::cout << (ok ? "selftest: all criteria passed\n" : "selftest: FAILED\n");
  return ok ? kExitPass : kExitViolated;
}

void add_frame_options(CLI::App* app, FrameArgs& a) {
  app->add_option("--angles", a.angles, "three directions in radians, a,b,c");
  app->add_option("--weights", a.weights, "three weights c1,c2,c3 summing to 2");
  app->add_option("--exponents", a.exponents, "exponents p1,p2,p3 with reciprocals summing to 2");
  app->add_option("--young", a.young, "Young exponents p,q,r with 1/p + 1/q = 1 + 1/r");
}

void add_check_options(CLI::App* app, CheckArgs& a) {
  // --h is a density, so help is long-form only here.
  app->set_help_flag("--help", "print this help message and exit");
  add_frame_options(app, a.frame);
  app->add_option("--f", a.f, "density (1D or 2D depending on the inequality)");
  app->add_option("--g", a.g, "first 1D density");
  app->add_option("--h", a.h, "second 1D density");
  app->add_option("--x", a.x, "law of X for a product density");
  app->add_option("--y", a.y, "law of Y for a product density");
  app->add_option("--f1", a.f1, "Brascamp-Lieb factor 1");
  app->add_option("--f2", a.f2, "Brascamp-Lieb factor 2");
  app->add_option("--f3", a.f3, "Brascamp-Lieb factor 3");
  app->add_option("--p", a.p, "exponent p");
  app->add_option("--q", a.q, "exponent q");
  app->add_option("--r", a.r, "exponent r");
  app->add_option("--theta", a.theta, "angle in radians");
  app->add_option("--ref", a.ref, "reference measure: lebesgue or gaussian");
  app->add_option("--L", a.half_width, "grid half width")->capture_default_str();
  app->add_option("--N", a.n, "grid points (odd, >= 65); default ENTROFRAME_GRID_N or 2049");
  app->add_option("--out", a.out, "write output to this file");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy inequalities from decompositions of the identity"};
  app.require_subcommand(1);

  FrameArgs frame_args;
  bool frame_json = false;
  auto* frame = app.add_subcommand("frame", "build a decomposition of the identity in the plane");
  add_frame_options(frame, frame_args);
  frame->add_flag("--json", frame_json, "print JSON");

  CheckArgs check_args;
  auto* check = app.add_subcommand("check", "run one inequality check and print its JSON report");
  check->add_option("inequality", check_args.inequality, "inequality name")
      ->required()
      ->check(CLI::IsMember(kInequalities));
  add_check_options(check, check_args);
  check->add_flag("--harmonic", check_args.harmonic, "blachmann-stam: report I(X+Y) <= I(X)I(Y)/(I(X)+I(Y))");

  CheckArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "sweep one parameter and print CSV rows");
  sweep->add_option("inequality", sweep_args.inequality,
                    "hyper, lsi-integrated (theta); young-conv (sigma); shannon-limit, shannon-taylor (s)")
      ->required();
  add_check_options(sweep, sweep_args);
  sweep->add_option("--param", sweep_args.param, "parameter to sweep: theta, s or sigma")->required();
  sweep->add_option("--range", sweep_args.range, "a:b")->required();
  sweep->add_option("--steps", sweep_args.steps, "number of points")->required();
  sweep->add_flag("--log", sweep_args.log_spacing, "geometric spacing");

  std::optional<std::string> only;
  std::optional<std::size_t> grid_n;
  auto* selftest = app.add_subcommand("selftest", "run the built-in acceptance corpus");
  selftest->add_option("--only", only, "run one group")->check(CLI::IsMember(acceptance_groups()));
  selftest->add_option("--grid-n", grid_n, "grid points for grid-based criteria");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*frame) return cmd_frame(frame_args, frame_json);
    if (*check) return cmd_check(check_args);
    if (*sweep) return cmd_sweep(sweep_args);
    if (*selftest) return cmd_selftest(only, grid_n);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
