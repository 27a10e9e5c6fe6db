#include "entroframe/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "entroframe/error.hpp"

namespace entroframe {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr double kLogSqrt2Pi = 0.91893853320467274178;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_real(std::string_view text) {
  const std::string_view t = trim(text);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || end != t.data() + t.size() || !std::isfinite(v)) {
    throw Error(ErrorKind::Parse, fmt::format("'{}' is not a finite number", text));
  }
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, fmt::format("cannot open {}", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, fmt::format("invalid JSON: {}", e.what()));
  }
}

double log_add(double a, double b) {
  if (a == -INFINITY) return b;
  if (b == -INFINITY) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

struct Component {
  double weight, mean, var;
};

std::function<double(double)> mixture_log_pdf(std::vector<Component> comps) {
  double total = 0.0;
  for (const auto& c : comps) {
    if (!(c.weight > 0.0) || !(c.var > 0.0)) {
      throw Error(ErrorKind::Parse, "mixture weights and variances must be positive");
    }
    total += c.weight;
  }
  for (auto& c : comps) c.weight /= total;
  return [comps](double x) {
    double acc = -INFINITY;
    for (const auto& c : comps) {
      const double d = x - c.mean;
      acc = log_add(acc, std::log(c.weight) - 0.5 * d * d / c.var - 0.5 * std::log(c.var) - kLogSqrt2Pi);
    }
    return acc;
  };
}

std::function<double(double)> uniform_log_pdf(double a, double b) {
  if (!(b > a)) throw Error(ErrorKind::Parse, fmt::format("uniform:{},{} needs a < b", a, b));
  const double sigma = kUniformSmoothing;
  return [=](double x) {
    // P(a < x - sigma Z < b) / (b - a), written with erfc to keep the tails.
    const double lo = (x - b) / (sigma * std::numbers::sqrt2);
    const double hi = (x - a) / (sigma * std::numbers::sqrt2);
    double mass;
    if (lo > 0.0) {
      mass = 0.5 * (std::erfc(lo) - std::erfc(hi));
    } else if (hi < 0.0) {
      mass = 0.5 * (std::erfc(-hi) - std::erfc(-lo));
    } else {
      mass = 1.0 - 0.5 * std::erfc(-lo) - 0.5 * std::erfc(hi);
    }
    return mass > 0.0 ? std::log(mass / (b - a)) : -INFINITY;
  };
}

GridDensity1D from_law(std::function<double(double)> law, ReferenceMeasure r, const UniformGrid& grid) {
  return sample_density(r, grid, law);
}

GridDensity1D exp_density(double a, ReferenceMeasure r, const UniformGrid& grid) {
  if (r != ReferenceMeasure::StandardGaussian) {
    throw Error(ErrorKind::ReferenceMismatch, "exp:a is a density relative to the standard Gaussian");
  }
  return from_law(mixture_log_pdf({{1.0, a, 1.0}}), r, grid);
}

std::vector<Component> parse_mixture(std::string_view body) {
  std::vector<Component> comps;
  std::size_t start = 0;
  while (start <= body.size()) {
    const std::size_t end = std::min(body.find(';', start), body.size());
    const auto v = parse_reals(body.substr(start, end - start), 3);
    comps.push_back({v[0], v[1], v[2]});
    start = end + 1;
  }
  return comps;
}

GridDensity1D density_from_json(const json& j, ReferenceMeasure r, const UniformGrid& grid);

GridDensity1D density_from_value(const json& j, ReferenceMeasure r, const UniformGrid& grid) {
  if (j.is_string()) return parse_density(j.get<std::string>(), r, grid);
  return density_from_json(j, r, grid);
}

// {"family": "gaussian" | "gaussian_mixture" | "uniform", "reference": ..., params}
GridDensity1D family_from_json(const json& j, ReferenceMeasure r, const UniformGrid& grid) {
  if (j.contains("reference")) {
    const std::string ref = j.at("reference").get<std::string>();
    if (ref != "lebesgue" && ref != "gaussian") {
      throw Error(ErrorKind::Parse, fmt::format("unknown reference '{}'", ref));
    }
    if ((ref == "lebesgue") != (r == ReferenceMeasure::Lebesgue)) {
      throw Error(ErrorKind::ReferenceMismatch,
                  fmt::format("density declares reference '{}' but {} was requested", ref, to_string(r)));
    }
  }
  const std::string family = j.at("family").get<std::string>();
  if (family == "gaussian") {
    return from_law(mixture_log_pdf({{1.0, j.value("mean", 0.0), j.at("variance").get<double>()}}), r, grid);
  }
  if (family == "gaussian_mixture") {
    std::vector<Component> comps;
    double total = 0.0;
    for (const auto& c : j.at("components")) {
      comps.push_back({c.at("weight").get<double>(), c.at("mean").get<double>(), c.at("variance").get<double>()});
      total += comps.back().weight;
    }
    if (comps.empty()) throw Error(ErrorKind::Parse, "gaussian_mixture needs at least one component");
    if (std::abs(total - 1.0) > 1e-9) {
      throw Error(ErrorKind::Parse, fmt::format("mixture weights sum to {}, expected 1", total));
    }
    return from_law(mixture_log_pdf(std::move(comps)), r, grid);
  }
  if (family == "uniform") return from_law(uniform_log_pdf(j.at("a").get<double>(), j.at("b").get<double>()), r, grid);
  throw Error(ErrorKind::Parse, fmt::format("unknown density family '{}'", family));
}

GridDensity1D density_from_json(const json& j, ReferenceMeasure r, const UniformGrid& grid) {
  try {
    if (j.contains("family")) return family_from_json(j, r, grid);
    const std::string type = j.at("type").get<std::string>();
    if (type == "gauss") {
      return from_law(mixture_log_pdf({{1.0, j.at("mean").get<double>(), j.at("var").get<double>()}}), r, grid);
    }
    if (type == "gaussmix") {
      std::vector<Component> comps;
      for (const auto& c : j.at("components")) {
        comps.push_back({c.at("w").get<double>(), c.at("mean").get<double>(), c.at("var").get<double>()});
      }
      if (comps.empty()) throw Error(ErrorKind::Parse, "gaussmix needs at least one component");
      return from_law(mixture_log_pdf(std::move(comps)), r, grid);
    }
    if (type == "uniform") return from_law(uniform_log_pdf(j.at("a").get<double>(), j.at("b").get<double>()), r, grid);
    if (type == "exp") return exp_density(j.at("a").get<double>(), r, grid);
    if (type == "csv") return read_density_csv(j.at("path").get<std::string>(), r);
    if (type == "grid") {
      const auto values = j.at("values").get<std::vector<double>>();
      const UniformGrid g{j.at("lo").get<double>(), j.at("step").get<double>(), values.size()};
      return GridDensity1D::from_values(r, g, values);
    }
    throw Error(ErrorKind::Parse, fmt::format("unknown density type '{}'", type));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, fmt::format("density JSON: {}", e.what()));
  }
}

GridDensity2D density_2d_from_json(const json& j, ReferenceMeasure r, const UniformGrid& grid) {
  try {
    const std::string type = j.at("type").get<std::string>();
    if (type == "gauss2") {
      Vec2 m{0.0, 0.0};
      if (j.contains("mean")) m = {j.at("mean").at(0).get<double>(), j.at("mean").at(1).get<double>()};
      const auto& c = j.at("cov");
      const Mat2 cov{c.at(0).at(0).get<double>(), c.at(0).at(1).get<double>(), c.at(1).at(0).get<double>(),
                     c.at(1).at(1).get<double>()};
      return GaussianDensity::make2d(r, m, cov).to_grid_2d(grid);
    }
    if (type == "product") {
      return independent_product(density_from_value(j.at("x"), r, grid), density_from_value(j.at("y"), r, grid));
    }
    if (type == "csv2d") return read_density_csv_2d(j.at("path").get<std::string>(), r);
    if (type == "grid2d") {
      const auto values = j.at("values").get<std::vector<double>>();
      const UniformGrid g{j.at("lo").get<double>(), j.at("step").get<double>(), j.at("n").get<std::size_t>()};
      return GridDensity2D::from_values(r, g, values);
    }
    throw Error(ErrorKind::Parse, fmt::format("unknown 2D density type '{}'", type));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, fmt::format("density JSON: {}", e.what()));
  }
}

std::pair<std::string_view, std::string_view> split_kind(std::string_view spec) {
  const std::size_t colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorKind::Parse, fmt::format("density spec '{}' has no kind prefix", spec));
  }
  return {trim(spec.substr(0, colon)), spec.substr(colon + 1)};
}

// Reads "a,b,c" CSV rows after checking the header.
std::vector<std::vector<double>> read_rows(const std::string& path, std::string_view header, std::size_t cols) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, fmt::format("cannot open {}", path));
  std::string line;
  if (!std::getline(in, line) || trim(line) != header) {
    throw Error(ErrorKind::Parse, fmt::format("{}: expected header '{}'", path, header));
  }
  std::vector<std::vector<double>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      rows.push_back(parse_reals(line, cols));
    } catch (const Error& e) {
      throw Error(ErrorKind::Parse, fmt::format("{}:{}: {}", path, lineno, e.what()));
    }
  }
  return rows;
}

}  // namespace

std::vector<double> parse_reals(std::string_view text, std::size_t expected) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    out.push_back(parse_real(text.substr(start, end - start)));
    start = end + 1;
  }
  if (expected != 0 && out.size() != expected) {
    throw Error(ErrorKind::Parse, fmt::format("expected {} numbers in '{}', got {}", expected, text, out.size()));
  }
  return out;
}

GridDensity1D parse_density(std::string_view spec, ReferenceMeasure r, const UniformGrid& grid) {
  spec = trim(spec);
  if (!spec.empty() && spec.front() == '{') return density_from_json(parse_json(spec), r, grid);
  const auto [kind, body] = split_kind(spec);
  if (kind == "gauss") {
    const auto v = parse_reals(body, 2);
    if (!(v[1] > 0.0)) throw Error(ErrorKind::Parse, "gauss variance must be positive");
    return from_law(mixture_log_pdf({{1.0, v[0], v[1]}}), r, grid);
  }
  if (kind == "gaussmix") return from_law(mixture_log_pdf(parse_mixture(body)), r, grid);
  if (kind == "uniform") {
    const auto v = parse_reals(body, 2);
    return from_law(uniform_log_pdf(v[0], v[1]), r, grid);
  }
  if (kind == "exp") return exp_density(parse_reals(body, 1)[0], r, grid);
  if (kind == "csv") return read_density_csv(std::string(body), r);
  if (kind == "json") return density_from_json(parse_json(read_file(std::string(body))), r, grid);
  throw Error(ErrorKind::Parse, fmt::format("unknown density kind '{}'", kind));
}

GridDensity2D parse_density_2d(std::string_view spec, ReferenceMeasure r, const UniformGrid& grid) {
  spec = trim(spec);
  if (!spec.empty() && spec.front() == '{') return density_2d_from_json(parse_json(spec), r, grid);
  const auto [kind, body] = split_kind(spec);
  if (kind == "gauss2") {
    const auto v = parse_reals(body);
    if (v.size() == 3) return GaussianDensity::make2d(r, {0.0, 0.0}, {v[0], v[1], v[1], v[2]}).to_grid_2d(grid);
    if (v.size() == 5) return GaussianDensity::make2d(r, {v[0], v[1]}, {v[2], v[3], v[3], v[4]}).to_grid_2d(grid);
    throw Error(ErrorKind::Parse, "gauss2 takes s11,s12,s22 or m1,m2,s11,s12,s22");
  }
  if (kind == "csv2d") return read_density_csv_2d(std::string(body), r);
  if (kind == "json") return density_2d_from_json(parse_json(read_file(std::string(body))), r, grid);
  throw Error(ErrorKind::Parse,
              fmt::format("'{}' is not a 2D density kind (use gauss2, csv2d, json or --x/--y)", kind));
}

GridDensity1D read_density_csv(const std::string& path, ReferenceMeasure r) {
  const auto rows = read_rows(path, "x,f", 2);
  if (rows.size() < 2) throw Error(ErrorKind::Parse, fmt::format("{}: too few rows", path));
  const double lo = rows.front()[0];
  const double step = (rows.back()[0] - lo) / static_cast<double>(rows.size() - 1);
  if (!(step > 0.0)) throw Error(ErrorKind::Parse, fmt::format("{}: x must increase", path));
  std::vector<double> values;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (std::abs(rows[i][0] - (lo + static_cast<double>(i) * step)) > 1e-6 * step) {
      throw Error(ErrorKind::Parse, fmt::format("{}: x is not uniformly spaced at row {}", path, i + 2));
    }
    values.push_back(rows[i][1]);
  }
  return GridDensity1D::from_values(r, UniformGrid{lo, step, rows.size()}, std::move(values));
}

GridDensity2D read_density_csv_2d(const std::string& path, ReferenceMeasure r) {
  const auto rows = read_rows(path, "x,y,f", 3);
  const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(rows.size()))));
  if (n < 2 || n * n != rows.size()) {
    throw Error(ErrorKind::Parse, fmt::format("{}: {} rows do not form a square grid", path, rows.size()));
  }
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& row : rows) {
    lo = std::min({lo, row[0], row[1]});
    hi = std::max({hi, row[0], row[1]});
  }
  const double step = (hi - lo) / static_cast<double>(n - 1);
  std::vector<double> values(n * n, 0.0);
  std::vector<char> seen(n * n, 0);
  for (const auto& row : rows) {
    const double fx = (row[0] - lo) / step, fy = (row[1] - lo) / step;
    const auto ix = static_cast<long long>(std::llround(fx)), iy = static_cast<long long>(std::llround(fy));
    if (std::abs(fx - static_cast<double>(ix)) > 1e-6 || std::abs(fy - static_cast<double>(iy)) > 1e-6 || ix < 0 ||
        iy < 0 || ix >= static_cast<long long>(n) || iy >= static_cast<long long>(n)) {
      throw Error(ErrorKind::Parse, fmt::format("{}: point ({}, {}) is off the uniform grid", path, row[0], row[1]));
    }
    const std::size_t k = static_cast<std::size_t>(iy) * n + static_cast<std::size_t>(ix);
    if (seen[k]) throw Error(ErrorKind::Parse, fmt::format("{}: point ({}, {}) repeats", path, row[0], row[1]));
    seen[k] = 1;
    values[k] = row[2];
  }
  return GridDensity2D::from_values(r, UniformGrid{lo, step, n}, std::move(values));
}

std::string report_to_json(const InequalityReport& r) {
  ordered_json j;
  j["name"] = r.name;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["constant"] = r.constant;
  j["slack"] = r.slack;
  j["tolerance"] = r.tolerance;
  j["inputs_digest"] = r.inputs_digest;
  return j.dump(2);
}

InequalityReport report_from_json(std::string_view text) {
  const json j = parse_json(text);
  try {
    InequalityReport r;
    r.name = j.at("name").get<std::string>();
    r.lhs = j.at("lhs").get<double>();
    r.rhs = j.at("rhs").get<double>();
    r.constant = j.at("constant").get<double>();
    r.slack = j.at("slack").get<double>();
    r.tolerance = j.at("tolerance").get<double>();
    r.inputs_digest = j.at("inputs_digest").get<std::string>();
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, fmt::format("report JSON: {}", e.what()));
  }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "param,lhs,rhs,slack\n";
  for (const auto& row : rows) out << fmt::format("{},{},{},{}\n", row.param, row.lhs, row.rhs, row.slack);
}

}  // namespace entroframe
