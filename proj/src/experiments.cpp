#include "schwarzspec/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "schwarzspec/discrete.hpp"
#include "schwarzspec/iteration_lab.hpp"
#include "schwarzspec/schwarz2d.hpp"
#include "schwarzspec/toeplitz.hpp"

#ifndef SCHWARZSPEC_VERSION
#define SCHWARZSPEC_VERSION "unknown"
#endif

namespace schwarzspec {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool valid_key(const std::string& key) {
  if (key.empty() || !(std::isalpha(static_cast<unsigned char>(key[0])) || key[0] == '_')) return false;
  return std::all_of(key.begin(), key.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

std::optional<double> parse_real(const std::string& s) {
  double x = 0.0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, x);
  if (ec != std::errc{} || ptr != end || !std::isfinite(x)) return std::nullopt;
  return x;
}

std::optional<long long> parse_integer(const std::string& s) {
  long long x = 0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, x);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return x;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

// ---------------------------------------------------------------------------
// Key schema

enum class Kind { positive, nonnegative, integer, positive_list, integer_list, choice, boolean };

struct KeySpec {
  std::string name;
  Kind kind;
  std::string fallback;  // empty for required keys
  long long min_int = 0;
  std::vector<std::string> choices;
};

KeySpec req(std::string name, Kind kind, long long min_int = 0) { return {std::move(name), kind, {}, min_int, {}}; }
KeySpec opt(std::string name, Kind kind, std::string fallback, long long min_int = 0) {
  return {std::move(name), kind, std::move(fallback), min_int, {}};
}
KeySpec choice(std::string name, std::vector<std::string> choices, std::string fallback = {}) {
  return {std::move(name), Kind::choice, std::move(fallback), 0, std::move(choices)};
}

struct Schema {
  ExperimentInfo info;
  std::vector<KeySpec> keys;
};

std::vector<KeySpec> physics_1d() {
  return {req("k", Kind::positive), req("sigma", Kind::nonnegative), req("delta", Kind::positive),
          req("L", Kind::positive)};
}

std::vector<KeySpec> root_keys() {
  return {opt("root_tol", Kind::positive, "1e-12"), opt("root_max_iter", Kind::integer, "1000", 1)};
}

std::vector<KeySpec> truncation_keys() {
  return {opt("cap_factor", Kind::nonnegative, "4"), opt("extra", Kind::integer, "64", 0),
          opt("tail_window", Kind::integer, "16", 1)};
}

template <class... Groups>
std::vector<KeySpec> join(Groups... groups) {
  std::vector<KeySpec> out;
  (out.insert(out.end(), groups.begin(), groups.end()), ...);
  return out;
}

const std::vector<Schema>& schemas() {
  static const std::vector<Schema> all = [] {
    const KeySpec alpha = choice("alpha_mode", {"impedance", "impedance-shifted"}, "impedance");
    const KeySpec equation = choice("equation", {"helmholtz", "maxwell"}, "helmholtz");
    std::vector<Schema> s;
    s.push_back({{"spectrum", {}, {}, "eigenvalues of the 1D iteration matrix against the limiting spectrum"},
                 join(physics_1d(), std::vector{req("N", Kind::integer, 2), alpha, opt("curve_samples", Kind::integer, "4096", 8)},
                      root_keys())});
    s.push_back({{"limit-curve", {}, {}, "limiting curve and outlier candidates for the 1D coefficients"},
                 join(physics_1d(), std::vector{alpha, opt("curve_samples", Kind::integer, "4096", 8)})});
    s.push_back({{"factor-vs-N", {}, {}, "spectral radius against the number of subdomains, with the limiting bound"},
                 join(physics_1d(),
                      std::vector{req("N_list", Kind::integer_list, 2), alpha, opt("iterate_steps", Kind::integer, "0", 0),
                                  opt("seed", Kind::integer, "1", 0)},
                      root_keys())});
    s.push_back({{"mode-sweep", {}, {}, "per-mode convergence factors of the 2D wave-guide"},
                 join(physics_1d(), std::vector{req("L_hat", Kind::positive), equation}, truncation_keys())});
    s.push_back({{"k-robust", {}, {}, "k-scaled parameters: discrete-mode sup against the continuous beta bound"},
                 join(std::vector{req("sigma0", Kind::positive), req("L0", Kind::positive), req("delta0", Kind::positive),
                                  req("L_hat", Kind::positive), req("k_list", Kind::positive_list), equation,
                                  opt("beta_max", Kind::positive, "16"), opt("beta_grid", Kind::integer, "4097", 3)},
                      truncation_keys())});
    s.push_back({{"nilpotency", {}, {}, "norm of T^(N-1) without absorption"},
                 {req("k", Kind::positive), req("delta", Kind::positive), req("L", Kind::positive),
                  req("N_list", Kind::integer_list, 2), opt("sigma", Kind::nonnegative, "0"),
                  opt("nilpotency_tol", Kind::positive, "1e-8")}});
    s.push_back({{"discrete-scan", {}, {}, "ORAS-preconditioned GMRES iteration counts over k and N"},
                 {req("k_list", Kind::positive_list), req("N_list", Kind::integer_list, 1), req("sigma", Kind::nonnegative),
                  choice("case", {"wave-guide", "free-space", "both"}), opt("tol", Kind::positive, "1e-6"),
                  opt("max_iter", Kind::integer, "400", 1), opt("grid_constant", Kind::positive, "3"),
                  opt("overlap_cells", Kind::integer, "2", 1), opt("verify_direct", Kind::boolean, "false")}});
    for (auto& schema : s) {
      for (const auto& k : schema.keys) (k.fallback.empty() ? schema.info.required : schema.info.optional).push_back(k.name);
    }
    return s;
  }();
  return all;
}

const Schema* find_schema(const std::string& name) {
  for (const auto& s : schemas())
    if (s.info.name == name) return &s;
  return nullptr;
}

std::optional<std::string> check_value(const KeySpec& spec, const std::string& value) {
  const std::string& n = spec.name;
  auto int_ok = [&](const std::string& v) {
    const auto x = parse_integer(v);
    return x && *x >= spec.min_int;
  };
  switch (spec.kind) {
    case Kind::positive: {
      const auto x = parse_real(value);
      if (!x) return n + " must be a finite number";
      if (*x <= 0.0) return n + " must be > 0";
      return std::nullopt;
    }
    case Kind::nonnegative: {
      const auto x = parse_real(value);
      if (!x) return n + " must be a finite number";
      if (*x < 0.0) return n + " must be >= 0";
      return std::nullopt;
    }
    case Kind::integer:
      if (!int_ok(value)) return n + " must be an integer >= " + std::to_string(spec.min_int);
      return std::nullopt;
    case Kind::positive_list: {
      const auto items = split_list(value);
      if (items.empty()) return n + " must be a non-empty comma-separated list";
      for (const auto& v : items) {
        const auto x = parse_real(v);
        if (!x || *x <= 0.0) return n + " entries must be numbers > 0";
      }
      return std::nullopt;
    }
    case Kind::integer_list: {
      const auto items = split_list(value);
      if (items.empty()) return n + " must be a non-empty comma-separated list";
      for (const auto& v : items)
        if (!int_ok(v)) return n + " entries must be integers >= " + std::to_string(spec.min_int);
      return std::nullopt;
    }
    case Kind::choice:
      if (std::find(spec.choices.begin(), spec.choices.end(), value) == spec.choices.end()) {
        std::string all;
        for (const auto& c : spec.choices) all += (all.empty() ? "" : ", ") + c;
        return n + " must be one of: " + all;
      }
      return std::nullopt;
    case Kind::boolean:
      if (value != "true" && value != "false") return n + " must be true or false";
      return std::nullopt;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Typed access to a validated config, with defaults filled in

class Params {
 public:
  Params(const Schema& schema, const ExperimentConfig& config) : schema_(schema) {
    for (const auto& k : schema.keys) {
      const auto it = config.parameters.find(k.name);
      values_[k.name] = it != config.parameters.end() ? it->second : k.fallback;
    }
  }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  double real(const std::string& key) const { return *parse_real(values_.at(key)); }
  int integer(const std::string& key) const { return static_cast<int>(*parse_integer(values_.at(key))); }
  const std::string& text(const std::string& key) const { return values_.at(key); }
  bool flag(const std::string& key) const { return values_.at(key) == "true"; }
  std::vector<double> reals(const std::string& key) const {
    std::vector<double> out;
    for (const auto& v : split_list(values_.at(key))) out.push_back(*parse_real(v));
    return out;
  }
  std::vector<int> integers(const std::string& key) const {
    std::vector<int> out;
    for (const auto& v : split_list(values_.at(key))) out.push_back(static_cast<int>(*parse_integer(v)));
    return out;
  }
  ordered_json to_json() const {
    ordered_json j = ordered_json::object();
    for (const auto& k : schema_.keys) {
      switch (k.kind) {
        case Kind::positive:
        case Kind::nonnegative: j[k.name] = real(k.name); break;
        case Kind::integer: j[k.name] = integer(k.name); break;
        case Kind::positive_list: j[k.name] = reals(k.name); break;
        case Kind::integer_list: j[k.name] = integers(k.name); break;
        case Kind::choice: j[k.name] = text(k.name); break;
        case Kind::boolean: j[k.name] = flag(k.name); break;
      }
    }
    return j;
  }

 private:
  const Schema& schema_;
  std::map<std::string, std::string> values_;
};

// ---------------------------------------------------------------------------
// Output helpers

class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header) { row(header); }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << cells[i];
    os_ << '\n';
  }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

std::string num(double x) { return format_number(x); }

struct Series {
  std::vector<std::pair<double, double>> points;
  std::string color;
  bool polyline = false;
  std::string label;
  bool split_jumps = false;  // break the polyline at jumps (branch cuts of the limiting curve)
  bool markers = false;      // markers on a polyline
};

// Minimal static plot: frame, min/max tick labels, markers and polylines.
std::string svg_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                     const std::vector<Series>& series, bool equal_aspect = false) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      xmin = std::min(xmin, x), xmax = std::max(xmax, x), ymin = std::min(ymin, y), ymax = std::max(ymax, y);
    }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  auto pad = [](double& lo, double& hi) {
    const double span = hi - lo > 0 ? hi - lo : std::max(1.0, std::abs(hi));
    lo -= 0.05 * span;
    hi += 0.05 * span;
  };
  pad(xmin, xmax);
  pad(ymin, ymax);
  constexpr double W = 760, H = 480, left = 70, right = 160, top = 40, bottom = 50;
  double pw = W - left - right, ph = H - top - bottom;
  if (equal_aspect) {
    const double scale = std::min(pw / (xmax - xmin), ph / (ymax - ymin));
    const double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);
    xmin = cx - 0.5 * pw / scale, xmax = cx + 0.5 * pw / scale;
    ymin = cy - 0.5 * ph / scale, ymax = cy + 0.5 * ph / scale;
  }
  auto X = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto Y = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };
  char buf[256];
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
     << ' ' << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" << title
     << "</text>\n";
  std::snprintf(buf, sizeof buf, "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"none\" stroke=\"black\"/>\n",
                left, top, pw, ph);
  os << buf;
  if (xmin < 0 && xmax > 0) {
    std::snprintf(buf, sizeof buf, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#bbb\"/>\n", X(0), top, X(0), top + ph);
    os << buf;
  }
  if (ymin < 0 && ymax > 0) {
    std::snprintf(buf, sizeof buf, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#bbb\"/>\n", left, Y(0), left + pw, Y(0));
    os << buf;
  }
  auto label = [&](double x, double y, const char* anchor, double v) {
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"%s\" font-family=\"sans-serif\" font-size=\"11\">%.4g</text>\n", x,
                  y, anchor, v);
    os << buf;
  };
  label(left, top + ph + 16, "start", xmin);
  label(left + pw, top + ph + 16, "end", xmax);
  label(left - 6, top + ph, "end", ymin);
  label(left - 6, top + 10, "end", ymax);
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 12
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << xlabel << "</text>\n";
  std::snprintf(buf, sizeof buf,
                "<text x=\"16\" y=\"%.2f\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
                "transform=\"rotate(-90 16 %.2f)\">",
                top + ph / 2, top + ph / 2);
  os << buf << ylabel << "</text>\n";

  // A polyline is split where consecutive points jump by more than a tenth of the frame.
  const double jump = 0.1 * std::max(pw, ph);
  double legend_y = top + 14;
  for (const auto& s : series) {
    if (s.polyline) {
      std::string pts;
      double px = 0, py = 0;
      auto flush = [&] {
        if (!pts.empty()) os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.2\" points=\"" << pts << "\"/>\n";
        pts.clear();
      };
      for (const auto& [x, y] : s.points) {
        if (!std::isfinite(x) || !std::isfinite(y)) {
          flush();
          continue;
        }
        const double sx = X(x), sy = Y(y);
        if (s.split_jumps && !pts.empty() && std::hypot(sx - px, sy - py) > jump) flush();
        std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", pts.empty() ? "" : " ", sx, sy);
        pts += buf;
        px = sx, py = sy;
      }
      flush();
    }
    if (!s.polyline || s.markers) {
      for (const auto& [x, y] : s.points) {
        if (!std::isfinite(x) || !std::isfinite(y)) continue;
        std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2.5\" fill=\"%s\"/>\n", X(x), Y(y), s.color.c_str());
        os << buf;
      }
    }
    if (!s.label.empty()) {
      std::snprintf(buf, sizeof buf,
                    "<text x=\"%.2f\" y=\"%.2f\" font-family=\"sans-serif\" font-size=\"11\" fill=\"%s\">%s</text>\n",
                    left + pw + 10, legend_y, s.color.c_str(), s.label.c_str());
      os << buf;
      legend_y += 14;
    }
  }
  os << "</svg>\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Experiments

struct Output {
  std::vector<std::pair<std::string, std::string>> files;  // name, contents
  ordered_json results = ordered_json::object();
  ordered_json tolerances = ordered_json::object();
  ordered_json seeds = ordered_json::object();
};

SchwarzParams params_1d(const Params& p) {
  SchwarzParams s;
  s.k = p.real("k");
  s.sigma = p.real("sigma");
  s.delta = p.real("delta");
  s.L = p.real("L");
  if (p.has("alpha_mode") && p.text("alpha_mode") == "impedance-shifted") s.alpha = AlphaMode::impedance_shifted();
  return s;
}

SpectrumOptions spectrum_options(const Params& p, Output& out) {
  SpectrumOptions o;
  o.roots.tol = p.real("root_tol");
  o.roots.max_iter = p.integer("root_max_iter");
  out.tolerances["root_tol"] = o.roots.tol;
  out.tolerances["root_max_iter"] = o.roots.max_iter;
  out.seeds["root_angle_seed"] = o.roots.angle_seed;
  return o;
}

ordered_json complex_json(Complex z) { return ordered_json::array({z.real(), z.imag()}); }

void add_limit_files(const LimitSpectrum& limit, Output& out) {
  CsvWriter curve({"theta", "plus_re", "plus_im", "minus_re", "minus_im"});
  for (const auto& s : limit.curve_samples)
    curve.row({num(s.theta), num(s.plus.real()), num(s.plus.imag()), num(s.minus.real()), num(s.minus.imag())});
  CsvWriter outliers({"re", "im", "admissible"});
  for (const auto& o : limit.outliers) outliers.row({num(o.value.real()), num(o.value.imag()), o.admissible ? "1" : "0"});
  out.files.emplace_back("curve.csv", curve.str());
  out.files.emplace_back("outliers.csv", outliers.str());
}

std::vector<Series> limit_series(const LimitSpectrum& limit) {
  Series plus{{}, "#1f77b4", true, "limiting curve", true}, minus{{}, "#1f77b4", true, "", true};
  for (const auto& s : limit.curve_samples) {
    plus.points.emplace_back(s.plus.real(), s.plus.imag());
    minus.points.emplace_back(s.minus.real(), s.minus.imag());
  }
  Series outl{{}, "#2ca02c", false, "admissible outliers"};
  for (const auto& o : limit.outliers)
    if (o.admissible) outl.points.emplace_back(o.value.real(), o.value.imag());
  std::vector<Series> out{plus, minus};
  if (!outl.points.empty()) out.push_back(outl);
  return out;
}

Output run_spectrum(const Params& p) {
  Output out;
  const SchwarzParams sp = params_1d(p);
  SpectrumOptions opts = spectrum_options(p, out);
  opts.curve_samples = p.integer("curve_samples");
  const int N = p.integer("N");
  const auto c = coefficients_1d(sp);
  const auto report = spectrum(ToeplitzBlocks(c.a, c.b, N - 1), opts);

  std::vector<std::size_t> order(report.eigenvalues.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    const Complex x = report.eigenvalues[i], y = report.eigenvalues[j];
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  CsvWriter eig({"re", "im", "distance_to_limit"});
  Series pts{{}, "#d62728", false, "eigenvalues N=" + std::to_string(N)};
  for (std::size_t i : order) {
    const Complex z = report.eigenvalues[i];
    eig.row({num(z.real()), num(z.imag()), num(report.distances[i])});
    pts.points.emplace_back(z.real(), z.imag());
  }
  out.files.emplace_back("eigenvalues.csv", eig.str());
  add_limit_files(report.limit, out);
  auto series = limit_series(report.limit);
  series.push_back(pts);
  out.files.emplace_back("spectrum.svg", svg_plot("Iteration matrix spectrum", "Re", "Im", series, true));

  out.results["a"] = complex_json(c.a);
  out.results["b"] = complex_json(c.b);
  out.results["matrix_dimension"] = 2 * (N - 1);
  out.results["spectral_radius"] = report.spectral_radius;
  out.results["r1d_bound"] = r1d_bound(c.a, c.b);
  out.results["limit_sup_modulus"] = report.limit.sup_modulus;
  out.results["max_distance_to_limit"] = report.max_distance;
  out.results["mean_distance_to_limit"] = report.mean_distance;
  if (report.determinant_residual) out.results["determinant_residual"] = *report.determinant_residual;
  return out;
}

Output run_limit_curve(const Params& p) {
  Output out;
  const auto c = coefficients_1d(params_1d(p));
  const auto limit = limiting_spectrum(c.a, c.b, p.integer("curve_samples"));
  add_limit_files(limit, out);
  out.files.emplace_back("limit_curve.svg", svg_plot("Limiting spectrum", "Re", "Im", limit_series(limit), true));
  out.results["a"] = complex_json(c.a);
  out.results["b"] = complex_json(c.b);
  out.results["sup_modulus"] = limit.sup_modulus;
  out.results["r1d_bound"] = r1d_bound(c.a, c.b);
  return out;
}

Output run_factor_vs_N(const Params& p) {
  Output out;
  const SchwarzParams sp = params_1d(p);
  const auto Ns = p.integers("N_list");
  const auto curve = spectral_radius_curve(sp, Ns, {}, spectrum_options(p, out));
  const int steps = p.integer("iterate_steps");
  const auto seed = static_cast<std::uint64_t>(p.integer("seed"));
  if (steps > 0) out.seeds["iterate_seed"] = seed;

  std::vector<std::string> header{"N", "rho"};
  if (steps > 0) header.push_back("estimated_rate");
  CsvWriter csv(header);
  Series rho{{}, "#d62728", true, "spectral radius"};
  ordered_json rows = ordered_json::array();
  const auto c = coefficients_1d(sp);
  for (const auto& pt : curve) {
    std::vector<std::string> cells{std::to_string(pt.N), num(pt.rho)};
    ordered_json row{{"N", pt.N}, {"rho", pt.rho}};
    if (steps > 0) {
      const auto M = build_iteration_matrix(c.a, c.b, pt.N);
      const auto hist = iterate(M, InterfaceVector::random(pt.N, seed), steps);
      cells.push_back(num(hist.estimated_rate));
      row["estimated_rate"] = hist.estimated_rate;
    }
    csv.row(cells);
    rows.push_back(row);
    rho.points.emplace_back(pt.N, pt.rho);
  }
  const double bound = curve.empty() ? r1d_bound(c.a, c.b) : curve.front().bound;
  std::vector<std::string> last{"limit", num(bound)};
  if (steps > 0) last.emplace_back("");
  csv.row(last);
  out.files.emplace_back("rho_vs_N.csv", csv.str());

  Series bound_line{{}, "#1f77b4", true, "limiting bound"};
  if (!Ns.empty()) {
    bound_line.points.emplace_back(*std::min_element(Ns.begin(), Ns.end()), bound);
    bound_line.points.emplace_back(*std::max_element(Ns.begin(), Ns.end()), bound);
  }
  rho.markers = true;
  out.files.emplace_back("rho_vs_N.svg", svg_plot("Spectral radius against N", "N", "rho", {rho, bound_line}));
  out.results["points"] = rows;
  out.results["limiting_bound"] = bound;
  return out;
}

ModeTruncationPolicy truncation(const Params& p, Output& out) {
  ModeTruncationPolicy t;
  t.cap_factor = p.real("cap_factor");
  t.extra = p.integer("extra");
  t.tail_window = p.integer("tail_window");
  out.tolerances["cap_factor"] = t.cap_factor;
  out.tolerances["extra"] = t.extra;
  out.tolerances["tail_window"] = t.tail_window;
  return t;
}

Equation equation_of(const Params& p) { return p.text("equation") == "maxwell" ? Equation::maxwell : Equation::helmholtz; }

ordered_json sweep_summary(const ModeSweepReport& rep) {
  return {{"sup_factor", rep.sup_factor},
          {"argmax_mode", rep.argmax_mode.mode_index},
          {"argmax_k_tilde", rep.argmax_mode.k_tilde},
          {"truncation", rep.truncation},
          {"complete", rep.complete},
          {"rationale", rep.rationale}};
}

Output run_mode_sweep(const Params& p) {
  Output out;
  const SchwarzParams sp = params_1d(p);
  const Equation eq = equation_of(p);
  const auto rep = sup_convergence_factor(sp, p.real("L_hat"), eq, truncation(p, out));
  CsvWriter csv({"mode", "k_tilde", "evanescent", "a_re", "a_im", "b_re", "b_im", "factor", "g_plus", "g_minus", "g"});
  Series prop{{}, "#d62728", false, "propagating"}, evan{{}, "#1f77b4", false, "evanescent"};
  for (const auto& r : rep.per_mode) {
    const auto& g = r.g_values;
    csv.row({std::to_string(r.mode.mode_index), num(r.mode.k_tilde), r.mode.evanescent ? "1" : "0",
             num(r.coefficients.a.real()), num(r.coefficients.a.imag()), num(r.coefficients.b.real()),
             num(r.coefficients.b.imag()), num(r.r1d_mode), g ? num(g->g_plus) : "", g ? num(g->g_minus) : "",
             g ? num(g->g) : ""});
    (r.mode.evanescent ? evan : prop).points.emplace_back(r.mode.k_tilde, r.r1d_mode);
  }
  out.files.emplace_back("modes.csv", csv.str());
  std::vector<Series> series{prop, evan};
  if (!rep.per_mode.empty())
    series.push_back({{{rep.per_mode.front().mode.k_tilde, 1.0}, {rep.per_mode.back().mode.k_tilde, 1.0}}, "#999999", true, "factor 1"});
  out.files.emplace_back("modes.svg", svg_plot("Convergence factor per mode", "k_tilde", "factor", series));
  out.results = sweep_summary(rep);
  return out;
}

Output run_k_robust(const Params& p) {
  Output out;
  const double s0 = p.real("sigma0"), L0 = p.real("L0"), d0 = p.real("delta0");
  const Equation eq = equation_of(p);
  const auto policy = truncation(p, out);
  const double beta_max = p.real("beta_max");
  const int grid = p.integer("beta_grid");
  out.tolerances["beta_max"] = beta_max;
  out.tolerances["beta_grid"] = grid;
  CsvWriter csv({"k", "a_re", "a_im", "b_re", "b_im", "sweep_sup", "beta_sup", "argmax_beta", "gap", "truncation", "complete"});
  Series sweep_pts{{}, "#d62728", true, "mode sweep sup"}, beta_pts{{}, "#1f77b4", true, "beta bound"};
  ordered_json rows = ordered_json::array();
  for (double k : p.reals("k_list")) {
    const SchwarzParams sp = k_scaled_params(s0, L0, d0, k, 2);
    const auto c = coefficients_1d(sp);
    const auto rep = sup_convergence_factor(sp, p.real("L_hat"), eq, policy);
    const auto beta = beta_bound(s0, L0, d0, k, eq, beta_max, grid);
    const double gap = beta.sup - rep.sup_factor;
    csv.row({num(k), num(c.a.real()), num(c.a.imag()), num(c.b.real()), num(c.b.imag()), num(rep.sup_factor), num(beta.sup),
             num(beta.argmax_beta), num(gap), std::to_string(rep.truncation), rep.complete ? "1" : "0"});
    sweep_pts.points.emplace_back(std::log10(k), rep.sup_factor);
    beta_pts.points.emplace_back(std::log10(k), beta.sup);
    rows.push_back({{"k", k}, {"sweep_sup", rep.sup_factor}, {"beta_sup", beta.sup}, {"gap", gap}, {"complete", rep.complete}});
  }
  out.files.emplace_back("k_robust.csv", csv.str());
  out.files.emplace_back("k_robust.svg", svg_plot("k-scaled convergence factors", "log10 k", "factor", {sweep_pts, beta_pts}));
  out.results["rows"] = rows;
  return out;
}

Output run_nilpotency(const Params& p) {
  Output out;
  const double tol = p.real("nilpotency_tol");
  out.tolerances["nilpotency_tol"] = tol;
  CsvWriter csv({"N", "relative_norm"});
  ordered_json rows = ordered_json::array();
  bool all = true;
  for (int N : p.integers("N_list")) {
    const double v = nilpotency_check(p.real("k"), p.real("delta"), p.real("L"), N);
    csv.row({std::to_string(N), num(v)});
    rows.push_back({{"N", N}, {"relative_norm", v}, {"within_tolerance", v <= tol}});
    all = all && v <= tol;
  }
  out.files.emplace_back("nilpotency.csv", csv.str());
  out.results["norms"] = rows;
  out.results["all_within_tolerance"] = all;
  return out;
}

Output run_discrete_scan(const Params& p) {
  Output out;
  ScanOptions o;
  o.tol = p.real("tol");
  o.max_iter = p.integer("max_iter");
  o.grid_constant = p.real("grid_constant");
  o.overlap_cells = p.integer("overlap_cells");
  o.verify_direct = p.flag("verify_direct");
  out.tolerances["gmres_tol"] = o.tol;
  out.tolerances["gmres_max_iter"] = o.max_iter;
  out.tolerances["grid_constant"] = o.grid_constant;
  std::vector<BoundaryCase> cases;
  if (p.text("case") != "free-space") cases.push_back(BoundaryCase::wave_guide);
  if (p.text("case") != "wave-guide") cases.push_back(BoundaryCase::free_space);
  CountTable table;
  for (auto bc : cases) {
    auto t = scan_counts(p.reals("k_list"), p.integers("N_list"), p.real("sigma"), bc, o);
    table.rows.insert(table.rows.end(), t.rows.begin(), t.rows.end());
  }
  CsvWriter detail({"case", "k", "N", "n_per_unit", "iterations", "converged", "final_residual", "direct_error"});
  ordered_json rows = ordered_json::array();
  std::map<std::string, Series> series;
  const char* colors[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  for (const auto& r : table.rows) {
    detail.row({to_string(r.bc), num(r.k), std::to_string(r.N), std::to_string(r.n_per_unit), std::to_string(r.iterations),
                r.converged ? "1" : "0", num(r.final_residual), r.direct_error >= 0 ? num(r.direct_error) : ""});
    rows.push_back({{"case", to_string(r.bc)}, {"k", r.k}, {"N", r.N}, {"iterations", r.iterations}, {"converged", r.converged}});
    const std::string key = std::string(to_string(r.bc)) + " k=" + num(r.k);
    auto& s = series[key];
    if (s.color.empty()) s = {{}, colors[(series.size() - 1) % 6], true, key, false, true};
    s.points.emplace_back(r.N, r.iterations);
  }
  out.files.emplace_back("counts.csv", table.to_csv());
  out.files.emplace_back("counts_detail.csv", detail.str());
  std::vector<Series> list;
  for (auto& [_, s] : series) list.push_back(s);
  out.files.emplace_back("counts.svg", svg_plot("ORAS-GMRES iteration counts", "N", "iterations", list));
  out.results["rows"] = rows;
  return out;
}

Output dispatch(const std::string& name, const Params& p) {
  if (name == "spectrum") return run_spectrum(p);
  if (name == "limit-curve") return run_limit_curve(p);
  if (name == "factor-vs-N") return run_factor_vs_N(p);
  if (name == "mode-sweep") return run_mode_sweep(p);
  if (name == "k-robust") return run_k_robust(p);
  if (name == "nilpotency") return run_nilpotency(p);
  return run_discrete_scan(p);
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << contents;
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig config;
  std::istringstream in(text);
  std::string line;
  std::map<std::string, std::string> seen;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (!valid_key(key)) throw ConfigError("line " + std::to_string(lineno) + ": invalid key '" + key + "'");
    if (!seen.emplace(key, value).second) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
  }
  for (auto& [key, value] : seen) {
    if (key == "experiment") {
      config.experiment = value;
    } else if (key == "output_dir") {
      config.output_dir = value;
    } else {
      config.parameters.emplace(key, value);
    }
  }
  return config;
}

ExperimentConfig ExperimentConfig::load(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

const std::vector<ExperimentInfo>& list_experiments() {
  static const std::vector<ExperimentInfo> infos = [] {
    std::vector<ExperimentInfo> out;
    for (const auto& s : schemas()) out.push_back(s.info);
    return out;
  }();
  return infos;
}

std::vector<std::string> validate(const ExperimentConfig& config) {
  std::vector<std::string> diag;
  if (config.experiment.empty()) {
    diag.emplace_back("missing key 'experiment'");
    return diag;
  }
  const Schema* schema = find_schema(config.experiment);
  if (!schema) {
    std::string names;
    for (const auto& s : schemas()) names += (names.empty() ? "" : ", ") + s.info.name;
    diag.push_back("unknown experiment '" + config.experiment + "' (expected one of: " + names + ")");
    return diag;
  }
  for (const auto& [key, _] : config.parameters) {
    const bool known = std::any_of(schema->keys.begin(), schema->keys.end(), [&](const KeySpec& k) { return k.name == key; });
    if (!known) diag.push_back("unknown key '" + key + "' for experiment '" + config.experiment + "'");
  }
  std::vector<std::string> missing;
  for (const auto& k : schema->keys) {
    const auto it = config.parameters.find(k.name);
    if (it == config.parameters.end()) {
      if (k.fallback.empty()) missing.push_back(k.name);
      continue;
    }
    if (auto msg = check_value(k, it->second)) diag.push_back(*msg);
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    diag.push_back("missing required keys for " + config.experiment + ": " + list);
  }
  const auto sigma = config.parameters.find("sigma");
  if (sigma != config.parameters.end()) {
    const auto x = parse_real(sigma->second);
    if (x && *x == 0.0 && config.experiment != "nilpotency")
      diag.emplace_back("sigma must be > 0 outside the nilpotency experiment");
    if (x && *x != 0.0 && config.experiment == "nilpotency") diag.emplace_back("sigma must be 0 for the nilpotency experiment");
  }
  return diag;
}

RunResult run(const ExperimentConfig& config, const fs::path& output_dir_override) {
  RunResult result;
  result.diagnostics = validate(config);
  if (!result.diagnostics.empty()) {
    result.exit_code = 1;
    return result;
  }
  const Schema& schema = *find_schema(config.experiment);
  const Params params(schema, config);
  result.output_dir = !output_dir_override.empty() ? output_dir_override
                      : !config.output_dir.empty() ? fs::path(config.output_dir)
                                                   : fs::path("output");

  ordered_json manifest;
  manifest["artifact"] = "schwarzspec";
  manifest["version"] = SCHWARZSPEC_VERSION;
  manifest["experiment"] = config.experiment;
  manifest["parameters"] = params.to_json();
  try {
    fs::create_directories(result.output_dir);
  } catch (const std::exception& e) {
    result.exit_code = 2;
    result.error = e.what();
    return result;
  }
  try {
    Output out = dispatch(config.experiment, params);
    for (const auto& [name, contents] : out.files) {
      write_file(result.output_dir / name, contents);
      result.files.push_back(name);
    }
    manifest["tolerances"] = out.tolerances;
    manifest["seeds"] = out.seeds;
    manifest["outputs"] = result.files;
    manifest["status"] = "ok";
    manifest["results"] = out.results;
  } catch (const std::exception& e) {
    result.exit_code = 2;
    result.error = e.what();
    manifest["outputs"] = result.files;
    manifest["status"] = "failed";
    manifest["error"] = result.error;
  }
  try {
    write_file(result.output_dir / "manifest.json", manifest.dump(2) + "\n");
    result.files.push_back("manifest.json");
  } catch (const std::exception& e) {
    result.exit_code = 2;
    if (result.error.empty()) result.error = e.what();
  }
  return result;
}

}  // namespace schwarzspec
