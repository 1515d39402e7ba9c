#include "cli_app.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "hecke/decompositions.hpp"
#include "hecke/exterior.hpp"
#include "hecke/fourier.hpp"
#include "hecke/hecke_operator.hpp"
#include "hecke/monte_carlo.hpp"
#include "hecke/special_functions.hpp"

namespace hecke::cli {
namespace {

using Json = nlohmann::ordered_json;

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kMinSamples = 1000;

/// Invalid configuration, reported with the offending field name.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& what) : std::runtime_error(field + ": " + what) {}
};

struct Config {
  std::string command;
  int ell = -1;
  std::string epsilon;
  std::vector<double> gamma;
  double s_re = 2.0;
  double s_im = 0.0;
  double c = 1.0;
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
  double tol_sigma = 4.0;
  std::vector<std::string> points;
  std::string output;
  int workers = 1;
  bool timing = false;

  std::string e1, e1p, e2, e2p;
  double f_t = 2.0, f_rate = 1.0, g_t = 0.5, g_rate = 1.0;

  double eps_reg = 1e-3;
  double feynman_tol = 1e-2;
  int draws = 20;
};

Json complex_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

template <typename Derived>
Json matrix_json(const Eigen::MatrixBase<Derived>& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Json vector_json(const RealVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json estimate_json(const MCEstimate& e, std::optional<Complex> reference, double tol_sigma) {
  Json j;
  j["estimate"] = complex_json(e.mean);
  j["stderr"] = e.std_error;
  j["samples"] = e.samples;
  if (reference) {
    j["reference"] = complex_json(*reference);
    j["z_score"] = e.z_score(*reference);
    j["pass"] = e.z_score(*reference) <= tol_sigma;
  } else {
    j["reference"] = nullptr;
    j["z_score"] = nullptr;
    j["pass"] = true;
  }
  return j;
}

std::vector<double> parse_numbers(const std::string& text, const std::string& field) {
  std::vector<double> values;
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) throw ConfigError(field, "'" + token + "' is not a number");
    values.push_back(v);
    token.clear();
  };
  for (char ch : text) {
    if (ch == ',' || ch == ';' || std::isspace(static_cast<unsigned char>(ch))) {
      flush();
    } else {
      token.push_back(ch);
    }
  }
  flush();
  return values;
}

RealSquareMatrix square_from(const std::vector<double>& v, int n, const std::string& field) {
  if (n < 0) {
    n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(v.size()))));
  }
  if (n < 1 || static_cast<std::size_t>(n) * static_cast<std::size_t>(n) != v.size()) {
    throw ConfigError(field, "expected " + (n > 0 ? std::to_string(n * n) : std::string("a square number of")) +
                                 " entries, got " + std::to_string(v.size()));
  }
  RealSquareMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = v[static_cast<std::size_t>(i * n + j)];
  }
  return m;
}

/// A point is an inline row-major list or a path to a text file with one row
/// per line; blank lines in a file separate consecutive matrices.
std::vector<RealSquareMatrix> parse_points(const std::vector<std::string>& specs, int n, const std::string& field) {
  std::vector<RealSquareMatrix> out;
  for (const auto& item : specs) {
    if (std::filesystem::is_regular_file(item)) {
      std::ifstream in(item);
      std::string line, block;
      auto flush = [&] {
        if (block.find_first_not_of(" \t\r\n") == std::string::npos) return;
        out.push_back(square_from(parse_numbers(block, field), n, field));
        block.clear();
      };
      while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
          flush();
        } else {
          block += line + "\n";
        }
      }
      flush();
    } else {
      out.push_back(square_from(parse_numbers(item, field), n, field));
    }
  }
  return out;
}

int dimension(const Config& cfg) {
  if (cfg.ell < 0) throw ConfigError("ell", "is required");
  if (cfg.ell + 1 > kMaxDimension) throw ConfigError("ell", "must be at most " + std::to_string(kMaxDimension - 1));
  return cfg.ell + 1;
}

SpectralParams spectral(const Config& cfg) {
  const int n = dimension(cfg);
  if (cfg.gamma.size() != static_cast<std::size_t>(n)) {
    throw ConfigError("gamma", "needs ell+1 = " + std::to_string(n) + " values, got " +
                                   std::to_string(cfg.gamma.size()));
  }
  Signature eps;
  try {
    eps = Signature::parse(cfg.epsilon);
  } catch (const PreconditionError& e) {
    throw ConfigError("epsilon", e.what());
  }
  if (eps.size() != n) {
    throw ConfigError("epsilon", "needs ell+1 = " + std::to_string(n) + " bits, got " + std::to_string(eps.size()));
  }
  if (!(cfg.c > 0.0) || !std::isfinite(cfg.c)) throw ConfigError("c", "must be positive");
  if (!std::isfinite(cfg.s_re) || !std::isfinite(cfg.s_im)) throw ConfigError("s", "must be finite");
  RealVector gamma(n);
  for (int i = 0; i < n; ++i) gamma(i) = cfg.gamma[static_cast<std::size_t>(i)];
  return SpectralParams::make(Complex(cfg.s_re, cfg.s_im), cfg.c, gamma, eps);
}

Signature signature_field(const std::string& text, int n, const std::string& field) {
  Signature s;
  try {
    s = Signature::parse(text);
  } catch (const PreconditionError& e) {
    throw ConfigError(field, e.what());
  }
  if (s.size() != n) throw ConfigError(field, "needs " + std::to_string(n) + " bits");
  return s;
}

void require_samples(const Config& cfg) {
  if (cfg.samples < kMinSamples) throw ConfigError("samples", "must be at least " + std::to_string(kMinSamples));
  if (cfg.workers < 1) throw ConfigError("workers", "must be positive");
  if (!(cfg.tol_sigma > 0.0)) throw ConfigError("tol", "must be positive");
}

McOptions mc_options(const Config& cfg) {
  McOptions o;
  o.workers = cfg.workers;
  return o;
}

Json spectral_echo(const Config& cfg, const SpectralParams& p) {
  Json j;
  j["ell"] = cfg.ell;
  j["epsilon"] = p.epsilon.to_string();
  j["gamma"] = vector_json(p.gamma);
  j["s"] = complex_json(p.s);
  j["c"] = p.c;
  return j;
}

void mc_echo(Json& j, const Config& cfg) {
  j["samples"] = cfg.samples;
  j["seed"] = cfg.seed;
  j["tol_sigma"] = cfg.tol_sigma;
}

struct Outcome {
  Json config;
  Json results = Json::array();
  bool pass = true;

  void add(Json entry) {
    if (entry.contains("pass") && !entry["pass"].get<bool>()) pass = false;
    results.push_back(std::move(entry));
  }
};

// --- commands --------------------------------------------------------------

Outcome cmd_lfactor(const Config& cfg) {
  const auto p = spectral(cfg);
  Outcome o;
  o.config = spectral_echo(cfg, p);
  const auto value = l_factor(p);
  Json entry;
  entry["value"] = complex_json(value.value);
  entry["log_value"] = complex_json(log_l_factor(p));
  entry["pass"] = std::isfinite(value.value.real()) && std::isfinite(value.value.imag());
  o.add(entry);
  return o;
}

RealSquareMatrix single_matrix(const Config& cfg) {
  if (cfg.points.size() != 1) throw ConfigError("matrix", "exactly one matrix is required");
  const auto pts = parse_points(cfg.points, cfg.ell >= 0 ? cfg.ell + 1 : -1, "matrix");
  if (pts.size() != 1) throw ConfigError("matrix", "exactly one matrix is required");
  return pts.front();
}

Outcome cmd_iwasawa(const Config& cfg) {
  const RealSquareMatrix g = single_matrix(cfg);
  const int n = static_cast<int>(g.rows());
  const auto f = iwasawa_decompose(g);
  Outcome o;
  o.config["matrix"] = matrix_json(g);
  const double residual = (f.reconstruct() - g).norm();
  const double orth = (f.k.transpose() * f.k - RealSquareMatrix::Identity(n, n)).norm();
  Json entry;
  entry["k"] = matrix_json(f.k);
  entry["a"] = vector_json(f.a);
  entry["n"] = matrix_json(f.n);
  entry["residual"] = residual;
  entry["orthogonality_residual"] = orth;
  entry["pass"] = residual <= 1e-12 * g.norm() && orth <= 1e-12;
  o.add(entry);
  return o;
}

Outcome cmd_cartan(const Config& cfg) {
  const RealSquareMatrix g = single_matrix(cfg);
  const int n = static_cast<int>(g.rows());
  const auto f = cartan_decompose(g);
  Outcome o;
  o.config["matrix"] = matrix_json(g);
  const double residual = (f.reconstruct() - g).norm();
  const double orth = (f.k1.transpose() * f.k1 - RealSquareMatrix::Identity(n, n)).norm() +
                      (f.k2.transpose() * f.k2 - RealSquareMatrix::Identity(n, n)).norm();
  Json entry;
  entry["k1"] = matrix_json(f.k1);
  entry["a"] = vector_json(f.a);
  entry["k2"] = matrix_json(f.k2);
  entry["residual"] = residual;
  entry["orthogonality_residual"] = orth;
  entry["pass"] = residual <= 1e-12 * g.norm() && orth <= 1e-12;
  o.add(entry);
  return o;
}

std::vector<RealSquareMatrix> points_or_identity(const Config& cfg, int n) {
  if (cfg.points.empty()) return {RealSquareMatrix::Identity(n, n)};
  return parse_points(cfg.points, n, "point");
}

Outcome cmd_eigencheck(const Config& cfg) {
  const auto p = spectral(cfg);
  require_samples(cfg);
  const auto points = points_or_identity(cfg, p.dimension());
  ConvolutionOptions opts;
  opts.mc = mc_options(cfg);
  const auto report = eigenvalue_check(p, points, cfg.samples, RandomStream(cfg.seed), cfg.tol_sigma, opts);
  Outcome o;
  o.config = spectral_echo(cfg, p);
  mc_echo(o.config, cfg);
  Json pts = Json::array();
  for (const auto& g : points) pts.push_back(matrix_json(g));
  o.config["points"] = pts;
  for (const auto& v : report.points) {
    Json entry;
    entry["point"] = matrix_json(v.point);
    Json est = estimate_json(v.ratio, report.reference.value, cfg.tol_sigma);
    for (auto it = est.begin(); it != est.end(); ++it) entry[it.key()] = it.value();
    entry["phi"] = complex_json(v.phi);
    entry["convolution"] = complex_json(v.convolution.value.mean);
    entry["discarded"] = v.convolution.discarded;
    o.add(entry);
  }
  return o;
}

Outcome cmd_cartancheck(const Config& cfg) {
  const auto p = spectral(cfg);
  require_samples(cfg);
  const auto est = cartan_eigenvalue_estimate(p, cfg.samples, RandomStream(cfg.seed), mc_options(cfg));
  Outcome o;
  o.config = spectral_echo(cfg, p);
  mc_echo(o.config, cfg);
  Json entry = estimate_json(est, l_factor(p).value, cfg.tol_sigma);
  entry["weyl_fiber_order"] = weyl_fiber_order(p.dimension());
  o.add(entry);
  return o;
}

Outcome cmd_sphfun(const Config& cfg) {
  const auto p = spectral(cfg);
  require_samples(cfg);
  const int n = p.dimension();
  const auto points = points_or_identity(cfg, n);
  Outcome o;
  o.config = spectral_echo(cfg, p);
  mc_echo(o.config, cfg);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto est = spherical_function(p, points[i], cfg.samples, RandomStream(cfg.seed).substream(i), mc_options(cfg));
    std::optional<Complex> reference;
    if (points[i].isIdentity(0.0)) reference = 1.0 / static_cast<double>(graded_dimension(n, p.epsilon.weight()));
    Json entry;
    entry["point"] = matrix_json(points[i]);
    Json e = estimate_json(est, reference, cfg.tol_sigma);
    for (auto it = e.begin(); it != e.end(); ++it) entry[it.key()] = it.value();
    o.add(entry);
  }
  return o;
}

Outcome cmd_schur(const Config& cfg) {
  const int n = dimension(cfg);
  require_samples(cfg);
  Outcome o;
  o.config["ell"] = cfg.ell;
  mc_echo(o.config, cfg);
  const RandomStream root(cfg.seed);
  std::uint64_t idx = 0;
  for (int k1 = 0; k1 <= n; ++k1) {
    for (int k2 = 0; k2 <= n; ++k2) {
      const auto s1 = Signature::of_weight(n, k1);
      const auto s2 = Signature::of_weight(n, k2);
      // One diagonal-type and one crossed choice per grade pair.
      const std::array<std::array<Signature, 4>, 2> choices = {{
          {s1.front(), s1.back(), s2.back(), s2.front()},
          {s1.front(), s1.front(), s2.back(), s2.back()},
      }};
      for (const auto& ch : choices) {
        const auto est =
            schur_orthogonality_check(ch[0], ch[1], ch[2], ch[3], cfg.samples, root.substream(idx++), mc_options(cfg));
        Json entry;
        entry["grades"] = Json::array({k1, k2});
        entry["signatures"] =
            Json::array({ch[0].to_string(), ch[1].to_string(), ch[2].to_string(), ch[3].to_string()});
        Json e = estimate_json(est, Complex(schur_orthogonality_prediction(ch[0], ch[1], ch[2], ch[3])), cfg.tol_sigma);
        for (auto it = e.begin(); it != e.end(); ++it) entry[it.key()] = it.value();
        o.add(entry);
      }
    }
  }
  return o;
}

Outcome cmd_projector(const Config& cfg) {
  const int n = dimension(cfg);
  require_samples(cfg);
  std::vector<RealSquareMatrix> points;
  if (cfg.points.empty()) {
    points.push_back(RealSquareMatrix::Identity(n, n));
    RandomStream pick = RandomStream(cfg.seed).substream(1000);
    for (int i = 0; i < 2; ++i) {
      RealSquareMatrix k = sample_orthogonal(n, pick);
      // Keep to SO(n): on the other component Delta_W can vanish identically.
      if (k.determinant() < 0) k.col(0) *= -1.0;
      points.push_back(k);
    }
  } else {
    points = parse_points(cfg.points, n, "point");
  }
  Outcome o;
  o.config["ell"] = cfg.ell;
  mc_echo(o.config, cfg);
  const CompactFunction dw = [](const RealSquareMatrix& k) { return Complex(delta_W(k)); };
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto est = compact_convolution(dw, dw, points[i], cfg.samples, RandomStream(cfg.seed).substream(i),
                                         mc_options(cfg));
    Json entry;
    entry["point"] = matrix_json(points[i]);
    Json e = estimate_json(est, Complex(delta_W(points[i])), cfg.tol_sigma);
    for (auto it = e.begin(); it != e.end(); ++it) entry[it.key()] = it.value();
    o.add(entry);
  }
  return o;
}

Outcome cmd_ramified(const Config& cfg) {
  const int n = dimension(cfg);
  require_samples(cfg);
  const Signature e1 = signature_field(cfg.e1, n, "e1"), e1p = signature_field(cfg.e1p, n, "e1p");
  const Signature e2 = signature_field(cfg.e2, n, "e2"), e2p = signature_field(cfg.e2p, n, "e2p");
  const RealSquareMatrix g = cfg.points.empty() ? RealSquareMatrix::Identity(n, n) : single_matrix(cfg);
  const RadialProfile f{cfg.f_t, cfg.f_rate}, h{cfg.g_t, cfg.g_rate};
  const auto rep =
      ramified_convolution_check(f, h, e1, e1p, e2, e2p, g, cfg.samples, RandomStream(cfg.seed), cfg.tol_sigma,
                                 mc_options(cfg));
  Outcome o;
  o.config["ell"] = cfg.ell;
  o.config["signatures"] = Json::array({e1.to_string(), e1p.to_string(), e2.to_string(), e2p.to_string()});
  o.config["f"] = Json{{"t", f.t}, {"rate", f.rate}};
  o.config["g"] = Json{{"t", h.t}, {"rate", h.rate}};
  mc_echo(o.config, cfg);
  Json entry;
  entry["point"] = matrix_json(g);
  entry["estimate"] = complex_json(rep.left.mean);
  entry["stderr"] = rep.left.std_error;
  entry["samples"] = rep.left.samples;
  entry["reference"] = complex_json(rep.predicted);
  entry["z_score"] = rep.z_score;
  entry["pass"] = rep.pass;
  entry["scalar"] = complex_json(rep.scalar.mean);
  entry["factor"] = complex_json(rep.factor);
  entry["difference_stderr"] = rep.difference.std_error;
  entry["ratio"] = std::isfinite(rep.ratio.real()) ? complex_json(rep.ratio) : Json(nullptr);
  o.add(entry);
  return o;
}

Outcome cmd_fourier(const Config& cfg) {
  Outcome o;
  std::vector<int> dims;
  if (cfg.ell >= 0) {
    dims.push_back(dimension(cfg));
  } else {
    dims = {1, 2, 3, 4};
  }
  o.config["dimensions"] = dims;
  for (int n : dims) {
    const double err = verify_modified_gaussian_identity(n);
    o.add(Json{{"n", n}, {"terms", delta_W_polynomial(n).terms().size()}, {"max_coefficient_error", err},
               {"pass", err <= 1e-12}});
  }
  return o;
}

Outcome cmd_feynman(const Config& cfg) {
  const int n = dimension(cfg);
  if (!(cfg.eps_reg > 0.0)) throw ConfigError("eps-reg", "must be positive");
  if (!(cfg.feynman_tol > 0.0)) throw ConfigError("tol", "must be positive");
  std::vector<RealSquareMatrix> points;
  if (cfg.points.empty()) {
    points.push_back(RealSquareMatrix::Zero(n, n));
    RealSquareMatrix y(n, n);
    for (int i = 0; i < n * n; ++i) y(i / n, i % n) = 0.1 * (i + 1) * (i % 2 == 0 ? 1.0 : -1.0);
    points.push_back(y);
  } else {
    points = parse_points(cfg.points, n, "point");
  }
  const auto rep = feynman_phase_check(n, cfg.eps_reg, points, cfg.feynman_tol);
  Outcome o;
  o.config["ell"] = cfg.ell;
  o.config["eps_reg"] = cfg.eps_reg;
  o.config["tolerance"] = rep.tolerance;
  for (const auto& pt : rep.points) {
    o.add(Json{{"point", matrix_json(pt.y)},
               {"estimate", complex_json(pt.transform)},
               {"unextrapolated", complex_json(pt.raw)},
               {"reference", complex_json(pt.predicted)},
               {"phase", complex_json(rep.phase)},
               {"error", pt.error},
               {"pass", pt.error <= rep.tolerance}});
  }
  return o;
}

Outcome cmd_identities(const Config& cfg) {
  if (cfg.draws < 1) throw ConfigError("draws", "must be positive");
  Outcome o;
  o.config["seed"] = cfg.seed;
  o.config["draws"] = cfg.draws;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> re(0.5, 10.0), im(-5.0, 5.0);
  double legendre = 0.0, product = 0.0;
  for (int i = 0; i < cfg.draws; ++i) {
    const Complex s(re(rng), im(rng));
    const Complex g = gamma_fn(s);
    const Complex dup = std::pow(2.0, s - 1.0) / std::sqrt(kPi) * gamma_fn(s / 2.0) * gamma_fn((s + 1.0) / 2.0);
    legendre = std::max(legendre, std::abs(g - dup) / std::abs(g));
    RealVector zero = RealVector::Zero(1);
    const Complex glc = gl_c_l_factor(s, 1.0, zero);
    const Complex expected = std::pow(2.0, 1.0 - s) * std::sqrt(kPi) * g;
    product = std::max(product, std::abs(glc - expected) / std::abs(expected));
  }
  double oracle = 0.0;
  for (double x_re = 0.5; x_re <= 6.0 + 1e-9; x_re += 0.5) {
    for (double x_im = -3.0; x_im <= 3.0 + 1e-9; x_im += 1.0) {
      const Complex x(x_re, x_im);
      const Complex expected = 0.5 * std::exp(log_gamma(x / 2.0));
      oracle = std::max(oracle, std::abs(gamma_integral_oracle(x, 1.0) - expected) / std::abs(expected));
    }
  }
  o.add(Json{{"identity", "legendre_duplication"}, {"max_relative_error", legendre}, {"tolerance", 1e-12},
             {"pass", legendre <= 1e-12}});
  o.add(Json{{"identity", "gl_c_product"}, {"max_relative_error", product}, {"tolerance", 1e-12},
             {"pass", product <= 1e-12}});
  o.add(Json{{"identity", "gamma_integral_oracle"}, {"max_relative_error", oracle}, {"tolerance", 1e-8},
             {"pass", oracle <= 1e-8}});
  return o;
}

// --- option wiring ---------------------------------------------------------

void add_spectral(CLI::App* sub, Config& cfg) {
  sub->add_option("--ell", cfg.ell, "rank ell (dimension ell+1)")->required();
  sub->add_option("--epsilon", cfg.epsilon, "signature bits, e.g. 101 or 1,0,1")->required();
  sub->add_option("--gamma", cfg.gamma, "gamma_1..gamma_{ell+1}")->delimiter(',')->required();
  sub->add_option("--s-re", cfg.s_re, "Re s");
  sub->add_option("--s-im", cfg.s_im, "Im s");
  sub->add_option("--c", cfg.c, "Gaussian rate c > 0");
}

void add_mc(CLI::App* sub, Config& cfg) {
  sub->add_option("--samples", cfg.samples, "Monte Carlo sample count");
  sub->add_option("--seed", cfg.seed, "random seed")->envname("HECKE_SEED");
  sub->add_option("--tol", cfg.tol_sigma, "tolerance in standard errors");
  sub->add_option("--workers", cfg.workers, "worker threads (does not change results)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"Hecke-Baxter operator checks"};
  app.require_subcommand(1);
  app.add_option("--output", cfg.output, "write the JSON report here instead of stdout");
  app.add_flag("--timing", cfg.timing, "record elapsed_seconds (reports are then not reproducible)");

  std::map<std::string, std::function<Outcome(const Config&)>> commands;
  auto command = [&](const char* name, const char* help, std::function<Outcome(const Config&)> fn) {
    commands[name] = std::move(fn);
    return app.add_subcommand(name, help);
  };

  auto* lf = command("lfactor", "L(s,c|eps,gamma)", cmd_lfactor);
  add_spectral(lf, cfg);

  auto* iw = command("iwasawa", "g = k a n", cmd_iwasawa);
  iw->add_option("--matrix", cfg.points, "row-major entries or file")->required()->expected(1);
  iw->add_option("--ell", cfg.ell, "rank (optional, inferred from the matrix)");
  auto* ca = command("cartan", "g = k1 a k2", cmd_cartan);
  ca->add_option("--matrix", cfg.points, "row-major entries or file")->required()->expected(1);
  ca->add_option("--ell", cfg.ell, "rank (optional, inferred from the matrix)");

  auto* ec = command("eigencheck", "convolution eigenvalue against the L-factor", cmd_eigencheck);
  add_spectral(ec, cfg);
  add_mc(ec, cfg);
  ec->add_option("--point", cfg.points, "evaluation point (repeatable): row-major entries or file");

  auto* cc = command("cartancheck", "eigenvalue in polar Cartan coordinates", cmd_cartancheck);
  add_spectral(cc, cfg);
  add_mc(cc, cfg);

  auto* sf = command("sphfun", "spherical function Phi_{eps,gamma}", cmd_sphfun);
  add_spectral(sf, cfg);
  add_mc(sf, cfg);
  sf->add_option("--point", cfg.points, "evaluation point (repeatable); default identity");

  auto* sc = command("schur", "orthogonality of minor matrix elements", cmd_schur);
  sc->add_option("--ell", cfg.ell)->required();
  add_mc(sc, cfg);

  auto* pr = command("projector", "Delta_W * Delta_W = Delta_W on O(n)", cmd_projector);
  pr->add_option("--ell", cfg.ell)->required();
  add_mc(pr, cfg);
  pr->add_option("--point", cfg.points, "orthogonal evaluation point (repeatable)");

  auto* ra = command("ramified", "convolution of graded matrix elements", cmd_ramified);
  ra->add_option("--ell", cfg.ell)->required();
  ra->add_option("--e1", cfg.e1)->required();
  ra->add_option("--e1p", cfg.e1p)->required();
  ra->add_option("--e2", cfg.e2)->required();
  ra->add_option("--e2p", cfg.e2p)->required();
  ra->add_option("--f-t", cfg.f_t, "F = |det|^t exp(-rate tr)");
  ra->add_option("--f-rate", cfg.f_rate);
  ra->add_option("--g-t", cfg.g_t);
  ra->add_option("--g-rate", cfg.g_rate);
  ra->add_option("--matrix", cfg.points, "evaluation point; default identity")->expected(1);
  add_mc(ra, cfg);

  auto* fo = command("fourier", "exact modified-Gaussian identity", cmd_fourier);
  fo->add_option("--ell", cfg.ell, "single rank; default ell = 0..3");

  auto* fe = command("feynman", "Feynman-measure phase", cmd_feynman);
  fe->add_option("--ell", cfg.ell)->required();
  fe->add_option("--eps-reg", cfg.eps_reg);
  fe->add_option("--tol", cfg.feynman_tol, "absolute tolerance");
  fe->add_option("--point", cfg.points, "sample point (repeatable)");

  auto* id = command("identities", "Legendre, GL(C) product and Gamma-integral checks", cmd_identities);
  id->add_option("--seed", cfg.seed)->envname("HECKE_SEED");
  id->add_option("--draws", cfg.draws, "random s values");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  for (const auto* sub : app.get_subcommands()) cfg.command = sub->get_name();

  const auto start = std::chrono::steady_clock::now();
  Outcome outcome;
  try {
    outcome = commands.at(cfg.command)(cfg);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const PreconditionError& e) {
    err << "precondition violated: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SingularMatrixError& e) {
    err << "precondition violated: " << e.what() << "\n";
    return kExitConfig;
  } catch (const PoleError& e) {
    err << "precondition violated: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    err << "run failed: " << e.what() << "\n";
    return kExitFail;
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  Json report;
  report["command"] = cfg.command;
  report["config"] = outcome.config;
  report["results"] = outcome.results;
  report["pass"] = outcome.pass;
  report["elapsed_seconds"] = cfg.timing ? Json(elapsed) : Json(nullptr);
  const std::string text = report.dump(2) + "\n";

  if (cfg.output.empty()) {
    out << text;
  } else {
    std::ofstream file(cfg.output, std::ios::binary);
    if (!file) {
      err << "config error: output: cannot open '" << cfg.output << "'\n";
      return kExitConfig;
    }
    file << text;
  }
  return outcome.pass ? kExitPass : kExitFail;
}

}  // namespace hecke::cli
