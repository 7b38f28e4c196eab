#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "blt/blt_all.hpp"
#include "blt/io.hpp"

namespace blt::cli {
namespace {

using nlohmann::json;

// Carries an exit code out of a command body.
struct Exit {
  int code;
  std::string message;
};

struct Context {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
  std::size_t max_dense_n = tol::kDefaultMaxDenseN;
};

std::string read_all(const std::string& path, std::istream& in) {
  if (path == "-") return {std::istreambuf_iterator<char>(in), {}};
  std::ifstream file(path);
  if (!file) throw Exit{kParseError, "cannot open " + path};
  return {std::istreambuf_iterator<char>(file), {}};
}

json read_json(const std::string& path, std::istream& in) {
  try {
    return io::parse(read_all(path, in));
  } catch (const io::ParseError& e) {
    throw Exit{kParseError, path + ": " + e.what()};
  }
}

BltParams read_params(const std::string& path, std::istream& in) {
  const json j = read_json(path, in);
  try {
    return io::params_from_json(j);
  } catch (const io::ParseError& e) {
    throw Exit{kParseError, path + ": " + e.what()};
  }
}

int code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kInvalidParams:
    case ErrorCode::kInitInvalid:
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kDuplicateDecay:
    case ErrorCode::kSingularWorkload:
    case ErrorCode::kSizeLimit:
      return kInvalidParams;
    default:
      return kNumericFailure;
  }
}

Objective objective_of(const std::string& name, double temperature) {
  if (name == "frobenius") return Objective::frobenius();
  if (name == "softmax") return Objective::soft_max(temperature);
  return Objective::max();
}

std::vector<double> ascending_poles(const BltParams& params) {
  std::vector<double> mu;
  for (double l : params.lambda) mu.push_back(1.0 / l);
  std::sort(mu.begin(), mu.end());
  return mu;
}

// Decays sorted descending with their scales carried along.
InverseBltParams canonical_inverse(InverseBltParams inv) {
  std::vector<std::size_t> order(inv.lambda_hat.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return inv.lambda_hat[a] > inv.lambda_hat[b];
  });
  InverseBltParams out;
  out.regime = inv.regime;
  for (std::size_t i : order) {
    out.alpha_hat.push_back(inv.alpha_hat[i]);
    out.lambda_hat.push_back(inv.lambda_hat[i]);
  }
  return out;
}

// ---------------------------------------------------------------- invert

struct InvertArgs {
  std::string input = "-";
};

void invert(const Context& ctx, const InvertArgs& a) {
  const BltParams params = read_params(a.input, ctx.in);
  ctx.out << io::to_json(invert_params(params)).dump() << "\n";
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::string input = "-";
  std::vector<std::size_t> sizes{256};
  std::string expect;
  double tol = 1e-10;
};

bool placement_holds(const BltParams& params, const InverseBltParams& inv) {
  const std::size_t d = params.degree();
  if (inv.lambda_hat.size() != d) return false;
  for (std::size_t i = 0; i < d; ++i) {
    if (!(params.lambda[i] > inv.lambda_hat[i])) return false;
    if (i + 1 < d && !(inv.lambda_hat[i] > params.lambda[i + 1])) return false;
  }
  const double last = inv.lambda_hat.back();
  switch (inv.regime) {
    case Regime::kLT1: return last > 0.0;
    case Regime::kEQ1: return std::abs(last) <= 1e-9;
    case Regime::kGT1: return last < 0.0 && last > -1.0;
  }
  return false;
}

void verify(const Context& ctx, const VerifyArgs& a) {
  const BltParams params = canonical(read_params(a.input, ctx.in));
  const InverseBltParams computed = invert_params(params);
  InverseBltParams checked = computed;
  json report;
  report["regime"] = to_string(computed.regime);
  if (!a.expect.empty()) {
    try {
      checked = canonical_inverse(io::inverse_from_json(read_json(a.expect, ctx.in)));
    } catch (const io::ParseError& e) {
      throw Exit{kParseError, a.expect + ": " + e.what()};
    }
    double deviation = std::numeric_limits<double>::infinity();
    if (checked.lambda_hat.size() == computed.lambda_hat.size()) {
      deviation = 0.0;
      for (std::size_t i = 0; i < checked.lambda_hat.size(); ++i) {
        deviation = std::max({deviation, std::abs(checked.lambda_hat[i] - computed.lambda_hat[i]),
                              std::abs(checked.alpha_hat[i] - computed.alpha_hat[i])});
      }
    }
    report["expect_deviation"] = deviation;
  }
  bool pass = checked.alpha_hat.size() == checked.lambda_hat.size() &&
              checked.lambda_hat.size() == params.degree();

  json products = json::object();
  for (std::size_t n : a.sizes) {
    double residual = std::numeric_limits<double>::infinity();
    if (pass) {
      std::vector<double> e(n, 0.0);
      if (n > 0) e[0] = 1.0;
      residual = series_product_check(toeplitz_coeffs(params, n),
                                      toeplitz_coeffs(checked.as_blt(), n), e);
    }
    products[std::to_string(n)] = residual;
    pass = pass && residual <= a.tol;
  }
  report["product_residual"] = products;

  const bool placement = placement_holds(params, checked);
  bool negative = true;
  for (double s : checked.alpha_hat) negative = negative && s < 0.0;
  const Polynomial p = build_p(params.alpha, params.lambda);
  const std::vector<double> mu = ascending_poles(params);
  bool alternating = true;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double beta = p(mu[i]);
    alternating = alternating && (i % 2 == 0 ? beta > 0.0 : beta < 0.0);
  }
  report["interlacing"] = placement;
  report["alpha_hat_negative"] = negative;
  report["beta_alternates"] = alternating;
  pass = pass && placement && negative && alternating;

  std::optional<double> identity;
  if (checked.lambda_hat.size() == params.degree()) {
    identity = scale_identity_residual(params.lambda, checked.lambda_hat, checked.alpha_hat);
  }
  if (identity) {
    report["identity_residual"] = *identity;
    pass = pass && *identity <= a.tol;
  } else {
    report["identity_residual"] = nullptr;
  }
  report["tolerance"] = a.tol;
  report["pass"] = pass;
  ctx.out << report.dump() << "\n";
  if (!pass) throw Exit{kNumericFailure, "verification failed"};
}

// ---------------------------------------------------------------- coeffs

struct CoeffsArgs {
  std::string input = "-";
  std::size_t n = 16;
  std::string format = "json";
  bool matrix = false;
};

void coeffs(const Context& ctx, const CoeffsArgs& a) {
  const BltParams params = read_params(a.input, ctx.in);
  if (a.matrix) {
    const Eigen::MatrixXd m = materialize(params, a.n, ctx.max_dense_n);
    if (a.format == "csv") {
      const Eigen::IOFormat csv(Eigen::FullPrecision, Eigen::DontAlignCols, ",", "\n");
      ctx.out << m.format(csv) << "\n";
    } else {
      json rows = json::array();
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
      }
      ctx.out << json{{"n", a.n}, {"matrix", rows}}.dump() << "\n";
    }
    return;
  }
  const InverseBltParams inv = invert_params(params);
  const auto c = toeplitz_coeffs(params, a.n);
  const auto ch = toeplitz_coeffs(inv.as_blt(), a.n);
  if (a.format == "csv") {
    ctx.out << "k,c,c_hat\n";
    ctx.out.precision(17);
    for (std::size_t k = 0; k < a.n; ++k) ctx.out << k << "," << c[k] << "," << ch[k] << "\n";
  } else {
    ctx.out << json{{"n", a.n}, {"c", c}, {"c_hat", ch}}.dump() << "\n";
  }
}

// ---------------------------------------------------------------- loss

struct LossArgs {
  std::string input = "-";
  std::size_t n = 256;
  std::string objective = "max";
  double temperature = 0.05;
  std::string workload;
  bool rows = false;
};

WorkloadSpec read_workload(const std::string& path, std::istream& in) {
  const json j = read_json(path, in);
  if (!j.is_array() || j.empty()) throw Exit{kParseError, path + ": expected a square array"};
  const auto n = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw Exit{kParseError, path + ": expected a square array"};
    }
    for (Eigen::Index k = 0; k < n; ++k) {
      const json& v = row[static_cast<std::size_t>(k)];
      if (!v.is_number()) throw Exit{kParseError, path + ": non-numeric entry"};
      a(i, k) = v.get<double>();
    }
  }
  return WorkloadSpec::explicit_lower(std::move(a));
}

void loss(const Context& ctx, const LossArgs& a) {
  const BltParams params = read_params(a.input, ctx.in);
  const ValidationReport report = validate(params, ValidationMode::kStrict);
  if (!report) throw Error(ErrorCode::kInvalidParams, report.summary());
  const WorkloadSpec workload =
      a.workload.empty() ? WorkloadSpec::prefix_sum(a.n) : read_workload(a.workload, ctx.in);
  json j = io::to_json(max_loss(params, workload), a.rows);
  j["n"] = workload.n();
  j["objective"] = a.objective;
  j["objective_value"] = objective_value(params, workload, objective_of(a.objective, a.temperature));
  ctx.out << j.dump() << "\n";
}

// ---------------------------------------------------------------- optimize

struct OptimizeArgs {
  std::string input;
  OptConfig cfg;
  std::string objective = "max";
  double temperature = 0.05;
  std::string trace;
};

void optimize_cmd(const Context& ctx, OptimizeArgs a) {
  if (!a.input.empty()) a.cfg.init = read_params(a.input, ctx.in);
  a.cfg.objective = objective_of(a.objective, a.temperature);
  const OptResult result = optimize(a.cfg);
  if (!a.trace.empty()) {
    std::ofstream trace(a.trace);
    if (!trace) throw Exit{kParseError, "cannot write " + a.trace};
    for (const auto& rec : result.trace.records) trace << io::to_json(rec).dump() << "\n";
  }
  json j;
  j["params"] = io::to_json(result.params);
  j["inverse"] = io::to_json(result.inverse);
  j["loss"] = result.loss;
  j["gradient_norm"] = result.gradient_norm;
  j["iterations"] = result.iterations;
  ctx.out << j.dump() << "\n";
}

// ---------------------------------------------------------------- stream-demo

struct StreamArgs {
  std::string input = "-";
  std::size_t steps = 16;
  std::size_t m = 1;
  double sigma = 1.0;
  std::optional<double> rho;
  std::optional<double> sensitivity;
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string out = "-";
};

void stream_demo(const Context& ctx, const StreamArgs& a) {
  const BltParams params = read_params(a.input, ctx.in);
  const InverseBltParams inv = invert_params(params);
  const double sens = a.sensitivity ? *a.sensitivity : sensitivity(params, a.steps);
  NoiseConfig cfg = a.rho ? NoiseConfig::from_rho(*a.rho, sens, a.seed, a.m) : NoiseConfig{};
  if (!a.rho) {
    cfg.sigma = a.sigma;
    cfg.sensitivity = sens;
    cfg.seed = a.seed;
    cfg.m = a.m;
  }
  cfg.validate();

  std::ofstream file;
  if (a.out != "-") {
    file.open(a.out, a.format == "bin" ? std::ios::binary : std::ios::out);
    if (!file) throw Exit{kParseError, "cannot write " + a.out};
  }
  std::ostream& out = a.out == "-" ? ctx.out : file;
  NoiseStream stream(inv, cfg);
  std::vector<double> row(a.m);
  if (a.format == "bin") {
    write_row_header(out, static_cast<std::uint32_t>(a.steps), static_cast<std::uint32_t>(a.m));
    for (std::size_t t = 0; t < a.steps; ++t) {
      stream.next(row);
      write_row(out, row);
    }
  } else if (a.format == "csv") {
    out << "t";
    for (std::size_t j = 0; j < a.m; ++j) out << ",z" << j;
    out << "\n";
    out.precision(17);
    for (std::size_t t = 0; t < a.steps; ++t) {
      stream.next(row);
      out << t;
      for (double v : row) out << "," << v;
      out << "\n";
    }
  } else {
    json rows = json::array();
    for (std::size_t t = 0; t < a.steps; ++t) {
      stream.next(row);
      rows.push_back(row);
    }
    out << json{{"sigma", cfg.sigma}, {"sensitivity", cfg.sensitivity}, {"seed", cfg.seed},
                {"rows", rows}}.dump()
        << "\n";
  }
  if (!out) throw Exit{kParseError, "write failed"};
}

// ---------------------------------------------------------------- plot-polys

struct PlotArgs {
  std::string input = "-";
  std::string grid = "-3:6:361";
};

struct Grid {
  double lo, hi;
  std::size_t steps;
};

Grid parse_grid(const std::string& text) {
  std::istringstream s(text);
  Grid g{};
  char c1 = 0, c2 = 0;
  long long steps = 0;
  if (!(s >> g.lo >> c1 >> g.hi >> c2 >> steps) || c1 != ':' || c2 != ':' || !s.eof() ||
      steps < 2 || !(g.hi > g.lo)) {
    throw Exit{kParseError, "--grid expects LO:HI:STEPS with LO < HI and STEPS >= 2"};
  }
  g.steps = static_cast<std::size_t>(steps);
  return g;
}

void plot_polys(const Context& ctx, const PlotArgs& a) {
  const Grid grid = parse_grid(a.grid);
  const BltParams params = canonical(read_params(a.input, ctx.in));
  const InverseBltParams inv = invert_params(params);
  const Polynomial p = build_p(params.alpha, params.lambda);
  const Polynomial q = build_q(params.lambda);
  const Polynomial r = build_r(p, q);
  std::ostream& out = ctx.out;
  out.precision(17);
  out << "x,p,q,r\n";
  for (std::size_t k = 0; k < grid.steps; ++k) {
    const double x = grid.lo + (grid.hi - grid.lo) * static_cast<double>(k) /
                                   static_cast<double>(grid.steps - 1);
    out << x << "," << p(x) << "," << q(x) << "," << r(x) << "\n";
  }
  out << "\nmarker,index,x,p\n";
  const std::vector<double> mu = ascending_poles(params);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    out << "mu," << i + 1 << "," << mu[i] << "," << p(mu[i]) << "\n";
  }
  std::vector<double> nu;
  for (double l : inv.lambda_hat) {
    if (l != 0.0) nu.push_back(1.0 / l);
  }
  std::sort(nu.begin(), nu.end());
  for (std::size_t i = 0; i < nu.size(); ++i) {
    out << "nu," << i + 1 << "," << nu[i] << "," << p(nu[i]) << "\n";
  }
}

std::size_t dense_cap_from_env() {
  const char* value = std::getenv("BLT_MAX_DENSE_N");
  if (value == nullptr || *value == '\0') return tol::kDefaultMaxDenseN;
  char* end = nullptr;
  const unsigned long long n = std::strtoull(value, &end, 10);
  if (*end != '\0' || n == 0) throw Exit{kParseError, "BLT_MAX_DENSE_N must be a positive integer"};
  return static_cast<std::size_t>(n);
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Inverse BLT factorization tool", "blt"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every command");

  auto input_flag = [](CLI::App* cmd, std::string& target) {
    cmd->add_option("--input", target, "Parameter JSON file, or - for stdin")->capture_default_str();
  };

  InvertArgs invert_args;
  auto* invert_cmd = app.add_subcommand("invert", "Inverse parameters of a BLT");
  input_flag(invert_cmd, invert_args.input);

  VerifyArgs verify_args;
  auto* verify_cmd = app.add_subcommand("verify", "Check an inversion against its invariants");
  input_flag(verify_cmd, verify_args.input);
  verify_cmd->add_option("--n", verify_args.sizes, "Matrix sizes for the product check")
      ->delimiter(',')
      ->capture_default_str();
  verify_cmd->add_option("--expect", verify_args.expect, "Inverse JSON to check instead of computing it");
  verify_cmd->add_option("--tol", verify_args.tol, "Residual tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  CoeffsArgs coeffs_args;
  auto* coeffs_cmd = app.add_subcommand("coeffs", "Toeplitz coefficients of C and its inverse");
  input_flag(coeffs_cmd, coeffs_args.input);
  coeffs_cmd->add_option("--n", coeffs_args.n, "Number of coefficients")->capture_default_str();
  coeffs_cmd->add_option("--format", coeffs_args.format)
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  coeffs_cmd->add_flag("--matrix", coeffs_args.matrix,
                       "Print the dense n x n matrix (capped by BLT_MAX_DENSE_N)");

  LossArgs loss_args;
  auto* loss_cmd = app.add_subcommand("loss", "Max and Frobenius loss of the factorization");
  input_flag(loss_cmd, loss_args.input);
  loss_cmd->add_option("--n", loss_args.n, "Prefix-sum length")->capture_default_str();
  loss_cmd->add_option("--objective", loss_args.objective)
      ->check(CLI::IsMember({"max", "frobenius", "softmax"}))
      ->capture_default_str();
  loss_cmd->add_option("--temperature", loss_args.temperature, "Softmax temperature")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  loss_cmd->add_option("--workload", loss_args.workload,
                       "JSON array of a lower-triangular workload (replaces prefix sums)");
  loss_cmd->add_flag("--rows", loss_args.rows, "Include per-row norms");

  OptimizeArgs opt_args;
  auto* opt_cmd = app.add_subcommand("optimize", "Optimize BLT parameters for a workload");
  opt_cmd->add_option("--input", opt_args.input, "Starting parameters (random when omitted)");
  opt_cmd->add_option("--d", opt_args.cfg.d, "Degree")->check(CLI::PositiveNumber)->capture_default_str();
  opt_cmd->add_option("--n", opt_args.cfg.n, "Prefix-sum length")->check(CLI::PositiveNumber)->capture_default_str();
  opt_cmd->add_option("--steps", opt_args.cfg.steps)->capture_default_str();
  opt_cmd->add_option("--lr", opt_args.cfg.learning_rate)->check(CLI::PositiveNumber)->capture_default_str();
  opt_cmd->add_option("--momentum", opt_args.cfg.momentum)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  opt_cmd->add_option("--barrier", opt_args.cfg.barrier_weight)->capture_default_str();
  opt_cmd->add_option("--barrier-decay", opt_args.cfg.barrier_decay)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  opt_cmd->add_option("--tol", opt_args.cfg.gradient_tolerance, "Gradient norm for early stopping")->capture_default_str();
  opt_cmd->add_option("--seed", opt_args.cfg.seed)->capture_default_str();
  opt_cmd->add_option("--objective", opt_args.objective)
      ->check(CLI::IsMember({"max", "frobenius", "softmax"}))
      ->capture_default_str();
  opt_cmd->add_option("--temperature", opt_args.temperature)->check(CLI::PositiveNumber)->capture_default_str();
  opt_cmd->add_option("--trace", opt_args.trace, "Write the iterate trace as JSON lines");
  opt_cmd->add_option("--trace-every", opt_args.cfg.trace_every)->check(CLI::PositiveNumber)->capture_default_str();

  StreamArgs stream_args;
  auto* stream_cmd = app.add_subcommand("stream-demo", "Stream correlated noise rows C^-1 Z");
  input_flag(stream_cmd, stream_args.input);
  stream_cmd->add_option("--steps", stream_args.steps)->capture_default_str();
  stream_cmd->add_option("--m", stream_args.m, "Row width")->check(CLI::PositiveNumber)->capture_default_str();
  auto* sigma_opt = stream_cmd->add_option("--sigma", stream_args.sigma)->capture_default_str();
  stream_cmd->add_option("--rho", stream_args.rho, "zCDP budget; sets sigma^2 = 1/(2 rho)")
      ->check(CLI::PositiveNumber)
      ->excludes(sigma_opt);
  stream_cmd->add_option("--sensitivity", stream_args.sensitivity,
                         "Defaults to the sensitivity of C over --steps");
  stream_cmd->add_option("--seed", stream_args.seed)->capture_default_str();
  stream_cmd->add_option("--format", stream_args.format)
      ->check(CLI::IsMember({"json", "csv", "bin"}))
      ->capture_default_str();
  stream_cmd->add_option("--out", stream_args.out, "Output file, or - for stdout")->capture_default_str();

  PlotArgs plot_args;
  auto* plot_cmd = app.add_subcommand("plot-polys", "CSV of p, q, r on a grid with pole and root markers");
  input_flag(plot_cmd, plot_args.input);
  plot_cmd->add_option("--grid", plot_args.grid, "LO:HI:STEPS")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParseError;
  }

  try {
    const Context ctx{in, out, err, dense_cap_from_env()};
    if (invert_cmd->parsed()) invert(ctx, invert_args);
    if (verify_cmd->parsed()) verify(ctx, verify_args);
    if (coeffs_cmd->parsed()) coeffs(ctx, coeffs_args);
    if (loss_cmd->parsed()) loss(ctx, loss_args);
    if (opt_cmd->parsed()) optimize_cmd(ctx, opt_args);
    if (stream_cmd->parsed()) stream_demo(ctx, stream_args);
    if (plot_cmd->parsed()) plot_polys(ctx, plot_args);
  } catch (const Exit& e) {
    err << "blt: " << e.message << "\n";
    return e.code;
  } catch (const Error& e) {
    err << "blt: " << e.what() << "\n";
    return code_for(e);
  } catch (const std::exception& e) {
    err << "blt: " << e.what() << "\n";
    return kNumericFailure;
  }
  return kOk;
}

}  // namespace blt::cli
