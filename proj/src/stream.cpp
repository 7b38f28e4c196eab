#include "blt/stream.hpp"

#include <bit>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "blt/errors.hpp"

namespace blt {

StreamState::StreamState(BltParams params, std::size_t width)
    : params_(std::move(params)),
      width_(width),
      buffers_(params_.degree() * width, 0.0) {
  if (params_.alpha.size() != params_.lambda.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "alpha and lambda differ in length");
  }
}

std::span<const double> StreamState::buffer(std::size_t channel) const {
  return std::span<const double>(buffers_).subspan(channel * width_, width_);
}

void StreamState::correction(std::span<double> out) const {
  for (std::size_t i = 0; i < params_.degree(); ++i) {
    const double a = params_.alpha[i];
    const double* s = buffers_.data() + i * width_;
    for (std::size_t k = 0; k < width_; ++k) out[k] += a * s[k];
  }
}

void StreamState::push(std::span<const double> x) {
  for (std::size_t i = 0; i < params_.degree(); ++i) {
    const double l = params_.lambda[i];
    double* s = buffers_.data() + i * width_;
    for (std::size_t k = 0; k < width_; ++k) s[k] = l * s[k] + x[k];
  }
  ++t_;
}

namespace {

void check_width(std::size_t got, std::size_t want) {
  if (got != want) {
    throw Error(ErrorCode::kDimensionMismatch,
                "row has width " + std::to_string(got) + ", stream expects " +
                    std::to_string(want));
  }
}

}  // namespace

void StreamState::step_multiply(std::span<const double> x, std::span<double> y) {
  check_width(x.size(), width_);
  check_width(y.size(), width_);
  std::copy(x.begin(), x.end(), y.begin());
  correction(y);
  push(x);
}

std::vector<double> StreamState::step_multiply(std::span<const double> x) {
  std::vector<double> y(width_);
  step_multiply(x, y);
  return y;
}

void StreamState::step_solve(std::span<const double> y, std::span<double> x) {
  check_width(y.size(), width_);
  check_width(x.size(), width_);
  std::copy(y.begin(), y.end(), x.begin());
  for (std::size_t i = 0; i < params_.degree(); ++i) {
    const double a = params_.alpha[i];
    const double* s = buffers_.data() + i * width_;
    for (std::size_t k = 0; k < width_; ++k) x[k] -= a * s[k];
  }
  push(x);
}

std::vector<double> StreamState::step_solve(std::span<const double> y) {
  std::vector<double> x(width_);
  step_solve(y, x);
  return x;
}

NoiseConfig NoiseConfig::from_rho(double rho, double sensitivity,
                                  std::uint64_t seed, std::size_t m) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw Error(ErrorCode::kInvalidParams, "rho must be positive and finite");
  }
  NoiseConfig cfg;
  cfg.rho = rho;
  cfg.sigma = std::sqrt(1.0 / (2.0 * rho));
  cfg.sensitivity = sensitivity;
  cfg.seed = seed;
  cfg.m = m;
  return cfg;
}

void NoiseConfig::validate() const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::kInvalidParams, "sigma must be finite and >= 0");
  }
  if (!(sensitivity >= 0.0) || !std::isfinite(sensitivity)) {
    throw Error(ErrorCode::kInvalidParams, "sensitivity must be finite and >= 0");
  }
  if (rho) {
    const double want = 1.0 / (2.0 * *rho);
    if (!(*rho > 0.0) || std::abs(sigma * sigma - want) > 1e-12 * want) {
      throw Error(ErrorCode::kInvalidParams, "sigma^2 != 1 / (2 rho)");
    }
  }
}

std::uint64_t CounterGaussian::word(std::uint64_t index) const {
  std::uint64_t z = seed_ + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double CounterGaussian::at(std::uint64_t index) const {
  const std::uint64_t pair = index / 2;
  constexpr double kUnit = 0x1.0p-53;
  const double u1 = (static_cast<double>(word(2 * pair) >> 11) + 0.5) * kUnit;
  const double u2 = (static_cast<double>(word(2 * pair + 1) >> 11) + 0.5) * kUnit;
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return index % 2 == 0 ? radius * std::cos(angle) : radius * std::sin(angle);
}

NoiseStream::NoiseStream(const InverseBltParams& inv, std::size_t width,
                         std::uint64_t seed, double scale)
    : state_(inv.as_blt(), width), rng_(seed), scale_(scale), z_(width) {}

NoiseStream::NoiseStream(const InverseBltParams& inv, const NoiseConfig& cfg)
    : NoiseStream(inv, cfg.m, cfg.seed, cfg.scale()) {
  cfg.validate();
}

NoiseStream NoiseStream::with_fixed_noise(const InverseBltParams& inv,
                                          Eigen::MatrixXd z) {
  NoiseStream out(inv, static_cast<std::size_t>(z.cols()), 0, 1.0);
  out.fixed_ = std::move(z);
  return out;
}

void NoiseStream::next(std::span<double> row) {
  const std::size_t m = width();
  if (fixed_) {
    if (row_ >= static_cast<std::size_t>(fixed_->rows())) {
      throw Error(ErrorCode::kLengthMismatch, "fixed noise matrix exhausted");
    }
    for (std::size_t k = 0; k < m; ++k) {
      z_[k] = (*fixed_)(static_cast<Eigen::Index>(row_), static_cast<Eigen::Index>(k));
    }
  } else if (scale_ == 0.0) {
    std::fill(z_.begin(), z_.end(), 0.0);
  } else {
    for (std::size_t k = 0; k < m; ++k) z_[k] = scale_ * rng_();
  }
  ++row_;
  state_.step_multiply(z_, row);
}

std::vector<double> NoiseStream::next() {
  std::vector<double> row(width());
  next(row);
  return row;
}

std::vector<std::vector<double>> noise_rows(const InverseBltParams& inv,
                                            const NoiseConfig& cfg,
                                            std::size_t steps) {
  NoiseStream stream(inv, cfg);
  std::vector<std::vector<double>> rows;
  rows.reserve(steps);
  for (std::size_t t = 0; t < steps; ++t) rows.push_back(stream.next());
  return rows;
}

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
  const unsigned char bytes[4] = {
      static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
      static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(bytes), 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char bytes[4];
  if (!in.read(reinterpret_cast<char*>(bytes), 4)) {
    throw Error(ErrorCode::kLengthMismatch, "truncated row dump header");
  }
  return std::uint32_t{bytes[0]} | std::uint32_t{bytes[1]} << 8 |
         std::uint32_t{bytes[2]} << 16 | std::uint32_t{bytes[3]} << 24;
}

}  // namespace

void write_row_header(std::ostream& out, std::uint32_t n, std::uint32_t m) {
  out.write("BLTN", 4);
  put_u32(out, n);
  put_u32(out, m);
  put_u32(out, 0);
}

void write_row(std::ostream& out, std::span<const double> row) {
  for (double v : row) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    unsigned char bytes[8];
    for (int b = 0; b < 8; ++b) bytes[b] = static_cast<unsigned char>(bits >> (8 * b));
    out.write(reinterpret_cast<const char*>(bytes), 8);
  }
}

RowDump read_rows(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::string_view(magic, 4) != "BLTN") {
    throw Error(ErrorCode::kLengthMismatch, "missing BLTN magic");
  }
  RowDump dump;
  dump.n = get_u32(in);
  dump.m = get_u32(in);
  get_u32(in);
  const std::size_t count = std::size_t{dump.n} * dump.m;
  dump.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    unsigned char bytes[8];
    if (!in.read(reinterpret_cast<char*>(bytes), 8)) {
      throw Error(ErrorCode::kLengthMismatch, "truncated row dump payload");
    }
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= std::uint64_t{bytes[b]} << (8 * b);
    dump.values[i] = std::bit_cast<double>(bits);
  }
  return dump;
}

}  // namespace blt
