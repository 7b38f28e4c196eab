#ifndef BLT_STREAM_HPP_
#define BLT_STREAM_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "blt/blt.hpp"

namespace blt {

// Streaming multiplication by BLT(alpha, lambda) or its inverse, one row of
// width m per step, O(d m) time and memory.
//
// Before step t the buffers hold S_i = sum_{tau < t} lambda_i^(t-1-tau) x_tau.
// Not thread-safe; use one instance per thread.
class StreamState {
 public:
  StreamState(BltParams params, std::size_t width);

  // y_t = x_t + sum_i alpha_i S_i, then S_i <- lambda_i S_i + x_t.
  std::vector<double> step_multiply(std::span<const double> x);
  void step_multiply(std::span<const double> x, std::span<double> y);

  // Solves C X = Y row by row: x_t = y_t - sum_i alpha_i S_i.
  std::vector<double> step_solve(std::span<const double> y);
  void step_solve(std::span<const double> y, std::span<double> x);

  std::size_t width() const { return width_; }
  std::size_t degree() const { return params_.degree(); }
  std::size_t step() const { return t_; }
  const BltParams& params() const { return params_; }
  std::span<const double> buffer(std::size_t channel) const;

 private:
  void correction(std::span<double> out) const;
  void push(std::span<const double> x);

  BltParams params_;
  std::size_t width_;
  std::vector<double> buffers_;  // d rows of width_
  std::size_t t_ = 1;
};

struct NoiseConfig {
  double sigma = 1.0;           // noise multiplier
  std::optional<double> rho;    // zCDP budget; sigma^2 = 1 / (2 rho)
  double sensitivity = 1.0;     // l2 sensitivity of C
  std::uint64_t seed = 0;
  std::size_t m = 1;

  static NoiseConfig from_rho(double rho, double sensitivity,
                              std::uint64_t seed, std::size_t m);
  // Throws InvalidParams on a negative or non-finite sigma, or a sigma that
  // disagrees with rho.
  void validate() const;
  double scale() const { return sensitivity * sigma; }
};

// Standard normals from a counter-based generator. Draw k depends only on
// (seed, k): word j is the SplitMix64 output
// mix(seed + (j + 1) * 0x9E3779B97F4A7C15), uniforms are
// ((word >> 11) + 0.5) * 2^-53, and words 2i, 2i+1 feed one Box-Muller pair
// whose cosine branch is draw 2i and sine branch draw 2i+1.
// Not cryptographically secure.
class CounterGaussian {
 public:
  explicit CounterGaussian(std::uint64_t seed) : seed_(seed) {}

  double operator()() { return at(counter_++); }
  double at(std::uint64_t index) const;
  std::uint64_t word(std::uint64_t index) const;

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

// Rows of C^-1 Z for Z with i.i.d. N(0, (sensitivity * sigma)^2) entries,
// streamed through the inverse BLT.
class NoiseStream {
 public:
  NoiseStream(const InverseBltParams& inv, const NoiseConfig& cfg);

  // Test hook: rows of `z` are used verbatim as the rows of Z.
  static NoiseStream with_fixed_noise(const InverseBltParams& inv,
                                      Eigen::MatrixXd z);

  std::vector<double> next();
  void next(std::span<double> row);
  std::size_t width() const { return state_.width(); }

 private:
  NoiseStream(const InverseBltParams& inv, std::size_t width,
              std::uint64_t seed, double scale);

  StreamState state_;
  CounterGaussian rng_;
  double scale_;
  std::optional<Eigen::MatrixXd> fixed_;
  std::size_t row_ = 0;
  std::vector<double> z_;
};

std::vector<std::vector<double>> noise_rows(const InverseBltParams& inv,
                                            const NoiseConfig& cfg,
                                            std::size_t steps);

// Binary row dump: "BLTN", u32 n, u32 m, u32 reserved (0), then n*m
// little-endian float64 values, row-major.
void write_row_header(std::ostream& out, std::uint32_t n, std::uint32_t m);
void write_row(std::ostream& out, std::span<const double> row);

struct RowDump {
  std::uint32_t n = 0;
  std::uint32_t m = 0;
  std::vector<double> values;  // row-major
};

RowDump read_rows(std::istream& in);

}  // namespace blt

#endif  // BLT_STREAM_HPP_
