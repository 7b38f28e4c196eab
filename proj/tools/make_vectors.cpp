// Writes random strict-valid parameter files in a chosen regime.

#include <iostream>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "blt/io.hpp"
#include "support/draws.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Random BLT parameter vectors", "blt-vectors"};
  std::size_t d = 4;
  std::uint64_t seed = 0;
  std::string regime = "LT1";
  std::size_t count = 1;
  app.add_option("--d", d, "Degree")->check(CLI::Range(1, 64))->capture_default_str();
  app.add_option("--seed", seed)->capture_default_str();
  app.add_option("--regime", regime)->check(CLI::IsMember({"LT1", "EQ1", "GT1"}))->capture_default_str();
  app.add_option("--count", count, "Number of vectors, one JSON document per line")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  const blt::Regime r = regime == "LT1"   ? blt::Regime::kLT1
                        : regime == "EQ1" ? blt::Regime::kEQ1
                                          : blt::Regime::kGT1;
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < count; ++k) {
    std::cout << blt::io::to_json(blt::testing::random_params(rng, d, r)).dump() << "\n";
  }
  return 0;
}
