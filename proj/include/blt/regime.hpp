#ifndef BLT_REGIME_HPP_
#define BLT_REGIME_HPP_

#include <optional>
#include <string_view>

namespace blt {

// Position of sum_i alpha_i / lambda_i relative to 1.
enum class Regime { kLT1, kEQ1, kGT1 };

std::string_view to_string(Regime regime);
std::optional<Regime> parse_regime(std::string_view text);

}  // namespace blt

#endif  // BLT_REGIME_HPP_
