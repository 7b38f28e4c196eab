#ifndef BLT_IO_HPP_
#define BLT_IO_HPP_

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "blt/blt.hpp"
#include "blt/loss.hpp"
#include "blt/opt.hpp"

namespace blt::io {

// Malformed or schema-violating JSON input.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// {"alpha": [..], "lambda": [..]}
BltParams params_from_json(const nlohmann::json& j);
nlohmann::json to_json(const BltParams& params);

// {"alpha_hat": [..], "lambda_hat": [..], "regime": "LT1|EQ1|GT1"}
InverseBltParams inverse_from_json(const nlohmann::json& j);
nlohmann::json to_json(const InverseBltParams& inv);

nlohmann::json to_json(const LossReport& report, bool include_rows = false);

// One JSON-lines record of an optimization trace.
nlohmann::json to_json(const OptRecord& record);

// Parses text, rethrowing syntax errors as ParseError.
nlohmann::json parse(const std::string& text);

}  // namespace blt::io

#endif  // BLT_IO_HPP_
