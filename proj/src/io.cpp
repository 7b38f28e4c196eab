#include "blt/io.hpp"

namespace blt::io {

namespace {

std::vector<double> number_array(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(std::string("missing field \"") + key + "\"");
  }
  const auto& field = j.at(key);
  if (!field.is_array()) {
    throw ParseError(std::string("field \"") + key + "\" is not an array");
  }
  std::vector<double> out;
  out.reserve(field.size());
  for (const auto& v : field) {
    if (!v.is_number()) {
      throw ParseError(std::string("field \"") + key + "\" has a non-numeric entry");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

BltParams params_from_json(const nlohmann::json& j) {
  return {number_array(j, "alpha"), number_array(j, "lambda")};
}

nlohmann::json to_json(const BltParams& params) {
  return {{"alpha", params.alpha}, {"lambda", params.lambda}};
}

InverseBltParams inverse_from_json(const nlohmann::json& j) {
  InverseBltParams inv;
  inv.alpha_hat = number_array(j, "alpha_hat");
  inv.lambda_hat = number_array(j, "lambda_hat");
  if (inv.alpha_hat.size() != inv.lambda_hat.size()) {
    throw ParseError("alpha_hat and lambda_hat differ in length");
  }
  if (j.contains("regime")) {
    if (!j.at("regime").is_string()) throw ParseError("regime is not a string");
    const auto regime = parse_regime(j.at("regime").get<std::string>());
    if (!regime) throw ParseError("regime must be LT1, EQ1 or GT1");
    inv.regime = *regime;
  }
  return inv;
}

nlohmann::json to_json(const InverseBltParams& inv) {
  return {{"alpha_hat", inv.alpha_hat},
          {"lambda_hat", inv.lambda_hat},
          {"regime", std::string(to_string(inv.regime))}};
}

nlohmann::json to_json(const LossReport& report, bool include_rows) {
  nlohmann::json j = {{"sensitivity", report.sensitivity},
                      {"max_row_norm", report.max_row_norm},
                      {"loss", report.loss},
                      {"frobenius_loss", report.frobenius_loss},
                      {"worst_row", report.worst_row}};
  if (include_rows) j["per_row_norms"] = report.per_row_norms;
  return j;
}

nlohmann::json to_json(const OptRecord& record) {
  return {{"iteration", record.iteration},
          {"loss", record.loss},
          {"barrier", record.barrier},
          {"gradient_norm", record.gradient_norm},
          {"alpha", record.params.alpha},
          {"lambda", record.params.lambda}};
}

nlohmann::json parse(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what());
  }
}

}  // namespace blt::io
