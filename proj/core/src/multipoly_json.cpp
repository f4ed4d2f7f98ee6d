#include <json.hpp>

#include "dssyk/errors.hpp"
#include "dssyk/qcore.hpp"

namespace dssyk::qcore {

std::string to_json(const MultiPoly& p) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [e, c] : p.terms()) {
    arr.push_back({{"q", e.q},
                   {"qt", e.qt},
                   {"theta", e.theta},
                   {"num", c.get_num().get_str()},
                   {"den", c.get_den().get_str()}});
  }
  return arr.dump();
}

MultiPoly multipoly_from_json(std::string_view text) {
  nlohmann::json arr;
  try {
    arr = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError(std::string("MultiPoly JSON: ") + e.what());
  }
  if (!arr.is_array()) throw DomainError("MultiPoly JSON must be an array of terms");
  MultiPoly p;
  for (const auto& rec : arr) {
    try {
      Exponents e{rec.at("q").get<int>(), rec.at("qt").get<int>(), rec.at("theta").get<int>()};
      if (e.q < 0 || e.qt < 0 || e.theta < 0) throw DomainError("MultiPoly JSON: negative exponent");
      p.add_term(e, make_rational(rec.at("num").get<std::string>(), rec.at("den").get<std::string>()));
    } catch (const nlohmann::json::exception& ex) {
      throw DomainError(std::string("MultiPoly JSON term: ") + ex.what());
    }
  }
  return p;
}

}  // namespace dssyk::qcore
