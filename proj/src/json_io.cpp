#include "coopjam/json_io.hpp"

#include <fstream>

namespace coopjam {

using nlohmann::json;

json to_json(const Scenario& s) {
  return json{{"n_jammers", s.n_jammers},       {"n_eavesdroppers", s.n_eavesdroppers},
              {"p_source", s.p_source},         {"p_max", s.p_max},
              {"sigma2_dest", s.sigma2_dest},   {"sigma2_eaves", s.sigma2_eaves}};
}

json to_json(const Scenario& s, const ChannelGains& c) {
  json j = to_json(s);
  j["h_d"] = c.h_d;
  j["h_e"] = c.h_e;
  j["g_d"] = c.g_d;
  json rows = json::array();
  for (std::size_t m = 0; m < s.n_eavesdroppers; ++m) {
    json row = json::array();
    for (std::size_t i = 0; i < s.n_jammers; ++i) row.push_back(c.ge(m, i));
    rows.push_back(std::move(row));
  }
  j["g_e"] = std::move(rows);
  return j;
}

namespace {

template <typename T>
T required(const json& j, const char* key) {
  if (!j.contains(key)) throw InvalidInput(std::string("scenario JSON: missing key '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("scenario JSON: bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

Scenario scenario_from_json(const json& j) {
  Scenario s;
  s.n_jammers = required<std::size_t>(j, "n_jammers");
  s.n_eavesdroppers = required<std::size_t>(j, "n_eavesdroppers");
  s.p_source = required<double>(j, "p_source");
  s.p_max = required<std::vector<double>>(j, "p_max");
  s.sigma2_dest = required<double>(j, "sigma2_dest");
  s.sigma2_eaves = required<std::vector<double>>(j, "sigma2_eaves");
  s.validate();
  return s;
}

std::optional<ChannelGains> channels_from_json(const json& j, const Scenario& s) {
  const bool any = j.contains("h_d") || j.contains("h_e") || j.contains("g_d") || j.contains("g_e");
  if (!any) return std::nullopt;
  ChannelGains c;
  c.h_d = required<double>(j, "h_d");
  c.h_e = required<std::vector<double>>(j, "h_e");
  c.g_d = required<std::vector<double>>(j, "g_d");
  const json& ge = j.at("g_e");
  if (!ge.is_array()) throw InvalidInput("scenario JSON: g_e must be an array");
  if (!ge.empty() && ge.front().is_array()) {
    for (const auto& row : ge) {
      auto r = row.get<std::vector<double>>();
      if (r.size() != s.n_jammers) throw InvalidInput("scenario JSON: g_e row length does not match N");
      c.g_e.insert(c.g_e.end(), r.begin(), r.end());
    }
  } else {
    c.g_e = ge.get<std::vector<double>>();
  }
  c.validate(s);
  return c;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput("'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace coopjam
