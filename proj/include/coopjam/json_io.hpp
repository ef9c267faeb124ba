#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "coopjam/model.hpp"

namespace coopjam {

/// Scenario keys: n_jammers, n_eavesdroppers, p_source, p_max, sigma2_dest,
/// sigma2_eaves. Channel keys: h_d, h_e, g_d, g_e (g_e as M rows of N).
nlohmann::json to_json(const Scenario& s);
nlohmann::json to_json(const Scenario& s, const ChannelGains& c);

Scenario scenario_from_json(const nlohmann::json& j);
/// Returns nullopt when the document carries no channel keys. Accepts g_e
/// either as nested rows or as a flat row-major array.
std::optional<ChannelGains> channels_from_json(const nlohmann::json& j, const Scenario& s);

nlohmann::json read_json_file(const std::string& path);

}  // namespace coopjam
