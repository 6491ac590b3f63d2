#pragma once

#include <string>

#include <json.hpp>

#include "netgov/layers.hpp"

namespace netgov::nn {

/// Tensor payload for checkpoints: one JSON array of doubles per registry
/// entry, in registry order. nlohmann emits shortest round-trip decimals, so
/// save/load is bit-exact for finite float64.
nlohmann::json tensors_to_json(const ParamList& params);
void tensors_from_json(const nlohmann::json& arr, const ParamList& params);

void write_json_file(const std::string& path, const nlohmann::json& doc);
nlohmann::json read_json_file(const std::string& path);

}  // namespace netgov::nn
