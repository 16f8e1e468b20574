#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "l96sp/simulate.hpp"

namespace l96sp {

inline constexpr int kModelFormatVersion = 1;

nlohmann::json model_to_json(const PolyModel& m);
nlohmann::json model_to_json(const RnnModel& m);
nlohmann::json model_to_json(const Model& m);

/// Throws IoError on schema violations.
Model model_from_json(const nlohmann::json& j);

void save_model(const std::filesystem::path& path, const Model& m);
Model load_model(const std::filesystem::path& path);

}  // namespace l96sp
