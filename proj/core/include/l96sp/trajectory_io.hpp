#pragma once

#include <cstdint>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "l96sp/dynamics.hpp"

namespace l96sp {

inline constexpr std::uint32_t kTrajectoryFormatVersion = 1;
inline constexpr const char* kGeneratorVersion = "l96sp 1.0.0";

/// Little-endian layout: "L96D", u32 version, u32 K, u64 T, f64 F,
/// f64 dt_save, u64 seed, then T*K f64 values (time-major).
void write_trajectory_binary(const std::filesystem::path& path, const Trajectory& traj);
Trajectory read_trajectory_binary(const std::filesystem::path& path);

/// `<path>.json`
std::filesystem::path sidecar_path(const std::filesystem::path& path);

/// Sidecar holding the header fields plus t0 and a provenance block.
nlohmann::json trajectory_sidecar(const Trajectory& traj, const nlohmann::json& provenance);

/// Writes the binary file and its sidecar.
void write_trajectory(const std::filesystem::path& path, const Trajectory& traj,
                      const nlohmann::json& provenance);
/// Reads the binary file; t0 is taken from the sidecar when present.
Trajectory read_trajectory(const std::filesystem::path& path);
/// Parsed sidecar, or throws IoError.
nlohmann::json read_sidecar(const std::filesystem::path& path);

}  // namespace l96sp
