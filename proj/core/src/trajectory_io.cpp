#include "l96sp/trajectory_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include "l96sp/error.hpp"
#include "l96sp/rng.hpp"

namespace l96sp {

namespace {

constexpr std::array<char, 4> kMagic{'L', '9', '6', 'D'};

template <typename T>
void put(std::ostream& os, T value) {
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  os.write(bytes.data(), sizeof(T));
}

template <typename T>
T get(std::istream& is, const std::filesystem::path& path) {
  std::array<char, sizeof(T)> bytes;
  if (!is.read(bytes.data(), sizeof(T)))
    throw IoError("truncated trajectory file: " + path.string());
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

}  // namespace

void write_trajectory_binary(const std::filesystem::path& path, const Trajectory& traj) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open for writing: " + path.string());
  os.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(os, kTrajectoryFormatVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(traj.K));
  put<std::uint64_t>(os, static_cast<std::uint64_t>(traj.rows()));
  put<double>(os, traj.F);
  put<double>(os, traj.dt_save);
  put<std::uint64_t>(os, traj.seed);
  if constexpr (std::endian::native == std::endian::little) {
    os.write(reinterpret_cast<const char*>(traj.data.data()),
             static_cast<std::streamsize>(traj.data.size() * sizeof(double)));
  } else {
    for (double v : traj.data) put<double>(os, v);
  }
  if (!os) throw IoError("write failed: " + path.string());
}

Trajectory read_trajectory_binary(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open trajectory: " + path.string());
  std::array<char, 4> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic)
    throw IoError("not an L96D trajectory file: " + path.string());
  const auto version = get<std::uint32_t>(is, path);
  if (version != kTrajectoryFormatVersion)
    throw IoError("unsupported trajectory format version " + std::to_string(version));
  Trajectory traj;
  traj.K = static_cast<int>(get<std::uint32_t>(is, path));
  const auto rows = get<std::uint64_t>(is, path);
  traj.F = get<double>(is, path);
  traj.dt_save = get<double>(is, path);
  traj.seed = get<std::uint64_t>(is, path);
  if (traj.K < 1) throw IoError("trajectory with K = 0: " + path.string());
  const auto n = rows * static_cast<std::uint64_t>(traj.K);
  traj.data.resize(static_cast<std::size_t>(n));
  if constexpr (std::endian::native == std::endian::little) {
    if (!is.read(reinterpret_cast<char*>(traj.data.data()),
                 static_cast<std::streamsize>(n * sizeof(double))))
      throw IoError("truncated trajectory data: " + path.string());
  } else {
    for (auto& v : traj.data) v = get<double>(is, path);
  }
  return traj;
}

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
  return std::filesystem::path(path.string() + ".json");
}

nlohmann::json trajectory_sidecar(const Trajectory& traj, const nlohmann::json& provenance) {
  nlohmann::json j;
  j["format"] = "L96D";
  j["version"] = kTrajectoryFormatVersion;
  j["K"] = traj.K;
  j["T"] = traj.rows();
  j["F"] = traj.F;
  j["dt_save"] = traj.dt_save;
  j["seed"] = traj.seed;
  j["t0"] = traj.t0;
  nlohmann::json prov = provenance.is_object() ? provenance : nlohmann::json::object();
  if (!prov.contains("generator")) prov["generator"] = kGeneratorVersion;
  if (!prov.contains("rng_method")) prov["rng_method"] = kRngMethod;
  j["provenance"] = prov;
  return j;
}

void write_trajectory(const std::filesystem::path& path, const Trajectory& traj,
                      const nlohmann::json& provenance) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  write_trajectory_binary(path, traj);
  std::ofstream os(sidecar_path(path), std::ios::trunc);
  if (!os) throw IoError("cannot write sidecar for " + path.string());
  os << trajectory_sidecar(traj, provenance).dump(2) << '\n';
}

nlohmann::json read_sidecar(const std::filesystem::path& path) {
  std::ifstream is(sidecar_path(path));
  if (!is) throw IoError("missing sidecar: " + sidecar_path(path).string());
  try {
    return nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed sidecar " + sidecar_path(path).string() + ": " + e.what());
  }
}

Trajectory read_trajectory(const std::filesystem::path& path) {
  Trajectory traj = read_trajectory_binary(path);
  if (std::filesystem::exists(sidecar_path(path))) {
    const auto meta = read_sidecar(path);
    traj.t0 = meta.value("t0", 0.0);
  }
  return traj;
}

}  // namespace l96sp
