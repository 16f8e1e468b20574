#include "l96sp/model_io.hpp"

#include <cmath>
#include <fstream>

#include "l96sp/error.hpp"
#include "l96sp/rng.hpp"

namespace l96sp {

using nlohmann::json;

json model_to_json(const PolyModel& m) {
  json j;
  j["format"] = "l96sp-model";
  j["version"] = kModelFormatVersion;
  j["kind"] = "polynomial";
  j["dt"] = m.dt;
  j["F"] = m.F;
  j["coeffs"] = {{"a", m.a}, {"b", m.b}, {"c", m.c}, {"d", m.d}};
  j["ar1"] = {{"phi", m.ar1.phi}, {"sigma", m.ar1.sigma}};
  j["diagnostics"] = m.diagnostics;
  return j;
}

json model_to_json(const RnnModel& m) {
  json j;
  j["format"] = "l96sp-model";
  j["version"] = kModelFormatVersion;
  j["kind"] = "rnn";
  j["dt"] = m.dt();
  j["F_default"] = m.F_default();
  const auto& a = m.arch();
  j["architecture"] = {
      {"g_width", a.g_width},
      {"gru_units", a.gru_units},
      {"g_layers", {1, a.g_width, a.g_width, 1}},
      {"g_activation", "tanh"},
      {"s_layers", "gru x2"},
      {"hidden_size", a.hidden_size()},
      {"b_layers", {a.hidden_size(), 1}},
  };
  const auto& n = m.norm();
  j["norm_stats"] = {{"x_mean", n.x_mean}, {"x_sd", n.x_sd}, {"r_mean", n.r_mean}, {"r_sd", n.r_sd}};
  j["sigma"] = m.sigma();
  j["log_sigma"] = m.params()[m.layout().log_sigma];
  j["conventions"] = {
      {"gru", "z=sig(Wz x+Uz h+bz); r=sig(Wr x+Ur h+br); c=tanh(Wc x+Uc(r*h)+bc); h'=(1-z)h+zc"},
      {"initial_hidden_state", "l0=0, r0=0"},
      {"input_standardization", "g: (x-x_mean)/x_sd; s: r/r_sd"},
      {"output_scaling", "g: r_mean + r_sd*net; b: r_sd*(w.l+bias)"},
  };
  json weights = json::array();
  for (const auto& b : m.layout().blocks) {
    if (b.name == "log_sigma") continue;
    const auto values = m.block(b.name);
    weights.push_back({{"name", b.name},
                       {"shape", b.shape},
                       {"values", std::vector<double>(values.begin(), values.end())}});
  }
  j["weights"] = weights;
  j["provenance"] = m.provenance;
  return j;
}

json model_to_json(const Model& m) {
  return std::visit([](const auto& x) { return model_to_json(x); }, m);
}

namespace {

template <typename T>
T required(const json& j, const char* key) {
  if (!j.contains(key)) throw IoError(std::string("model JSON: missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw IoError(std::string("model JSON: bad field '") + key + "': " + e.what());
  }
}

}  // namespace

Model model_from_json(const json& j) {
  if (!j.is_object() || j.value("format", "") != "l96sp-model")
    throw IoError("model JSON: not an l96sp-model document");
  if (required<int>(j, "version") != kModelFormatVersion)
    throw IoError("model JSON: unsupported version");
  const auto kind = required<std::string>(j, "kind");
  try {
    if (kind == "polynomial") {
      PolyModel m;
      const auto& c = j.at("coeffs");
      m.a = c.at("a").get<double>();
      m.b = c.at("b").get<double>();
      m.c = c.at("c").get<double>();
      m.d = c.at("d").get<double>();
      m.ar1.phi = j.at("ar1").at("phi").get<double>();
      m.ar1.sigma = j.at("ar1").at("sigma").get<double>();
      m.dt = required<double>(j, "dt");
      m.F = required<double>(j, "F");
      m.diagnostics = j.value("diagnostics", json::object());
      m.validate();
      return m;
    }
    if (kind == "rnn") {
      RnnArch arch;
      arch.g_width = j.at("architecture").at("g_width").get<int>();
      arch.gru_units = j.at("architecture").at("gru_units").get<int>();
      NormStats n;
      const auto& ns = j.at("norm_stats");
      n.x_mean = ns.at("x_mean").get<double>();
      n.x_sd = ns.at("x_sd").get<double>();
      n.r_mean = ns.at("r_mean").get<double>();
      n.r_sd = ns.at("r_sd").get<double>();
      RnnModel m(arch, n, required<double>(j, "dt"), required<double>(j, "F_default"));
      std::size_t seen = 0;
      for (const auto& w : j.at("weights")) {
        const auto name = w.at("name").get<std::string>();
        const auto& block = m.layout().block(name);
        if (w.at("shape").get<std::vector<std::size_t>>() != block.shape)
          throw IoError("model JSON: shape mismatch for " + name);
        const auto values = w.at("values").get<std::vector<double>>();
        if (values.size() != block.size) throw IoError("model JSON: size mismatch for " + name);
        auto dst = m.block(name);
        std::copy(values.begin(), values.end(), dst.begin());
        ++seen;
      }
      if (seen + 1 != m.layout().blocks.size()) throw IoError("model JSON: missing weight blocks");
      if (j.contains("log_sigma"))
        m.params()[m.layout().log_sigma] = required<double>(j, "log_sigma");
      else
        m.set_sigma(required<double>(j, "sigma"));
      m.provenance = j.value("provenance", json::object());
      return m;
    }
  } catch (const json::exception& e) {
    throw IoError(std::string("model JSON: ") + e.what());
  } catch (const ConfigError& e) {
    throw IoError(std::string("model JSON: ") + e.what());
  }
  throw IoError("model JSON: unknown kind '" + kind + "'");
}

void save_model(const std::filesystem::path& path, const Model& m) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("cannot write model: " + path.string());
  os << model_to_json(m).dump(2) << '\n';
  if (!os) throw IoError("write failed: " + path.string());
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open model: " + path.string());
  json j;
  try {
    j = json::parse(is);
  } catch (const json::exception& e) {
    throw IoError("malformed model file " + path.string() + ": " + e.what());
  }
  return model_from_json(j);
}

}  // namespace l96sp
