#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "cli.hpp"
#include "l96sp/climate.hpp"
#include "l96sp/flops.hpp"
#include "l96sp/holdout.hpp"
#include "l96sp/model_io.hpp"
#include "l96sp/poly_fit.hpp"
#include "l96sp/regimes.hpp"
#include "l96sp/report.hpp"
#include "l96sp/trainer.hpp"
#include "l96sp/trajectory_io.hpp"
#include "l96sp/weather.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace l96sp::cli {

ConfigReader::ConfigReader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
  if (j_.is_null()) j_ = json::object();
  if (!j_.is_object()) throw ConfigError(where_ + ": expected a JSON object");
}

ConfigReader ConfigReader::child(const std::string& key) {
  seen_.insert(key);
  return ConfigReader(j_.contains(key) ? j_.at(key) : json::object(), where_ + "." + key);
}

const json& ConfigReader::raw(const std::string& key) {
  seen_.insert(key);
  if (!j_.contains(key)) throw ConfigError(where_ + ": missing required key \"" + key + "\"");
  return j_.at(key);
}

void ConfigReader::finish() const {
  for (const auto& [key, value] : j_.items())
    if (!seen_.count(key)) throw ConfigError(where_ + ": unknown key \"" + key + "\"");
}

json load_config(const CommonOptions& opt) {
  if (!(opt.scale > 0.0) || !std::isfinite(opt.scale))
    throw ConfigError("--scale must be a positive number");
  if (opt.config.empty()) return json::object();
  std::ifstream in(opt.config);
  if (!in) throw IoError("cannot open config " + opt.config);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + opt.config + ": " + e.what());
  }
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return 2;
  if (dynamic_cast<const BlowUpError*>(&e)) return 3;
  if (dynamic_cast<const NumericalError*>(&e)) return 3;
  if (dynamic_cast<const IoError*>(&e)) return 4;
  return 1;
}

namespace {

L96Config read_system(ConfigReader r) {
  L96Config c;
  c.K = r.get("K", c.K);
  c.J = r.get("J", c.J);
  c.h = r.get("h", c.h);
  c.b = r.get("b", c.b);
  c.c = r.get("c", c.c);
  c.F = r.get("F", c.F);
  r.finish();
  c.validate();
  return c;
}

RnnArch read_arch(ConfigReader r) {
  RnnArch a;
  a.g_width = r.get("g_width", a.g_width);
  a.gru_units = r.get("gru_units", a.gru_units);
  r.finish();
  a.validate();
  return a;
}

std::uint64_t pick_seed(const CommonOptions& opt, ConfigReader& r) {
  const auto from_config = r.get<std::uint64_t>("seed", 0);
  return opt.seed.value_or(from_config);
}

double scaled(double v, double scale) { return v * scale; }

std::size_t scaled_count(std::size_t n, double scale) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(static_cast<double>(n) * scale)));
}

std::vector<fs::path> read_paths(ConfigReader& r, const std::string& key,
                                 const std::vector<fs::path>& fallback) {
  if (!r.has(key)) {
    r.get<json>(key, json());
    return fallback;
  }
  std::vector<fs::path> out;
  for (const auto& s : r.require<std::vector<std::string>>(key)) out.emplace_back(s);
  if (out.empty()) throw ConfigError(r.where() + "." + key + ": empty list");
  return out;
}

void write_json_file(const fs::path& path, const json& j) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

ResidualDataset load_dataset(const std::vector<fs::path>& paths) {
  ResidualDataset ds;
  for (const auto& p : paths) ds.append(read_trajectory(p));
  return ds;
}

}  // namespace

// ---------------------------------------------------------------- gen-truth

int cmd_gen_truth(const CommonOptions& opt) {
  ConfigReader r(load_config(opt), "gen-truth");
  const L96Config base = read_system(r.child("system"));
  TruthRunSpec spec;
  spec.dt_inner = r.get("dt_inner", spec.dt_inner);
  spec.dt_save = r.get("dt_save", spec.dt_save);
  spec.burn_in = r.get("burn_in", spec.burn_in);
  const std::uint64_t seed = pick_seed(opt, r);

  struct Run {
    std::string name;
    double F;
    double duration;
    std::uint64_t seed;
  };
  std::vector<Run> runs;
  if (r.has("runs")) {
    const auto& arr = r.raw("runs");
    if (!arr.is_array() || arr.empty()) throw ConfigError("gen-truth.runs: expected a non-empty array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      ConfigReader rr(arr[i], "gen-truth.runs[" + std::to_string(i) + "]");
      Run run{rr.require<std::string>("name"), rr.require<double>("F"),
              rr.require<double>("duration"), rr.get<std::uint64_t>("seed", seed + i)};
      rr.finish();
      runs.push_back(run);
    }
  } else {
    const std::vector<std::pair<std::string, std::pair<double, double>>> defaults = {
        {"train_F19", {19.0, 500.0}},   {"train_F20", {20.0, 1000.0}},
        {"train_F20_5", {20.5, 500.0}}, {"train_F21", {21.0, 500.0}},
        {"valid_F21_5", {21.5, 500.0}}};
    for (std::size_t i = 0; i < defaults.size(); ++i)
      runs.push_back({defaults[i].first, defaults[i].second.first, defaults[i].second.second, seed + i});
  }
  r.finish();

  for (const auto& run : runs) {
    L96Config cfg = base;
    cfg.F = run.F;
    TruthRunSpec rs = spec;
    rs.duration = scaled(run.duration, opt.scale);
    const fs::path path = fs::path(opt.out) / (run.name + ".l96");
    Trajectory traj;
    try {
      traj = generate_truth(cfg, rs, random_initial_state(cfg, run.seed), run.seed);
    } catch (const BlowUpError& e) {
      std::cerr << "gen-truth: run " << run.name << " (F=" << run.F << ") blew up at t=" << e.time()
                << " MTU\n";
      throw;
    }
    const json prov = {{"command", "gen-truth"},
                       {"run", run.name},
                       {"system", {{"K", cfg.K}, {"J", cfg.J}, {"h", cfg.h}, {"b", cfg.b}, {"c", cfg.c}, {"F", cfg.F}}},
                       {"dt_inner", rs.dt_inner},
                       {"burn_in", rs.burn_in},
                       {"duration", rs.duration},
                       {"scale", opt.scale}};
    write_trajectory(path, traj, prov);
    std::cout << path.string() << ": F=" << run.F << " rows=" << traj.rows() << '\n';
  }
  return 0;
}

// ----------------------------------------------------------------- fit-poly

int cmd_fit_poly(const CommonOptions& opt) {
  ConfigReader r(load_config(opt), "fit-poly");
  const auto train = read_paths(r, "train", {fs::path(opt.out) / "train_F20.l96"});
  const auto name = r.get<std::string>("name", "poly");
  r.finish();
  const auto ds = load_dataset(train);
  PolyModel m = fit_polynomial(ds);
  json files = json::array();
  for (const auto& p : train) files.push_back(p.string());
  m.diagnostics["training_files"] = files;
  const fs::path path = fs::path(opt.out) / (name + ".json");
  save_model(path, m);
  std::cout << path.string() << ": a=" << m.a << " b=" << m.b << " c=" << m.c << " d=" << m.d
            << " phi=" << m.ar1.phi << " sigma=" << m.ar1.sigma << '\n';
  return 0;
}

// ---------------------------------------------------------------- train-rnn

int cmd_train_rnn(const CommonOptions& opt) {
  ConfigReader r(load_config(opt), "train-rnn");
  const fs::path dir(opt.out);
  const auto train_paths =
      read_paths(r, "train",
                 {dir / "train_F19.l96", dir / "train_F20.l96", dir / "train_F20_5.l96", dir / "train_F21.l96"});
  const auto valid_paths = read_paths(r, "valid", {dir / "valid_F21_5.l96"});
  const RnnArch arch = read_arch(r.child("architecture"));
  const auto name = r.get<std::string>("name", "rnn");
  const bool resume = r.get("resume", true);
  const std::uint64_t seed = pick_seed(opt, r);

  TrainConfig tc;
  {
    auto t = r.child("training");
    tc.seq_len = t.get("seq_len", tc.seq_len);
    tc.batch = t.get("batch", tc.batch);
    tc.epochs = t.get("epochs", tc.epochs);
    if (t.has("lr_schedule")) {
      tc.lr_schedule.clear();
      for (const auto& e : t.raw("lr_schedule")) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number())
          throw ConfigError("train-rnn.training.lr_schedule: entries must be [epoch, rate]");
        tc.lr_schedule.emplace_back(e[0].get<int>(), e[1].get<double>());
      }
    }
    auto a = t.child("adam");
    tc.adam.beta1 = a.get("beta1", tc.adam.beta1);
    tc.adam.beta2 = a.get("beta2", tc.adam.beta2);
    tc.adam.eps = a.get("eps", tc.adam.eps);
    a.finish();
    t.finish();
  }
  tc.seed = seed;
  r.finish();
  tc.validate();

  const auto train = load_dataset(train_paths);
  const auto valid = load_dataset(valid_paths);
  RnnModel init(arch, estimate_norm_stats(train), train.dt, train.segments.empty() ? 20.0 : train.segments.front().F);
  init.init_glorot(seed);
  json files = json::array();
  for (const auto& p : train_paths) files.push_back(p.string());
  init.provenance["training_files"] = files;

  const fs::path model_path = dir / (name + ".json");
  const fs::path ckpt_path = dir / (name + ".checkpoint.json");
  const fs::path log_path = dir / (name + ".log.jsonl");
  std::error_code ec;
  fs::create_directories(dir, ec);

  std::optional<TrainCheckpoint> ckpt;
  if (resume && fs::exists(ckpt_path)) {
    ckpt = checkpoint_from_json(read_json_file(ckpt_path));
    std::cout << "resuming from epoch " << ckpt->next_epoch << '\n';
  }
  std::ofstream log(log_path, std::ios::trunc);
  if (!log) throw IoError("cannot write " + log_path.string());
  if (ckpt)
    for (const auto& rec : ckpt->log) log << to_json(rec).dump() << '\n';
  log.flush();

  auto on_epoch = [&](const EpochRecord& rec, const TrainCheckpoint& c) {
    log << to_json(rec).dump() << '\n';
    log.flush();
    write_json_file(ckpt_path, to_json(c));
    std::cout << "epoch " << rec.epoch << " train " << rec.train_loss << " valid " << rec.valid_loss
              << " lr " << rec.lr << '\n';
  };
  TrainResult res = train_rnn(init, train, valid, tc, on_epoch, ckpt ? &*ckpt : nullptr);
  save_model(model_path, Model(res.best));
  std::cout << model_path.string() << ": best epoch " << res.best_epoch << " valid " << res.best_valid
            << '\n';
  return 0;
}

// ----------------------------------------------------------------- simulate

namespace {

struct StartPoint {
  std::vector<double> x0;
  ModelState state;
};

StartPoint start_from(const Model& model, int K, ConfigReader init, double F) {
  if (!init.has("truth")) {
    init.finish();
    return {std::vector<double>(static_cast<std::size_t>(K), 0.0), fresh_state(model, K)};
  }
  const Trajectory truth = read_trajectory(init.require<std::string>("truth"));
  const auto spinup = init.get<std::size_t>("spinup", 100);
  const auto row_cfg = init.get<long long>("row", -1);
  init.finish();
  if (truth.K != K) throw ConfigError("simulate: truth K does not match the model");
  const std::size_t rows = truth.rows();
  const std::size_t row = row_cfg < 0 ? rows - 1 : static_cast<std::size_t>(row_cfg);
  if (row >= rows) throw ConfigError("simulate: init.row is past the end of the truth file");
  StartPoint sp;
  sp.x0.assign(truth.row(row).begin(), truth.row(row).end());
  sp.state = row >= spinup + 1 ? warm_state(model, truth, row + 1, F, spinup) : fresh_state(model, K);
  return sp;
}

double model_F(const Model& m) {
  if (const auto* p = std::get_if<PolyModel>(&m)) return p->F;
  return std::get<RnnModel>(m).F_default();
}

}  // namespace

int cmd_simulate(const CommonOptions& opt) {
  ConfigReader r(load_config(opt), "simulate");
  const Model model = load_model(r.require<std::string>("model"));
  const double F = r.get("F", model_F(model));
  const double duration = scaled(r.get("duration", 100.0), opt.scale);
  const auto save_every = r.get<std::size_t>("save_every", 1);
  const auto name = r.get<std::string>("name", "sim");
  const std::uint64_t seed = pick_seed(opt, r);
  const int K = r.get("K", 8);
  StartPoint start = start_from(model, K, r.child("init"), F);
  r.finish();
  if (save_every < 1) throw ConfigError("simulate.save_every must be >= 1");

  SimulationSpec spec;
  spec.F = F;
  spec.steps = static_cast<std::size_t>(std::llround(duration / model_dt(model)));
  spec.seed = seed;
  spec.save_every = save_every;
  const auto res = simulate(model, start.x0, start.state, spec);
  json prov = {{"command", "simulate"}, {"model_kind", model_kind(model)}, {"F", F},
               {"duration", duration}, {"seed", seed}, {"steps", spec.steps},
               {"steps_completed", res.steps_completed}, {"blew_up", res.blew_up}};
  prov["blowup_time"] = res.blew_up ? json(res.blowup_time) : json(nullptr);
  Trajectory traj = res.traj;
  traj.F = F;
  traj.seed = seed;
  const fs::path path = fs::path(opt.out) / (name + ".l96");
  write_trajectory(path, traj, prov);
  if (res.blew_up) {
    std::cerr << "simulate: " << model_kind(model) << " model blew up at t=" << res.blowup_time
              << " MTU (F=" << F << "); partial trajectory written to " << path.string() << '\n';
    return 3;
  }
  std::cout << path.string() << ": rows=" << traj.rows() << '\n';
  return 0;
}

// ----------------------------------------------------------------- evaluate

namespace {

struct RunSet {
  std::string name;
  Trajectory traj;
  bool blew_up = false;
  double blowup_time = 0.0;
};

CsvTable joint_csv(const Histogram2d& h) {
  CsvTable t{{"pc12_center", "pc34_center", "mass"}, {{}, {}, {}}};
  for (std::size_t i = 0; i < h.xspec.bins; ++i)
    for (std::size_t j = 0; j < h.yspec.bins; ++j) {
      t.columns[0].push_back(h.xspec.lo + (static_cast<double>(i) + 0.5) * h.xspec.width());
      t.columns[1].push_back(h.yspec.lo + (static_cast<double>(j) + 0.5) * h.yspec.width());
      t.columns[2].push_back(h.mass[i * h.yspec.bins + j]);
    }
  return t;
}

HistogramSpec padded_spec(const std::vector<double>& v, std::size_t bins, double pad, double eps) {
  HistogramSpec s = default_x_spec(v, bins, pad);
  s.lo = std::max(0.0, s.lo);  // norms are non-negative
  s.smoothing_eps = eps;
  return s;
}

}  // namespace

int cmd_evaluate(const CommonOptions& opt) {
  ConfigReader r(load_config(opt), "evaluate");
  const fs::path truth_path = r.require<std::string>("truth");
  std::map<std::string, Model> models;
  if (r.has("models"))
    for (const auto& [name, path] : r.raw("models").items()) {
      if (!path.is_string()) throw ConfigError("evaluate.models." + name + ": expected a path");
      models.emplace(name, load_model(path.get<std::string>()));
    }
  std::map<std::string, fs::path> model_runs;
  if (r.has("model_runs"))
    for (const auto& [name, path] : r.raw("model_runs").items()) {
      if (!path.is_string()) throw ConfigError("evaluate.model_runs." + name + ": expected a path");
      model_runs.emplace(name, path.get<std::string>());
    }
  const std::vector<std::string> all_metrics = {"weather", "climate", "regimes", "likelihood", "cost"};
  const auto metrics = r.get("metrics", all_metrics);
  for (const auto& m : metrics)
    if (std::find(all_metrics.begin(), all_metrics.end(), m) == all_metrics.end())
      throw ConfigError("evaluate.metrics: unknown metric \"" + m + "\"");
  auto wants = [&](const std::string& m) {
    return std::find(metrics.begin(), metrics.end(), m) != metrics.end();
  };
  const std::uint64_t seed = pick_seed(opt, r);

  auto sim_cfg = r.child("simulation");
  const double sim_duration = scaled(sim_cfg.get("duration", 5000.0), opt.scale);
  const auto sim_spinup = sim_cfg.get<std::size_t>("spinup", 100);
  sim_cfg.finish();

  auto wcfg = r.child("weather");
  EnsembleSpec ens;
  ens.n_init = scaled_count(wcfg.get<std::size_t>("n_init", 100), opt.scale);
  ens.n_members = wcfg.get<std::size_t>("n_members", 20);
  ens.horizon = wcfg.get("horizon", 3.5);
  ens.spinup = wcfg.get<std::size_t>("spinup", 100);
  ens.min_separation = wcfg.get("min_separation", 1.0);
  ens.seed = seed;
  wcfg.finish();

  auto ccfg = r.child("climate");
  const auto x_bins = ccfg.get<std::size_t>("bins", 100);
  const double pad = ccfg.get("pad", 0.05);
  const double eps = ccfg.get("smoothing_eps", 1e-12);
  const bool fifths = ccfg.get("fifths", true);
  ccfg.finish();

  auto gcfg = r.child("regimes");
  const double smooth_window = gcfg.get("window", 0.4);
  const auto bins2d = gcfg.get<std::size_t>("bins2d", 40);
  const auto bins1d = gcfg.get<std::size_t>("bins1d", 60);
  gcfg.finish();

  const auto holdout_paths = read_paths(r, "holdout", {truth_path});
  r.finish();

  const Trajectory truth = read_trajectory(truth_path);
  const double dt = truth.dt_save;
  auto same_dt = [&](double other, const std::string& what) {
    if (std::abs(other - dt) > 1e-12 * dt)
      throw ConfigError("evaluate: " + what + " uses dt=" + std::to_string(other) +
                        " but the truth uses dt_save=" + std::to_string(dt));
  };
  for (const auto& [name, m] : models) same_dt(model_dt(m), "model " + name);

  EvalReport report;
  json& out = report.data();
  out["truth"] = {{"path", truth_path.string()}, {"F", truth.F}, {"rows", truth.rows()}, {"dt_save", dt}};
  out["seed"] = seed;

  if (wants("weather")) {
    for (const auto& [name, m] : models) {
      const auto c = run_weather_eval(m, truth, ens);
      out["weather"][name] = to_json(c);
      report.add_csv("weather_" + name, weather_csv(c));
    }
    out["weather_spec"] = {{"n_init", ens.n_init}, {"n_members", ens.n_members}, {"horizon", ens.horizon},
                           {"spinup", ens.spinup}, {"min_separation", ens.min_separation}};
  }

  std::vector<RunSet> runs;
  if (wants("climate") || wants("regimes")) {
    for (const auto& [name, path] : model_runs) {
      RunSet rs{name, read_trajectory(path)};
      same_dt(rs.traj.dt_save, "run " + name);
      runs.push_back(std::move(rs));
    }
    for (const auto& [name, m] : models) {
      if (model_runs.count(name)) continue;
      if (truth.rows() < sim_spinup + 2) throw ConfigError("evaluate: truth too short to start simulations");
      const std::size_t row = sim_spinup;
      SimulationSpec spec;
      spec.F = truth.F;
      spec.steps = static_cast<std::size_t>(std::llround(sim_duration / dt));
      spec.seed = seed;
      const std::vector<double> x0(truth.row(row).begin(), truth.row(row).end());
      const auto res = simulate(m, x0, warm_state(m, truth, row + 1, truth.F, sim_spinup), spec);
      runs.push_back({name, res.traj, res.blew_up, res.blew_up ? res.blowup_time : 0.0});
    }
    for (const auto& rs : runs)
      out["simulations"][rs.name] = {{"rows", rs.traj.rows()}, {"blew_up", rs.blew_up},
                                     {"blowup_time", rs.blew_up ? json(rs.blowup_time) : json(nullptr)}};
  }

  if (wants("climate")) {
    const HistogramSpec xs = [&] {
      auto s = default_x_spec(truth.data, x_bins, pad);
      s.smoothing_eps = eps;
      return s;
    }();
    const auto q = histogram(truth.data, xs);
    std::vector<std::string> names = {"truth"};
    std::vector<Histogram> hists = {q};
    out["climate"]["x_histogram"]["truth"] = to_json(q);
    for (const auto& rs : runs) {
      const auto p = histogram(rs.traj.data, xs);
      out["climate"]["x_histogram"][rs.name] = to_json(p);
      out["kl"]["x"][rs.name] = kl_divergence(q.mass, p.mass, eps);
      if (fifths && rs.traj.rows() >= 5) {
        // Split on row boundaries so each fifth holds whole states.
        const std::size_t rows5 = rs.traj.rows() / 5 * 5;
        out["kl"]["x_fifths"][rs.name] =
            fifths_kl(truth.data, std::span<const double>(rs.traj.data).first(rows5 * static_cast<std::size_t>(rs.traj.K)), xs);
      }
      names.push_back(rs.name);
      hists.push_back(p);
    }
    report.add_csv("climate_x_histogram", histogram_csv(names, hists));
  }

  if (wants("regimes")) {
    const Trajectory smooth_truth = smooth_running_mean(truth, smooth_window);
    const RegimeBasis basis = pca_fit(smooth_truth);
    json eofs = json::array();
    for (int j = 0; j < basis.K; ++j) {
      const auto col = eof_column(basis, j);
      eofs.push_back({{"explained", basis.explained[static_cast<std::size_t>(j)]},
                      {"vector", col},
                      {"dominant_wavenumber", dominant_wavenumber(col)}});
    }
    out["regimes"]["basis"] = {{"mean", basis.mean}, {"eofs", eofs}, {"rank_deficient", basis.rank_deficient},
                               {"smoothing_window", smooth_window}};
    const auto truth_series = regime_projection(smooth_truth, basis);
    const auto s12 = padded_spec(truth_series.pc12, bins1d, pad, eps);
    const auto s34 = padded_spec(truth_series.pc34, bins1d, pad, eps);
    const auto th = regime_histograms(truth_series, s12, s34, bins2d);
    out["regimes"]["histograms"]["truth"] = {{"joint", to_json(th.joint)}, {"pc12", to_json(th.pc12)},
                                             {"pc34", to_json(th.pc34)}};
    report.add_csv("regime_joint_truth", joint_csv(th.joint));
    std::vector<std::string> names = {"truth"};
    std::vector<Histogram> h12 = {th.pc12}, h34 = {th.pc34};
    for (const auto& rs : runs) {
      if (rs.traj.rows() * dt < smooth_window + dt) continue;
      const auto series = regime_projection(smooth_running_mean(rs.traj, smooth_window), basis);
      const auto h = regime_histograms(series, s12, s34, bins2d);
      out["regimes"]["histograms"][rs.name] = {{"joint", to_json(h.joint)}, {"pc12", to_json(h.pc12)},
                                               {"pc34", to_json(h.pc34)}};
      out["kl"]["regime_joint"][rs.name] = kl_divergence(th.joint.mass, h.joint.mass, eps);
      out["kl"]["regime_pc12"][rs.name] = kl_divergence(th.pc12.mass, h.pc12.mass, eps);
      out["kl"]["regime_pc34"][rs.name] = kl_divergence(th.pc34.mass, h.pc34.mass, eps);
      report.add_csv("regime_joint_" + rs.name, joint_csv(h.joint));
      names.push_back(rs.name);
      h12.push_back(h.pc12);
      h34.push_back(h.pc34);
    }
    report.add_csv("regime_pc12", histogram_csv(names, h12));
    report.add_csv("regime_pc34", histogram_csv(names, h34));
  }

  if (wants("likelihood")) {
    std::vector<Trajectory> holdouts;
    for (const auto& p : holdout_paths) {
      holdouts.push_back(read_trajectory(p));
      same_dt(holdouts.back().dt_save, "hold-out " + p.string());
    }
    std::vector<NamedModel> named;
    for (const auto& [name, m] : models) named.push_back({name, m});
    const auto table = holdout_likelihood_table(named, holdouts);
    out["likelihood"] = to_json(table);
    CsvTable prof;
    for (const auto& e : table) {
      std::ostringstream col;
      col << e.model << "_F" << e.F;
      prof.header.push_back(col.str());
      prof.columns.push_back(e.window_profile);
    }
    if (!prof.header.empty()) report.add_csv("likelihood_window_profile", prof);
  }

  if (wants("cost")) {
    RnnArch arch;
    for (const auto& [name, m] : models)
      if (const auto* rn = std::get_if<RnnModel>(&m)) arch = rn->arch();
    L96Config cfg;
    cfg.K = truth.K;
    out["cost"] = cost_report(cfg, arch, dt);
  }

  report.write(opt.out);
  std::cout << (fs::path(opt.out) / "report.json").string() << '\n';
  return 0;
}

// --------------------------------------------------------------------- cost

int cmd_cost(const CommonOptions& opt) {
  ConfigReader r(load_config(opt), "cost");
  const L96Config cfg = read_system(r.child("system"));
  const RnnArch arch = read_arch(r.child("architecture"));
  const double dt = r.get("dt", 0.005);
  const double dt_inner = r.get("dt_inner", 0.001);
  r.finish();
  const json rep = cost_report(cfg, arch, dt, dt_inner);
  write_json_file(fs::path(opt.out) / "cost.json", rep);
  std::cout << "flops per step (dt=" << dt << "): polynomial " << rep["polynomial"] << ", rnn "
            << rep["rnn"] << ", truth " << rep["truth"] << '\n';
  return 0;
}

}  // namespace l96sp::cli
