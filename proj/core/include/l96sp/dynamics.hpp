#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace l96sp {

/// Largest magnitude a state component may take before a run is declared
/// blown up.
inline constexpr double kBlowUpThreshold = 1e6;

/// Two-tier Lorenz 96 constants.
struct L96Config {
  int K = 8;
  int J = 32;
  double h = 1.0;
  double b = 10.0;
  double c = 10.0;
  double F = 20.0;
  // Diagnostic switch: false drops the advection terms of both tiers.
  bool advection = true;

  /// Throws ConfigError when K < 4, J < 1 or b == 0.
  void validate() const;
};

/// Full two-tier state. Y uses a single global cyclic index of length J*K;
/// Y[j] belongs to sector j / J.
struct TruthState {
  std::vector<double> X;
  std::vector<double> Y;
};

/// Time-major array of saved X states.
struct Trajectory {
  int K = 0;
  double F = 0.0;
  double dt_save = 0.0;
  std::uint64_t seed = 0;
  double t0 = 0.0;
  std::vector<double> data;

  std::size_t rows() const { return K > 0 ? data.size() / static_cast<std::size_t>(K) : 0; }
  std::span<const double> row(std::size_t t) const {
    return {data.data() + t * static_cast<std::size_t>(K), static_cast<std::size_t>(K)};
  }
  std::span<double> row(std::size_t t) {
    return {data.data() + t * static_cast<std::size_t>(K), static_cast<std::size_t>(K)};
  }
  void append(std::span<const double> x) { data.insert(data.end(), x.begin(), x.end()); }
  /// Rows [begin, begin + count), with t0 advanced accordingly.
  Trajectory slice(std::size_t begin, std::size_t count) const;
  /// Throws ConfigError if shape or metadata are invalid or values non-finite.
  void validate() const;
};

/// True when every entry is finite and |v| <= kBlowUpThreshold.
bool within_bounds(std::span<const double> v);

/// Writes (dX/dt, dY/dt) into `out` (resized as needed).
void truth_tendency(const TruthState& s, const L96Config& cfg, TruthState& out);
TruthState truth_tendency(const TruthState& s, const L96Config& cfg);

/// Classical RK4 step of both tiers. Throws BlowUpError if the result
/// leaves the bounded region.
TruthState rk4_step(const TruthState& s, const L96Config& cfg, double dt);

/// Allocation-free RK4 stepper for long runs.
class Rk4Integrator {
 public:
  explicit Rk4Integrator(const L96Config& cfg);

  /// Advances `s` in place. Returns false if the new state is out of bounds.
  bool step(TruthState& s, double dt);
  const L96Config& config() const { return cfg_; }

 private:
  L96Config cfg_;
  TruthState k1_, k2_, k3_, k4_, tmp_;
};

/// X uniform in [-5, 5], Y = 0.
TruthState random_initial_state(const L96Config& cfg, std::uint64_t seed);

struct TruthRunSpec {
  double duration = 1.0;
  double dt_inner = 0.001;
  double dt_save = 0.005;
  double burn_in = 10.0;
};

/// Integrates from `init`, discards `burn_in` MTU, then saves X every
/// dt_save for `duration` MTU. The first saved row is the state at the end
/// of the burn-in; row count is round(duration / dt_save). If `final_state`
/// is non-null it receives the full state at the last saved row.
/// Throws BlowUpError with the failure time measured from the start of
/// integration.
Trajectory generate_truth(const L96Config& cfg, const TruthRunSpec& run, TruthState init,
                          std::uint64_t seed = 0, TruthState* final_state = nullptr);

/// dt * (-x[k-1] (x[k-2] - x[k+1]) - x[k] + F), cyclic in k.
void lambda_tendency(std::span<const double> x, double F, double dt, std::span<double> out);
std::vector<double> lambda_tendency(std::span<const double> x, double F, double dt);

/// RK2 increment omega(x) = lambda(x + lambda(x) / 2). `scratch` must hold
/// 2 * x.size() values.
void rk2_omega(std::span<const double> x, double F, double dt, std::span<double> out,
               std::span<double> scratch);
std::vector<double> rk2_omega(std::span<const double> x, double F, double dt);

/// Number of integer steps of `step` in `span`, or -1 if span is not an
/// integer multiple of step (relative tolerance 1e-9).
long long integer_ratio(double span, double step);

}  // namespace l96sp
