#pragma once

#include <cstddef>
#include <vector>

#include "l96sp/climate.hpp"
#include "l96sp/dynamics.hpp"

namespace l96sp {

/// Principal components of the X ring. eof is column-major K x K: column j
/// (eof[j * K + i]) is the j-th EOF, sorted by descending variance. Each
/// column's sign is fixed so its largest-magnitude entry is positive.
struct RegimeBasis {
  int K = 0;
  std::vector<double> mean;
  std::vector<double> eof;
  std::vector<double> explained;
  bool rank_deficient = false;

  double at(int i, int j) const { return eof[static_cast<std::size_t>(j) * K + i]; }
};

/// Throws ConfigError if T <= K.
RegimeBasis pca_fit(const Trajectory& traj);

/// Anomalies w.r.t. the basis mean projected onto all EOFs; row-major
/// T x K.
std::vector<double> pc_scores(const Trajectory& traj, const RegimeBasis& basis);

struct RegimeSeries {
  std::vector<double> pc12;  // ||[PC1, PC2]||
  std::vector<double> pc34;  // ||[PC3, PC4]||
};

RegimeSeries regime_projection(const Trajectory& traj, const RegimeBasis& basis);

struct RegimeHistograms {
  Histogram2d joint;
  Histogram pc12;
  Histogram pc34;
};

RegimeHistograms regime_histograms(const RegimeSeries& s, const HistogramSpec& spec12,
                                   const HistogramSpec& spec34, std::size_t bins2d = 40);

/// Spatial power |DFT|^2 of a length-K vector at wavenumbers 0..K/2.
std::vector<double> wavenumber_power(const std::vector<double>& v);

/// Wavenumber with the largest power (ties go to the smaller one).
int dominant_wavenumber(const std::vector<double>& v);

/// EOF column j as a vector.
std::vector<double> eof_column(const RegimeBasis& basis, int j);

/// Fraction of time with
/// ||[PC3, PC4]|| above `threshold`.
double minor_regime_fraction(const RegimeSeries& s, double threshold);

}  // namespace l96sp
