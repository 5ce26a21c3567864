#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "steprec/lip_model.hpp"
#include "steprec/step_optimizers.hpp"

namespace steprec {

struct GridSpec {
  double x_lo = -0.4, x_hi = 0.4, x_step = 0.01;   // position axis (m)
  double v_lo = -2.0, v_hi = 2.0, v_step = 0.05;   // velocity axis (m/s)

  int nx() const;
  int nv() const;
  void validate() const;  // throws std::invalid_argument
};

struct ScanConfig {
  LipParams lip;
  GaitTarget target;
  StepBounds bounds;
  CostWeights weights;
};

struct ScanCell {
  ComState state;
  OptimizationOutcome holistic;
  OptimizationOutcome sequential;
  bool has_holistic = false;
  bool has_sequential = false;
  bool ok = true;
  std::string error;
};

/// Solves the configured approaches at every grid state (T_elap = 0).
/// Cells are row-major with x fastest; jobs > 1 partitions rows across
/// threads without changing ordering or values.
std::vector<ScanCell> scan_grid(const GridSpec& gs, const ScanConfig& cfg,
                                bool do_holistic = true,
                                bool do_sequential = true, int jobs = 1);

struct CostComparison {
  std::vector<double> diffs;       // sequential - holistic, per cell
  double threshold;
  int count_above = 0;
  double fraction_above = 0.0;
  std::vector<int> worst_cells;    // indices of up to 10 largest diffs
};

CostComparison compare_costs(const std::vector<ScanCell>& cells,
                             double threshold = 1e-6);

struct RidgeThresholds {
  double dT_s0 = 0.5;  // s
  double dT_s1 = 0.5;  // s
  double dp = 0.1;     // m
};

struct CriticalRidge {
  std::vector<int> cells;
  std::vector<double> analytic_offsets;
};

/// Flags cells whose holistic walking parameters jump past the thresholds
/// versus any 4-neighbor; reports each flagged cell's critical offset.
CriticalRidge detect_critical(const std::vector<ScanCell>& cells,
                              const GridSpec& gs, const LipParams& lip,
                              const RidgeThresholds& thresholds = {});

struct TimingStats {
  double mean = 0.0;
  double median = 0.0;
  double p95 = 0.0;
  int n = 0;
};

struct BenchResult {
  TimingStats holistic;
  TimingStats sequential;
  double ratio = 0.0;  // mean holistic / mean sequential
};

/// Times both approaches serially over identical state lists.
BenchResult benchmark(const std::vector<ComState>& states,
                      const ScanConfig& cfg, int repetitions);

// Scan table serialization (9-significant-digit CSV, lossless at the
// tested tolerances).
void write_scan_csv(std::ostream& out, const std::vector<ScanCell>& cells);

struct ScanTable {
  std::vector<ScanCell> cells;
  bool has_holistic = false;
  bool has_sequential = false;
};

/// Parses a scan CSV; throws std::runtime_error on a malformed header.
ScanTable read_scan_csv(std::istream& in);

}  // namespace steprec
