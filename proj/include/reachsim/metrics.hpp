#pragma once

#include "reachsim/sim_engine.hpp"

namespace reachsim {

/// Trace has no usable motion (zero chord or all-zero speed).
class DegenerateMotionError : public std::runtime_error {
public:
  explicit DegenerateMotionError(const std::string& what) : std::runtime_error(what) {}
};

/// Straightness and velocity-profile statistics of one reach.
struct MotionMetrics {
  double path_length = 0.0;           // m
  double chord_length = 0.0;          // m, start to end
  double max_lateral_deviation = 0.0; // m, perpendicular to the chord
  double straightness_ratio = 0.0;    // max_lateral_deviation / chord_length
  double peak_speed = 0.0;            // m/s
  double t_peak_fraction = 0.0;       // (t_peak - t_onset) / t_move
  double symmetry_index = 0.0;        // speed area before t_peak / total area
  int n_speed_peaks = 0;              // local maxima above 10% of peak
};

/// Measures the trace. Motion onset/offset at 5% of peak speed; speed-peak
/// plateaus resolve to their midpoint; integrals by trapezoid rule.
/// Throws DegenerateMotionError on traces with no motion.
MotionMetrics compute_metrics(const SimTrace& trace);

/// Fixed-order CSV header and row for a metrics report.
std::string metrics_csv_header();
std::string metrics_csv_row(const MotionMetrics& m);

/// Human-readable multi-line report.
std::string metrics_report(const MotionMetrics& m);

} // namespace reachsim
