#include "reachsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace reachsim {

namespace {

double interp_time(const std::vector<double>& t, const std::vector<double>& s, double t_query) {
  // linear interpolation of s at t_query; t strictly increasing
  auto it = std::lower_bound(t.begin(), t.end(), t_query);
  if (it == t.begin()) return s.front();
  if (it == t.end()) return s.back();
  const size_t hi = static_cast<size_t>(it - t.begin());
  const size_t lo = hi - 1;
  const double w = (t_query - t[lo]) / (t[hi] - t[lo]);
  return s[lo] + w * (s[hi] - s[lo]);
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& s, size_t a, size_t b,
                 double t_end) {
  // integral of s dt over [t[a], t_end] with t_end within [t[a], t[b]]
  double area = 0.0;
  for (size_t k = a; k + 1 <= b; ++k) {
    if (t[k + 1] <= t_end) {
      area += 0.5 * (s[k] + s[k + 1]) * (t[k + 1] - t[k]);
    } else {
      const double s_end = interp_time(t, s, t_end);
      area += 0.5 * (s[k] + s_end) * (t_end - t[k]);
      break;
    }
  }
  return area;
}

} // namespace

MotionMetrics compute_metrics(const SimTrace& trace) {
  const size_t m = trace.records.size();
  if (m < 3) throw DegenerateMotionError("trace has fewer than 3 records");

  std::vector<double> t(m), s(m);
  std::vector<Vec3> x(m);
  for (size_t k = 0; k < m; ++k) {
    t[k] = trace.records[k].t;
    s[k] = trace.records[k].speed;
    x[k] = trace.records[k].x;
  }

  MotionMetrics out;
  out.peak_speed = *std::max_element(s.begin(), s.end());
  if (!(out.peak_speed > 0.0)) throw DegenerateMotionError("trace speed is identically zero");

  const Vec3 chord = x.back() - x.front();
  out.chord_length = chord.norm();
  if (out.chord_length < 1e-9) throw DegenerateMotionError("trace chord is degenerate (start == end)");
  const Vec3 u = chord / out.chord_length;

  for (size_t k = 0; k + 1 < m; ++k) out.path_length += (x[k + 1] - x[k]).norm();
  for (size_t k = 0; k < m; ++k) {
    const Vec3 d = x[k] - x.front();
    out.max_lateral_deviation = std::max(out.max_lateral_deviation, (d - d.dot(u) * u).norm());
  }
  out.straightness_ratio = out.max_lateral_deviation / out.chord_length;

  // Motion window: 5%-of-peak onset/offset rule.
  const double gate = 0.05 * out.peak_speed;
  size_t on = 0, off = m - 1;
  while (on < m && !(s[on] > gate)) ++on;
  while (off > on && !(s[off] > gate)) --off;
  if (off <= on) throw DegenerateMotionError("trace has no samples above the motion gate");
  const double t_move = t[off] - t[on];

  // Peak instant: midpoint of the (possibly single-sample) peak plateau.
  const double plateau_gate = out.peak_speed * (1.0 - 1e-9);
  size_t first_pk = on, last_pk = on;
  for (size_t k = on; k <= off; ++k) {
    if (s[k] >= plateau_gate) {
      first_pk = k;
      break;
    }
  }
  for (size_t k = off + 1; k-- > on;) {
    if (s[k] >= plateau_gate) {
      last_pk = k;
      break;
    }
  }
  const double t_peak = 0.5 * (t[first_pk] + t[last_pk]);
  out.t_peak_fraction = std::clamp((t_peak - t[on]) / t_move, 0.0, 1.0);

  const double total_area = trapezoid(t, s, on, off, t[off]);
  if (total_area > 0.0) {
    out.symmetry_index = std::clamp(trapezoid(t, s, on, off, t_peak) / total_area, 0.0, 1.0);
  }

  // Local speed maxima with plateau collapsing and a 10%-of-peak prominence
  // floor (a peak only counts if the signal drops that far between it and
  // higher ground on both sides), so numerical ripple is ignored.
  const double floor = 0.1 * out.peak_speed;
  std::vector<size_t> candidates;
  size_t k = on;
  while (k <= off) {
    size_t end = k;
    while (end + 1 <= off && s[end + 1] == s[k]) ++end;
    const double left = (k == on) ? -std::numeric_limits<double>::infinity() : s[k - 1];
    const double right = (end == off) ? -std::numeric_limits<double>::infinity() : s[end + 1];
    if (s[k] > left && s[k] > right) candidates.push_back(k);
    k = end + 1;
  }
  for (size_t c : candidates) {
    const double h = s[c];
    // Walk outward to the nearest higher ground; the base on each side is
    // the lowest point passed. A side that runs off the window is open and
    // does not limit prominence.
    double left_base = -std::numeric_limits<double>::infinity();
    bool left_bounded = false;
    for (size_t j = c; j > on;) {
      --j;
      if (s[j] > h) {
        left_bounded = true;
        break;
      }
      left_base = (left_base == -std::numeric_limits<double>::infinity()) ? s[j]
                                                                          : std::min(left_base, s[j]);
    }
    if (!left_bounded) left_base = -std::numeric_limits<double>::infinity();

    double right_base = -std::numeric_limits<double>::infinity();
    bool right_bounded = false;
    for (size_t j = c + 1; j <= off; ++j) {
      if (s[j] > h) {
        right_bounded = true;
        break;
      }
      right_base = (right_base == -std::numeric_limits<double>::infinity()) ? s[j]
                                                                            : std::min(right_base, s[j]);
    }
    if (!right_bounded) right_base = -std::numeric_limits<double>::infinity();

    const double limiting = std::max(left_base, right_base);
    const double prominence =
        (limiting == -std::numeric_limits<double>::infinity()) ? h : h - limiting;
    if (prominence >= floor) ++out.n_speed_peaks;
  }

  return out;
}

std::string metrics_csv_header() {
  return "path_length,chord_length,max_lateral_deviation,straightness_ratio,peak_speed,"
         "t_peak_fraction,symmetry_index,n_speed_peaks";
}

std::string metrics_csv_row(const MotionMetrics& m) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%d", m.path_length,
                m.chord_length, m.max_lateral_deviation, m.straightness_ratio, m.peak_speed,
                m.t_peak_fraction, m.symmetry_index, m.n_speed_peaks);
  return buf;
}

std::string metrics_report(const MotionMetrics& m) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "path_length            %.6f m\n"
                "chord_length           %.6f m\n"
                "max_lateral_deviation  %.6f m\n"
                "straightness_ratio     %.4f\n"
                "peak_speed             %.6f m/s\n"
                "t_peak_fraction        %.4f\n"
                "symmetry_index         %.4f\n"
                "n_speed_peaks          %d\n",
                m.path_length, m.chord_length, m.max_lateral_deviation, m.straightness_ratio,
                m.peak_speed, m.t_peak_fraction, m.symmetry_index, m.n_speed_peaks);
  return buf;
}

} // namespace reachsim
