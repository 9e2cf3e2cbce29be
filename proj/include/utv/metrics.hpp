#pragma once

#include <cmath>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include "utv/common.hpp"

namespace utv {

/// Trapezoidal integral of |value| over [t0, t1]. The sample series must
/// be sorted and cover the interval; boundary values are interpolated
/// linearly. Throws on a coverage gap.
inline double iae(std::span<const double> t, std::span<const double> v, double t0, double t1) {
  detail::require(t.size() == v.size(), "iae: time/value size mismatch");
  detail::require(t1 >= t0, "iae: t1 must be >= t0");
  if (t1 == t0) return 0.0;
  detail::require(t.size() >= 2, "iae: need at least two samples");
  constexpr double kEps = 1e-9;
  if (t.front() > t0 + kEps || t.back() < t1 - kEps) {
    throw std::invalid_argument("iae: samples do not cover the requested interval");
  }
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double ta = t[i];
    const double tb = t[i + 1];
    detail::require(tb >= ta, "iae: samples must be sorted");
    const double lo = std::max(ta, t0);
    const double hi = std::min(tb, t1);
    if (hi <= lo) continue;
    const double span = tb - ta;
    const double va = span > 0.0 ? v[i] + (v[i + 1] - v[i]) * (lo - ta) / span : v[i];
    const double vb = span > 0.0 ? v[i] + (v[i + 1] - v[i]) * (hi - ta) / span : v[i + 1];
    total += 0.5 * (std::abs(va) + std::abs(vb)) * (hi - lo);
  }
  return total;
}

/// Per-interval integral metrics: cross-track IAE and the IAE of the
/// along-track reference deviation |e_s_ref - e_s|.
struct IntervalMetrics {
  double t0{0.0};
  double t1{0.0};
  double iae_ed{0.0};
  double iae_ese{0.0};
};

/// Metrics for consecutive intervals given by `bounds` (n+1 boundary
/// values for n intervals). Bounds beyond the sampled range are clamped
/// to the final sample time.
inline std::vector<IntervalMetrics> interval_metrics(std::span<const double> t,
                                                     std::span<const double> e_d,
                                                     std::span<const double> e_s_err,
                                                     std::span<const double> bounds) {
  detail::require(bounds.size() >= 2, "interval_metrics: need at least one interval");
  std::vector<IntervalMetrics> out;
  out.reserve(bounds.size() - 1);
  const double t_end = t.empty() ? 0.0 : t.back();
  for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
    IntervalMetrics m;
    m.t0 = std::min(bounds[i], t_end);
    m.t1 = std::min(bounds[i + 1], t_end);
    m.iae_ed = iae(t, e_d, m.t0, m.t1);
    m.iae_ese = iae(t, e_s_err, m.t0, m.t1);
    out.push_back(m);
  }
  return out;
}

/// Side-by-side per-interval comparison of two runs.
class ComparisonTable {
 public:
  ComparisonTable(std::string label_a, std::vector<IntervalMetrics> a, std::string label_b,
                  std::vector<IntervalMetrics> b)
      : label_a_(std::move(label_a)), label_b_(std::move(label_b)), a_(std::move(a)),
        b_(std::move(b)) {
    detail::require(a_.size() == b_.size(), "comparison: interval count mismatch");
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (std::abs(a_[i].t0 - b_[i].t0) > 1e-9 || std::abs(a_[i].t1 - b_[i].t1) > 1e-9) {
        throw std::invalid_argument("comparison: interval boundaries differ");
      }
    }
  }

  /// Long format: controller,interval,iae_ed,iae_ese
  std::string to_csv() const {
    std::string out = "controller,interval,iae_ed,iae_ese\n";
    char line[160];
    for (std::size_t i = 0; i < a_.size(); ++i) {
      std::snprintf(line, sizeof(line), "%s,%zu,%.6f,%.6f\n", label_a_.c_str(), i + 1,
                    a_[i].iae_ed, a_[i].iae_ese);
      out += line;
      std::snprintf(line, sizeof(line), "%s,%zu,%.6f,%.6f\n", label_b_.c_str(), i + 1,
                    b_[i].iae_ed, b_[i].iae_ese);
      out += line;
    }
    return out;
  }

  /// Aligned text, one row per controller, one (iae_ed, iae_ese) column
  /// pair per interval.
  std::string to_text() const {
    std::string out;
    char buf[96];
    out += "interval        ";
    for (std::size_t i = 0; i < a_.size(); ++i) {
      std::snprintf(buf, sizeof(buf), " | %zu [%4.0f,%4.0f)s        ", i + 1, a_[i].t0, a_[i].t1);
      out += buf;
    }
    out += "\nmetric          ";
    for (std::size_t i = 0; i < a_.size(); ++i) out += " |   iae_ed    iae_ese   ";
    out += "\n";
    for (const auto* row : {&a_, &b_}) {
      const std::string& label = row == &a_ ? label_a_ : label_b_;
      std::snprintf(buf, sizeof(buf), "%-16s", label.c_str());
      out += buf;
      for (const auto& m : *row) {
        std::snprintf(buf, sizeof(buf), " | %9.4f %9.4f  ", m.iae_ed, m.iae_ese);
        out += buf;
      }
      out += "\n";
    }
    return out;
  }

  const std::vector<IntervalMetrics>& rows_a() const { return a_; }
  const std::vector<IntervalMetrics>& rows_b() const { return b_; }
  const std::string& label_a() const { return label_a_; }
  const std::string& label_b() const { return label_b_; }

 private:
  std::string label_a_;
  std::string label_b_;
  std::vector<IntervalMetrics> a_;
  std::vector<IntervalMetrics> b_;
};

}  // namespace utv
