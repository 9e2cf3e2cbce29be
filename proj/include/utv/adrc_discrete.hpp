#pragma once

#include <cmath>
#include <string>

#include "utv/common.hpp"

namespace utv {

/// Which longitudinal feedback-denominator coefficient set to use.
///
/// The two sets differ only in alpha21. `tabulated` carries a spurious
/// factor 2 that pushes the feedback pole toward z = 2 as Ts -> 0, which
/// destabilizes the controller at small sample times; `rederived` places
/// the pole at z_cl * z_eso^2, consistent with the beta/gamma coefficients
/// and with the continuous design. `rederived` is the default everywhere.
enum class CoeffVariant { rederived, tabulated };

/// Discrete-time lateral feedback controller
///   G_fb(z) = (b10 + b11 z^-1 + b12 z^-2) / (1 + a11 z^-1 + a12 z^-2)
///             * 1 / (1 - z^-1)
/// acting on the negated cross-track error (zero reference).
struct LateralDiscreteCoeffs {
  double alpha11{0.0};
  double alpha12{0.0};
  double beta10{0.0};
  double beta11{0.0};
  double beta12{0.0};
  double ts{0.0};
};

/// Discrete-time longitudinal controller: feedback filter
///   G_fb(z) = (b20 + b21 z^-1) / (1 + a21 z^-1) * 1 / (1 - z^-1)
/// on (prefiltered reference - measurement), with reference prefilter
///   G_pf(z) = (g20 + g21 z^-1 + g22 z^-2) / (b20 + b21 z^-1).
struct LongitudinalDiscreteCoeffs {
  double alpha21{0.0};
  double beta20{0.0};
  double beta21{0.0};
  double gamma20{0.0};
  double gamma21{0.0};
  double gamma22{0.0};
  double ts{0.0};
};

namespace detail {
inline void check_discrete_args(double omega_cl, double omega_eso, double b0, double ts) {
  require_finite(omega_cl, "omega_cl");
  require_finite(omega_eso, "omega_eso");
  require_finite(b0, "b0");
  require_finite(ts, "ts");
  require(omega_cl > 0.0, "omega_cl must be > 0");
  require(omega_eso > 0.0, "omega_eso must be > 0");
  require(b0 != 0.0, "b0 must be nonzero");
  require(ts > 0.0, "ts must be > 0");
}
}  // namespace detail

/// Lateral coefficients with z_cl = exp(-omega_cl Ts), z_eso =
/// exp(-omega_eso Ts). Both coefficient variants coincide for this channel
/// (the tabulated lateral set matches the re-derivation exactly).
inline LateralDiscreteCoeffs lateral_coeffs(double omega_cl, double omega_eso, double b0,
                                            double ts) {
  detail::check_discrete_args(omega_cl, omega_eso, b0, ts);
  const double zc = std::exp(-omega_cl * ts);
  const double ze = std::exp(-omega_eso * ts);
  const double p2 = (1.0 + zc) * (1.0 + zc);
  const double q3 = (1.0 + ze) * (1.0 + ze) * (1.0 + ze);
  const double zc2 = zc * zc;
  const double ze2 = ze * ze;
  const double ze3 = ze2 * ze;
  const double scale = 1.0 / (b0 * ts * ts);

  LateralDiscreteCoeffs c;
  c.alpha11 = -0.125 * p2 * q3 + zc2 * ze3 + 1.0;
  c.alpha12 = zc2 * ze3;
  c.beta10 = scale * (0.25 * p2 * q3 - 2.0 * (zc2 * ze3 + 2.0 * zc + 3.0 * ze - 2.0));
  c.beta11 = scale * (-p2 * q3 + 2.0 * p2 + 6.0 * (zc2 * ze3 + 2.0 * zc * ze + ze2 + ze - 1.0));
  c.beta12 =
      scale * (-0.25 * p2 * q3 + 2.0 * (-2.0 * zc2 * ze3 + 3.0 * zc2 * ze2 + 2.0 * zc * ze3 + 1.0));
  c.ts = ts;
  return c;
}

/// Longitudinal coefficients with z_cl = exp(-omega_cl Ts), z_eso =
/// exp(-omega_eso Ts). b0 is -1 for the along-track channel.
inline LongitudinalDiscreteCoeffs longitudinal_coeffs(double omega_cl, double omega_eso, double b0,
                                                      double ts,
                                                      CoeffVariant variant = CoeffVariant::rederived) {
  detail::check_discrete_args(omega_cl, omega_eso, b0, ts);
  const double zc = std::exp(-omega_cl * ts);
  const double ze = std::exp(-omega_eso * ts);
  const double ze2 = ze * ze;
  const double scale = 1.0 / (b0 * ts);

  LongitudinalDiscreteCoeffs c;
  c.alpha21 = variant == CoeffVariant::rederived ? -zc * ze2 : -2.0 * zc * ze2;
  c.beta20 = scale * (zc * ze2 - 2.0 * ze - zc + 2.0);
  c.beta21 = scale * (2.0 * zc * ze - 2.0 * zc * ze2 + ze2 - 1.0);
  c.gamma20 = scale * (1.0 - zc);
  c.gamma21 = scale * (-2.0 * ze * (1.0 - zc));
  c.gamma22 = scale * (ze2 * (1.0 - zc));
  c.ts = ts;
  return c;
}

/// Plain-text report of the two longitudinal denominator variants for a
/// given design point; used by the tune-report CLI.
inline std::string coefficient_discrepancy_report(double omega_cl, double omega_eso, double b0,
                                                  double ts) {
  const auto re = longitudinal_coeffs(omega_cl, omega_eso, b0, ts, CoeffVariant::rederived);
  const auto tab = longitudinal_coeffs(omega_cl, omega_eso, b0, ts, CoeffVariant::tabulated);
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "longitudinal alpha21: rederived % .12g, tabulated % .12g (ratio 2)\n"
                "  feedback pole: rederived % .6g (stable), tabulated % .6g%s\n"
                "  beta/gamma coefficients are identical between variants\n",
                re.alpha21, tab.alpha21, -re.alpha21, -tab.alpha21,
                std::abs(tab.alpha21) >= 1.0 ? " (UNSTABLE)" : "");
  return buf;
}

/// Lateral difference-equation controller: direct form II transposed
/// biquad cascaded with a clamped accumulator realizing 1/(1 - z^-1).
/// Clamping the stored accumulator at the output limit is the
/// conditional-integration anti-windup.
class LateralDiscreteController {
 public:
  LateralDiscreteController(const LateralDiscreteCoeffs& coeffs, double output_limit)
      : c_(coeffs), limit_(output_limit) {
    detail::require(output_limit > 0.0, "output_limit must be > 0");
  }

  /// One controller tick: consumes the measured cross-track error and
  /// returns the saturated course-rate command [rad/s].
  double step(double e_d_meas) {
    const double x = -e_d_meas;  // zero cross-track reference
    const double w = c_.beta10 * x + s1_;
    s1_ = c_.beta11 * x - c_.alpha11 * w + s2_;
    s2_ = c_.beta12 * x - c_.alpha12 * w;
    accum_ = saturate(accum_ + w, limit_);
    return accum_;
  }

  void reset() { s1_ = s2_ = accum_ = 0.0; }
  const LateralDiscreteCoeffs& coeffs() const { return c_; }

 private:
  LateralDiscreteCoeffs c_;
  double limit_;
  double s1_{0.0};
  double s2_{0.0};
  double accum_{0.0};
};

/// Longitudinal difference-equation controller: reference prefilter,
/// first-order feedback section, free accumulator (the speed command is
/// not saturated).
class LongitudinalDiscreteController {
 public:
  explicit LongitudinalDiscreteController(const LongitudinalDiscreteCoeffs& coeffs) : c_(coeffs) {
    detail::require(coeffs.beta20 != 0.0, "beta20 must be nonzero");
    pf_b0_ = c_.gamma20 / c_.beta20;
    pf_b1_ = c_.gamma21 / c_.beta20;
    pf_b2_ = c_.gamma22 / c_.beta20;
    pf_a1_ = c_.beta21 / c_.beta20;
  }

  /// One controller tick: measured along-track error plus its reference,
  /// returns the speed command [m/s].
  double step(double e_s_meas, double e_s_ref) {
    const double rf = pf_b0_ * e_s_ref + p1_;
    p1_ = pf_b1_ * e_s_ref - pf_a1_ * rf + p2_;
    p2_ = pf_b2_ * e_s_ref;
    const double e = rf - e_s_meas;
    const double w = c_.beta20 * e + f1_;
    f1_ = c_.beta21 * e - c_.alpha21 * w;
    accum_ += w;
    return accum_;
  }

  void reset() { p1_ = p2_ = f1_ = accum_ = 0.0; }
  const LongitudinalDiscreteCoeffs& coeffs() const { return c_; }

 private:
  LongitudinalDiscreteCoeffs c_;
  double pf_b0_, pf_b1_, pf_b2_, pf_a1_;
  double p1_{0.0};
  double p2_{0.0};
  double f1_{0.0};
  double accum_{0.0};
};

}  // namespace utv
