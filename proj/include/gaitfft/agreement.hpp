#pragma once

#include "gaitfft/quantile.hpp"
#include "gaitfft/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace gaitfft {

/// Estimates paired with reference (ground-truth) values.
template <typename Scalar>
struct PairedSeries {
  VectorX<Scalar> est;
  VectorX<Scalar> ref;
  std::string metric;
  std::string units;

  Eigen::Index size() const { return est.size(); }

  static PairedSeries make(VectorX<Scalar> est, VectorX<Scalar> ref, std::string metric = {},
                           std::string units = {}) {
    if (est.size() != ref.size()) {
      throw Error(ErrorKind::length_mismatch,
                  "paired series lengths differ: " + std::to_string(est.size()) + " vs " +
                      std::to_string(ref.size()));
    }
    if (est.size() < 3) {
      throw Error(ErrorKind::length_mismatch, "paired series need at least 3 pairs");
    }
    if (!est.allFinite() || !ref.allFinite()) {
      throw Error(ErrorKind::validation, "paired series contain non-finite values");
    }
    return PairedSeries{std::move(est), std::move(ref), std::move(metric), std::move(units)};
  }
};

enum class PercentBase { pair_mean, reference };

template <typename Scalar>
struct BlandAltmanPct {
  Scalar mean_pct_diff{};
  Scalar sd_pct_diff{};
  Scalar ci95_lo{};
  Scalar ci95_hi{};
  Scalar loa_lo{};
  Scalar loa_hi{};
};

/// Bland-Altman on per-pair percent differences 100 (est - ref) / base,
/// with base the pair mean by default. Limits use the sample sd.
template <typename Scalar>
BlandAltmanPct<Scalar> bland_altman_pct(const PairedSeries<Scalar>& s,
                                        PercentBase base = PercentBase::pair_mean,
                                        Scalar z = Scalar(1.96)) {
  const Eigen::Index n = s.size();
  VectorX<Scalar> d(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar denom = base == PercentBase::pair_mean
                             ? (s.est(i) + s.ref(i)) / Scalar(2)
                             : s.ref(i);
    if (denom == Scalar(0)) {
      throw Error(ErrorKind::validation,
                  "percent difference undefined: zero denominator at pair " + std::to_string(i));
    }
    d(i) = Scalar(100) * (s.est(i) - s.ref(i)) / denom;
  }
  BlandAltmanPct<Scalar> ba;
  ba.mean_pct_diff = d.mean();
  ba.sd_pct_diff =
      std::sqrt((d.array() - ba.mean_pct_diff).square().sum() / Scalar(n - 1));
  const Scalar half_ci = z * ba.sd_pct_diff / std::sqrt(Scalar(n));
  ba.ci95_lo = ba.mean_pct_diff - half_ci;
  ba.ci95_hi = ba.mean_pct_diff + half_ci;
  ba.loa_lo = ba.mean_pct_diff - z * ba.sd_pct_diff;
  ba.loa_hi = ba.mean_pct_diff + z * ba.sd_pct_diff;
  return ba;
}

template <typename Scalar>
struct PassingBablok {
  Scalar slope{};
  Scalar intercept{};
  Scalar slope_ci_lo = std::numeric_limits<Scalar>::quiet_NaN();
  Scalar slope_ci_hi = std::numeric_limits<Scalar>::quiet_NaN();
  Scalar intercept_ci_lo = std::numeric_limits<Scalar>::quiet_NaN();
  Scalar intercept_ci_hi = std::numeric_limits<Scalar>::quiet_NaN();
  /// False when n is below the configured floor; the CI fields stay NaN.
  bool ci_available = false;
  /// Number of usable pairwise slopes and the count below -1.
  Eigen::Index n_slopes = 0;
  Eigen::Index offset_k = 0;
};

namespace detail {

template <typename Scalar>
Scalar median_of(std::vector<Scalar> v) {
  return quantile_type7(std::move(v), 0.5);
}

// 1-based rank into the sorted slopes, clamped to the valid range.
template <typename Scalar>
Scalar slope_at(const std::vector<Scalar>& sorted, long long rank) {
  const long long n = static_cast<long long>(sorted.size());
  rank = std::clamp(rank, 1LL, n);
  return sorted[static_cast<std::size_t>(rank - 1)];
}

template <typename Scalar>
Scalar intercept_for(const PairedSeries<Scalar>& s, Scalar slope) {
  std::vector<Scalar> r(static_cast<std::size_t>(s.size()));
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    r[static_cast<std::size_t>(i)] = s.ref(i) - slope * s.est(i);
  }
  return median_of(std::move(r));
}

}  // namespace detail

/// Passing-Bablok regression of ref (y) on est (x).
///
/// Pairwise slopes skip equal-x pairs and drop slopes of exactly -1. The
/// slope is the median of the sorted slopes shifted by K, the count of
/// slopes below -1. Ranks outside [1, N] are clamped.
template <typename Scalar>
PassingBablok<Scalar> passing_bablok(const PairedSeries<Scalar>& s, Eigen::Index ci_min_n = 10,
                                     Scalar z = Scalar(1.96)) {
  const Eigen::Index n = s.size();
  std::vector<Scalar> slopes;
  slopes.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Scalar dx = s.est(j) - s.est(i);
      if (dx == Scalar(0)) continue;
      const Scalar slope = (s.ref(j) - s.ref(i)) / dx;
      if (slope == Scalar(-1)) continue;
      slopes.push_back(slope);
    }
  }
  if (slopes.empty()) {
    throw Error(ErrorKind::validation,
                "Passing-Bablok undefined: no pair has distinct estimates and a slope other than -1");
  }
  std::sort(slopes.begin(), slopes.end());

  PassingBablok<Scalar> pb;
  pb.n_slopes = static_cast<Eigen::Index>(slopes.size());
  pb.offset_k = static_cast<Eigen::Index>(
      std::count_if(slopes.begin(), slopes.end(), [](Scalar v) { return v < Scalar(-1); }));

  const long long big_n = pb.n_slopes;
  const long long k = pb.offset_k;
  if (big_n % 2 == 1) {
    pb.slope = detail::slope_at(slopes, (big_n + 1) / 2 + k);
  } else {
    pb.slope = (detail::slope_at(slopes, big_n / 2 + k) +
                detail::slope_at(slopes, big_n / 2 + 1 + k)) /
               Scalar(2);
  }
  pb.intercept = detail::intercept_for(s, pb.slope);

  if (n >= ci_min_n) {
    const Scalar nn = static_cast<Scalar>(n);
    const Scalar c = z * std::sqrt(nn * (nn - Scalar(1)) * (Scalar(2) * nn + Scalar(5)) /
                                   Scalar(18));
    const auto m1 = static_cast<long long>(std::llround((static_cast<Scalar>(big_n) - c) / 2));
    const long long m2 = big_n - m1 + 1;
    pb.slope_ci_lo = detail::slope_at(slopes, m1 + k);
    pb.slope_ci_hi = detail::slope_at(slopes, m2 + k);
    pb.intercept_ci_lo = detail::intercept_for(s, pb.slope_ci_hi);
    pb.intercept_ci_hi = detail::intercept_for(s, pb.slope_ci_lo);
    pb.ci_available = true;
  }
  return pb;
}

/// Lin's concordance correlation with population (1/n) moments.
template <typename Scalar>
Scalar lins_ccc(const PairedSeries<Scalar>& s) {
  const Scalar mx = s.est.mean();
  const Scalar my = s.ref.mean();
  const auto dx = (s.est.array() - mx);
  const auto dy = (s.ref.array() - my);
  const Scalar vx = dx.square().mean();
  const Scalar vy = dy.square().mean();
  if (vx == Scalar(0) || vy == Scalar(0)) {
    throw Error(ErrorKind::validation, "concordance undefined: a series has zero variance");
  }
  const Scalar sxy = (dx * dy).mean();
  const Scalar ccc = Scalar(2) * sxy / (vx + vy + (mx - my) * (mx - my));
  return std::clamp(ccc, Scalar(-1), Scalar(1));
}

template <typename Scalar>
struct MedianIqr {
  Scalar median{};
  Scalar q1{};
  Scalar q3{};
};

template <typename Scalar>
MedianIqr<Scalar> median_iqr(std::vector<Scalar> values) {
  MedianIqr<Scalar> out;
  out.q1 = quantile_type7(values, 0.25);
  out.median = quantile_type7(values, 0.5);
  out.q3 = quantile_type7(std::move(values), 0.75);
  return out;
}

template <typename Scalar>
struct MedianErrors {
  MedianIqr<Scalar> mdae;
  MedianIqr<Scalar> mdape;
};

/// Median absolute error and median absolute percent error, each with
/// type-7 quartiles.
template <typename Scalar>
MedianErrors<Scalar> median_errors(const PairedSeries<Scalar>& s) {
  std::vector<Scalar> abs_err;
  std::vector<Scalar> pct_err;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s.ref(i) == Scalar(0)) {
      throw Error(ErrorKind::validation,
                  "percent error undefined: zero reference at pair " + std::to_string(i));
    }
    const Scalar e = std::abs(s.est(i) - s.ref(i));
    abs_err.push_back(e);
    pct_err.push_back(Scalar(100) * e / std::abs(s.ref(i)));
  }
  return {median_iqr(std::move(abs_err)), median_iqr(std::move(pct_err))};
}

/// Policy thresholds for the pass/fail flags on a report.
struct AgreementThresholds {
  double slope_lo = 0.9;
  double slope_hi = 1.1;
  /// Intercept tolerance as a fraction of the largest reference value.
  double intercept_fraction = 0.02;
  double ccc_strong = 0.95;
  double ccc_acceptable = 0.9;
};

struct AgreementOptions {
  PercentBase percent_base = PercentBase::pair_mean;
  Eigen::Index pb_ci_min_n = 10;
  AgreementThresholds thresholds;
};

struct AgreementFlags {
  bool slope_acceptable = false;
  bool intercept_acceptable = false;
  bool slope_ci_contains_one = false;
  bool intercept_ci_contains_zero = false;
  bool ccc_strong = false;
  bool ccc_acceptable = false;
};

template <typename Scalar>
struct AgreementReport {
  std::string metric;
  std::string units;
  Eigen::Index n = 0;
  BlandAltmanPct<Scalar> ba;
  PassingBablok<Scalar> pb;
  Scalar ccc{};
  MedianErrors<Scalar> errors;
  AgreementFlags flags;
};

template <typename Scalar>
AgreementReport<Scalar> compare(const PairedSeries<Scalar>& s, const AgreementOptions& opts = {}) {
  AgreementReport<Scalar> r;
  r.metric = s.metric;
  r.units = s.units;
  r.n = s.size();
  r.ba = bland_altman_pct(s, opts.percent_base);
  r.pb = passing_bablok(s, opts.pb_ci_min_n);
  r.ccc = lins_ccc(s);
  r.errors = median_errors(s);

  const auto& t = opts.thresholds;
  const double slope = static_cast<double>(r.pb.slope);
  const double intercept = static_cast<double>(r.pb.intercept);
  const double max_ref = static_cast<double>(s.ref.cwiseAbs().maxCoeff());
  r.flags.slope_acceptable = slope >= t.slope_lo && slope <= t.slope_hi;
  r.flags.intercept_acceptable = std::abs(intercept) <= t.intercept_fraction * max_ref;
  if (r.pb.ci_available) {
    r.flags.slope_ci_contains_one = r.pb.slope_ci_lo <= Scalar(1) && Scalar(1) <= r.pb.slope_ci_hi;
    r.flags.intercept_ci_contains_zero =
        r.pb.intercept_ci_lo <= Scalar(0) && Scalar(0) <= r.pb.intercept_ci_hi;
  }
  r.flags.ccc_strong = static_cast<double>(r.ccc) > t.ccc_strong;
  r.flags.ccc_acceptable = static_cast<double>(r.ccc) >= t.ccc_acceptable;
  return r;
}

}  // namespace gaitfft
