#include "amusic/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "amusic/error.hpp"

namespace amusic {

namespace {

constexpr int kMaxIterations = 300;
constexpr Scalar kRelTolerance = 1e-12;
constexpr Scalar kTiny = 1e-300;

// Continued fraction for I_x(a, b); converges quickly for x < (a + 1) / (a + b + 2).
Scalar beta_continued_fraction(Scalar a, Scalar b, Scalar x) {
  const Scalar qab = a + b;
  const Scalar qap = a + 1;
  const Scalar qam = a - 1;
  Scalar c = 1;
  Scalar d = 1 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1 / d;
  Scalar h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const Scalar m2 = 2.0 * m;
    Scalar aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1 / d;
    const Scalar del = d * c;
    h *= del;
    if (std::fabs(del - 1) < kRelTolerance) break;
  }
  return h;
}

}  // namespace

Scalar incomplete_beta(Scalar a, Scalar b, Scalar x) {
  if (!(a > 0) || !(b > 0)) throw Error(ErrorCode::InvalidArgument, "beta parameters must be > 0");
  if (!(x >= 0 && x <= 1)) throw Error(ErrorCode::InvalidArgument, "x must be in [0, 1]");
  if (x == 0) return 0;
  if (x == 1) return 1;
  const Scalar log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const Scalar front = std::exp(log_front);
  if (x < (a + 1) / (a + b + 2)) return front * beta_continued_fraction(a, b, x) / a;
  return 1 - front * beta_continued_fraction(b, a, 1 - x) / b;
}

Scalar student_t_two_tailed_p(Scalar t, Index nu) {
  if (nu < 1) throw Error(ErrorCode::InvalidDof, "degrees of freedom must be >= 1, got " + std::to_string(nu));
  if (std::isnan(t)) throw Error(ErrorCode::InvalidArgument, "t statistic is NaN");
  if (std::isinf(t)) return 0;
  const Scalar v = static_cast<Scalar>(nu);
  const Scalar t2 = t * t;
  // x = nu / (nu + t^2), written to avoid cancellation for small |t|
  const Scalar p = incomplete_beta(v / 2, 0.5, v / (v + t2));
  return std::clamp(p, 0.0, 1.0);
}

PairedTestResult paired_t_test(std::span<const Scalar> a, std::span<const Scalar> b,
                               Scalar alpha) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::LengthMismatch, "paired samples of sizes " + std::to_string(a.size()) +
                                               " and " + std::to_string(b.size()));
  }
  if (a.size() < 2) throw Error(ErrorCode::TooFewSamples, "paired t-test needs n >= 2");
  if (!(alpha > 0 && alpha < 1)) throw Error(ErrorCode::InvalidArgument, "alpha must be in (0, 1)");

  const Index n = static_cast<Index>(a.size());
  const VectorX<Scalar> d = Eigen::Map<const VectorX<Scalar>>(a.data(), n) -
                            Eigen::Map<const VectorX<Scalar>>(b.data(), n);
  const Scalar mean = d.mean();
  const Scalar var = (d.array() - mean).square().sum() / static_cast<Scalar>(n - 1);
  const Scalar sd = std::sqrt(var);

  PairedTestResult r;
  r.degrees_of_freedom = n - 1;
  if (sd == 0) {
    if (mean == 0) {
      r.t_statistic = 0;
      r.p_value = 1;
    } else {
      r.t_statistic = std::copysign(std::numeric_limits<Scalar>::infinity(), mean);
      r.p_value = 0;
    }
  } else {
    r.t_statistic = mean / (sd / std::sqrt(static_cast<Scalar>(n)));
    r.p_value = student_t_two_tailed_p(r.t_statistic, r.degrees_of_freedom);
  }
  r.reject_h0 = r.p_value < alpha;
  return r;
}

}  // namespace amusic
