#pragma once

#include <span>

#include "amusic/types.hpp"

namespace amusic {

/// Regularized incomplete beta function I_x(a, b), evaluated by Lentz's continued fraction.
Scalar incomplete_beta(Scalar a, Scalar b, Scalar x);

/// Two-tailed tail probability of Student's t with `nu` degrees of freedom.
Scalar student_t_two_tailed_p(Scalar t, Index nu);

struct PairedTestResult {
  Scalar t_statistic = 0;
  Index degrees_of_freedom = 0;
  Scalar p_value = 1;
  bool reject_h0 = false;
};

/// Paired-sample two-tailed t-test of mean(a - b) = 0.
///
/// Zero-variance differences are decided directly: all-equal pairs give p = 1,
/// a constant non-zero shift gives p = 0.
PairedTestResult paired_t_test(std::span<const Scalar> a, std::span<const Scalar> b,
                               Scalar alpha = 0.05);

}  // namespace amusic
