#pragma once

#include <cstddef>

#include "gllm/chisq.hpp"
#include "gllm/loglinear.hpp"

namespace gllm {

inline constexpr double kDefaultAlpha = 0.05;
/// Deviance differences down to this value are treated as convergence noise
/// and clamped to zero.
inline constexpr double kNestingSlack = 1e-6;

struct TestOutcome {
  double statistic = 0.0;
  std::size_t df = 0;
  double p_value = 1.0;
  /// p_value ≥ alpha, i.e. the data does not reject the null model.
  bool supported = true;
  friend bool operator==(const TestOutcome&, const TestOutcome&) = default;
};

/// Model vs saturated. Throws std::invalid_argument for an unconverged fit or
/// alpha outside (0, 1).
TestOutcome goodness_of_fit(const FitResult& fit, double alpha = kDefaultAlpha);

/// Nested comparison: `smaller` is the null, `larger` the alternative.
/// Throws when df does not decrease, when a fit did not converge, or when the
/// statistic is below −kNestingSlack.
TestOutcome deviance_difference(const FitResult& smaller, const FitResult& larger, double alpha = kDefaultAlpha);

}  // namespace gllm
