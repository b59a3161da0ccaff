#include "gllm/inference.hpp"

#include <stdexcept>
#include <string>

namespace gllm {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
}

}  // namespace

TestOutcome goodness_of_fit(const FitResult& fit, double alpha) {
  check_alpha(alpha);
  if (!fit.converged) throw std::invalid_argument("goodness of fit requested for an unconverged fit");
  TestOutcome out;
  out.df = fit.df;
  if (fit.df == 0) {
    out.statistic = 0.0;
    out.p_value = 1.0;
  } else {
    out.statistic = fit.g2;
    out.p_value = chisq_sf(fit.g2, static_cast<int>(fit.df));
  }
  out.supported = out.p_value >= alpha;
  return out;
}

TestOutcome deviance_difference(const FitResult& smaller, const FitResult& larger, double alpha) {
  check_alpha(alpha);
  if (!smaller.converged || !larger.converged)
    throw std::invalid_argument("deviance difference requires converged fits");
  if (smaller.df < larger.df) throw std::invalid_argument("deviance difference: models are not nested (df increases)");

  TestOutcome out;
  out.df = smaller.df - larger.df;
  double stat = smaller.g2 - larger.g2;
  if (stat < -kNestingSlack)
    throw std::invalid_argument("deviance difference " + std::to_string(stat) +
                                " is negative; models are not nested or a fit did not converge");
  if (stat < 0.0) stat = 0.0;
  if (out.df == 0) {
    if (stat > kNestingSlack) throw std::invalid_argument("deviance difference: equal df but different deviances");
    out.statistic = 0.0;
    out.p_value = 1.0;
  } else {
    out.statistic = stat;
    out.p_value = chisq_sf(stat, static_cast<int>(out.df));
  }
  out.supported = out.p_value >= alpha;
  return out;
}

}  // namespace gllm
