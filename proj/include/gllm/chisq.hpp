#pragma once

namespace gllm {

/// ln Γ(x) for x > 0 (Lanczos, g = 7, n = 9).
double log_gamma(double x);

/// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 − P(a, x).
double regularized_gamma_q(double a, double x);

/// Upper tail P(χ²_df > x). Requires x ≥ 0 and df ≥ 1; +inf maps to 0.
double chisq_sf(double x, int df);

}  // namespace gllm
