#pragma once

namespace mllab::stats {

/// ln Γ(x) for x > 0 (Lanczos approximation).
double ln_gamma(double x);

/// Regularized lower incomplete gamma P(a, x) = γ(a,x)/Γ(a).
/// Series expansion for x < a+1, Lentz continued fraction otherwise.
double reg_inc_gamma(double a, double x);

/// Regularized incomplete beta I_x(a, b) via the Lentz continued fraction.
double reg_inc_beta(double a, double b, double x);

/// Distribution CDFs, all routed through the two kernels above.
double normal_cdf(double z);
double student_t_cdf(double t, double df);
double chisq_cdf(double x, double df);
double f_cdf(double x, double df1, double df2);

/// Gaussian density with mean mu and standard deviation sigma > 0.
double normal_pdf(double x, double mu, double sigma);

}  // namespace mllab::stats
