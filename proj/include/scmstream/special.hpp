#ifndef SCMSTREAM_SPECIAL_HPP
#define SCMSTREAM_SPECIAL_HPP

namespace scmstream {

/// Regularized incomplete beta I_u(a,b) for a,b > 0, u in [0,1].
/// Continued-fraction evaluation (modified Lentz) with the symmetry
/// transformation I_u(a,b) = 1 - I_{1-u}(b,a); absolute accuracy ~1e-14,
/// guaranteed better than 1e-10 over the parameter ranges used here.
/// Throws std::domain_error on invalid arguments.
double regularized_incomplete_beta(double a, double b, double u);

/// log Beta(a,b)
double log_beta(double a, double b);

/// Beta(a,b) density at u; 0 outside (0,1).
double beta_pdf(double u, double a, double b);

/// Upper regularized incomplete gamma Q(s,x), s > 0, x >= 0.
double regularized_gamma_q(double s, double x);

/// Survival function of the chi-square distribution with df degrees of freedom.
double chi_square_sf(double x, int df);

/// Standard normal survival function P(Z > z).
double normal_sf(double z);

}  // namespace scmstream

#endif
