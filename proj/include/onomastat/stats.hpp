#pragma once

namespace onomastat::stats {

// log C(n, k); requires 0 <= k <= n.
double log_choose(long long n, long long k);

// Regularized incomplete gamma functions: P(a, x) lower, Q(a, x) = 1 - P
// upper. Series expansion below the a+1 crossover, Lentz continued
// fraction above. Absolute error well under 1e-10 for a <= 100, x <= 500.
double reg_gamma_p(double a, double x);
double reg_gamma_q(double a, double x);

// Upper tail of the chi-squared distribution: P(X >= x) with dof degrees
// of freedom. chi2_sf(0, dof) == 1.
double chi2_sf(double x, int dof);

// Binomial(n, p) mass at k; zero outside [0, n].
double binomial_pmf(long long n, double p, long long k);

// Upper tail P(X >= k), 0 <= k <= n required. Summed in extended precision
// outward from the largest term; absolute error <= 1e-12 for n <= 10^4.
// Mathematically positive results that underflow double are reported as
// DBL_MIN rather than 0.
double binomial_tail(long long n, double p, long long k);

// Lower tail P(X <= k). Defined as 1 - binomial_tail(n, p, k + 1), so the
// two tails always sum to exactly 1.
double binomial_cdf(long long n, double p, long long k);

// Smallest k with P(X <= k) >= q, for q in (0, 1].
long long binomial_quantile(long long n, double p, double q);

// Hypergeometric: probability of k marked items in `draws` draws without
// replacement from a population of `total` items containing `marked`.
double hypergeometric_pmf(long long total, long long marked, long long draws, long long k);
double hypergeometric_cdf(long long total, long long marked, long long draws, long long k);

}  // namespace onomastat::stats
