#include "onomastat/stats.hpp"

#include <cfloat>
#include <cmath>
#include <string>

#include "onomastat/errors.hpp"

namespace onomastat::stats {

namespace {

constexpr int kMaxIter = 2000;
constexpr double kEps = 1e-16;
constexpr double kFpMin = 1e-300;

// Lower regularized gamma by series; valid for x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < kMaxIter; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized gamma by Lentz continued fraction; valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kFpMin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = b + an / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

long double log_choose_l(long long n, long long k) {
    return std::lgamma(static_cast<long double>(n) + 1.0L) -
           std::lgamma(static_cast<long double>(k) + 1.0L) -
           std::lgamma(static_cast<long double>(n - k) + 1.0L);
}

long double binomial_log_pmf_l(long long n, long double p, long long k) {
    return log_choose_l(n, k) + static_cast<long double>(k) * std::log(p) +
           static_cast<long double>(n - k) * std::log1p(-p);
}

void check_p(double p, const char* fn) {
    if (!(p >= 0.0 && p <= 1.0))
        throw ConfigError(std::string(fn) + ": p must be in [0, 1]");
}

}  // namespace

double log_choose(long long n, long long k) {
    if (n < 0 || k < 0 || k > n) throw ConfigError("log_choose: need 0 <= k <= n");
    return static_cast<double>(log_choose_l(n, k));
}

double reg_gamma_p(double a, double x) {
    if (!(a > 0.0)) throw ConfigError("reg_gamma_p: a must be positive");
    if (x < 0.0) throw ConfigError("reg_gamma_p: x must be nonnegative");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double reg_gamma_q(double a, double x) {
    if (!(a > 0.0)) throw ConfigError("reg_gamma_q: a must be positive");
    if (x < 0.0) throw ConfigError("reg_gamma_q: x must be nonnegative");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi2_sf(double x, int dof) {
    if (dof < 1) throw ConfigError("chi2_sf: dof must be >= 1");
    if (x < 0.0) throw ConfigError("chi2_sf: x must be nonnegative");
    return reg_gamma_q(dof / 2.0, x / 2.0);
}

double binomial_pmf(long long n, double p, long long k) {
    if (n < 0) throw ConfigError("binomial_pmf: n must be nonnegative");
    check_p(p, "binomial_pmf");
    if (k < 0 || k > n) return 0.0;
    if (p == 0.0) return k == 0 ? 1.0 : 0.0;
    if (p == 1.0) return k == n ? 1.0 : 0.0;
    return static_cast<double>(std::exp(binomial_log_pmf_l(n, p, k)));
}

double binomial_tail(long long n, double p, long long k) {
    if (n < 0) throw ConfigError("binomial_tail: n must be nonnegative");
    check_p(p, "binomial_tail");
    if (k < 0 || k > n) throw ConfigError("binomial_tail: need 0 <= k <= n");
    if (k == 0) return 1.0;
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;

    const long double pl = p;
    const long double q = 1.0L - pl;
    // Anchor at the largest term inside [k, n], then recurse outward; each
    // recurrence step costs only a couple of ulp.
    long long mode = static_cast<long long>(std::floor((n + 1) * p));
    long long anchor = std::min(std::max(mode, k), n);
    long double pmf_anchor = std::exp(binomial_log_pmf_l(n, pl, anchor));

    long double sum = 0.0L, comp = 0.0L;
    auto add = [&](long double v) {  // Kahan
        long double y = v - comp;
        long double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    };

    long double term = pmf_anchor;
    add(term);
    for (long long j = anchor; j < n; ++j) {  // upward
        term *= static_cast<long double>(n - j) / static_cast<long double>(j + 1) * (pl / q);
        if (term == 0.0L) break;
        add(term);
    }
    term = pmf_anchor;
    for (long long j = anchor; j > k; --j) {  // downward
        term *= static_cast<long double>(j) / static_cast<long double>(n - j + 1) * (q / pl);
        if (term == 0.0L) break;
        add(term);
    }

    double out = static_cast<double>(sum);
    if (out > 1.0) out = 1.0;
    if (out == 0.0) out = DBL_MIN;  // mathematically positive; underflow floor
    return out;
}

double binomial_cdf(long long n, double p, long long k) {
    if (n < 0) throw ConfigError("binomial_cdf: n must be nonnegative");
    check_p(p, "binomial_cdf");
    if (k < 0) return 0.0;
    if (k >= n) return 1.0;
    return 1.0 - binomial_tail(n, p, k + 1);
}

long long binomial_quantile(long long n, double p, double q) {
    if (n < 0) throw ConfigError("binomial_quantile: n must be nonnegative");
    check_p(p, "binomial_quantile");
    if (!(q > 0.0 && q <= 1.0)) throw ConfigError("binomial_quantile: q must be in (0, 1]");
    if (p == 0.0) return 0;
    if (p == 1.0 || q == 1.0) return n;  // the 1-quantile is the top of the support
    long double pl = p;
    long double term = std::exp(static_cast<long double>(n) * std::log1p(-pl));
    long double cum = term;
    long long k = 0;
    while (k < n && cum < static_cast<long double>(q)) {
        term *= static_cast<long double>(n - k) / static_cast<long double>(k + 1) *
                (pl / (1.0L - pl));
        cum += term;
        ++k;
    }
    return k;
}

double hypergeometric_pmf(long long total, long long marked, long long draws, long long k) {
    if (total < 0 || marked < 0 || marked > total)
        throw ConfigError("hypergeometric_pmf: need 0 <= marked <= total");
    if (draws < 0 || draws > total)
        throw ConfigError("hypergeometric_pmf: need 0 <= draws <= total");
    long long lo = std::max<long long>(0, draws - (total - marked));
    long long hi = std::min(draws, marked);
    if (k < lo || k > hi) return 0.0;
    long double lp = log_choose_l(marked, k) + log_choose_l(total - marked, draws - k) -
                     log_choose_l(total, draws);
    return static_cast<double>(std::exp(lp));
}

double hypergeometric_cdf(long long total, long long marked, long long draws, long long k) {
    if (total < 0 || marked < 0 || marked > total)
        throw ConfigError("hypergeometric_cdf: need 0 <= marked <= total");
    if (draws < 0 || draws > total)
        throw ConfigError("hypergeometric_cdf: need 0 <= draws <= total");
    long long lo = std::max<long long>(0, draws - (total - marked));
    long long hi = std::min(draws, marked);
    if (k < lo) return 0.0;
    if (k >= hi) return 1.0;
    long double sum = 0.0L;
    for (long long j = lo; j <= k; ++j)
        sum += static_cast<long double>(hypergeometric_pmf(total, marked, draws, j));
    double out = static_cast<double>(sum);
    return out > 1.0 ? 1.0 : out;
}

}  // namespace onomastat::stats
