#pragma once

#include <cmath>
#include <limits>

#include "scholartrace/analytics/errors.hpp"

// Regularized incomplete beta and gamma functions and the distribution tails
// built on them. Each function has an independent series and continued-fraction
// evaluation so the two can be cross-checked.

namespace scholartrace::analytics {

namespace detail {

template <typename Scalar>
constexpr Scalar kTiny = std::numeric_limits<Scalar>::min() / std::numeric_limits<Scalar>::epsilon();

inline constexpr int kMaxTerms = 200000;

template <typename Scalar>
Scalar log_beta(Scalar a, Scalar b) {
    using std::lgamma;
    return lgamma(a) + lgamma(b) - lgamma(a + b);
}

[[noreturn]] inline void no_convergence(const char* what) { throw AnalyticsError(AnalyticsErrc::NoConvergence, what); }

}  // namespace detail

/// I_x(a, b) by the hypergeometric power series
///   x^a / B(a,b) · Σ_n (1−b)_n / n! · x^n / (a + n).
/// Converges for 0 ≤ x < 1; slow as x → 1.
template <typename Scalar>
Scalar incomplete_beta_series(Scalar a, Scalar b, Scalar x) {
    using std::abs, std::exp, std::log;
    if (x <= 0) return Scalar(0);
    if (x >= 1) return Scalar(1);
    const Scalar eps = std::numeric_limits<Scalar>::epsilon();
    Scalar coeff = 1;  // (1−b)_n x^n / n!
    Scalar sum = 1 / a;
    for (int n = 1; n < detail::kMaxTerms; ++n) {
        coeff *= (Scalar(n) - b) * x / Scalar(n);
        const Scalar term = coeff / (a + Scalar(n));
        sum += term;
        if (abs(term) <= eps * abs(sum) && abs(coeff) <= eps) {
            return exp(a * log(x) - detail::log_beta(a, b)) * sum;
        }
    }
    detail::no_convergence("incomplete beta series");
}

/// I_x(a, b) by the continued fraction (modified Lentz), without the
/// x ↔ 1−x symmetry switch. Fast for x < (a+1)/(a+b+2).
template <typename Scalar>
Scalar incomplete_beta_cf(Scalar a, Scalar b, Scalar x) {
    using std::abs, std::exp, std::log, std::log1p;
    if (x <= 0) return Scalar(0);
    if (x >= 1) return Scalar(1);
    const Scalar eps = std::numeric_limits<Scalar>::epsilon();
    const Scalar tiny = detail::kTiny<Scalar>;
    const Scalar qab = a + b, qap = a + 1, qam = a - 1;
    Scalar c = 1, d = 1 - qab * x / qap;
    if (abs(d) < tiny) d = tiny;
    d = 1 / d;
    Scalar h = d;
    for (int m = 1; m < detail::kMaxTerms; ++m) {
        const Scalar m2 = Scalar(2 * m);
        Scalar aa = Scalar(m) * (b - Scalar(m)) * x / ((qam + m2) * (a + m2));
        d = 1 + aa * d;
        if (abs(d) < tiny) d = tiny;
        c = 1 + aa / c;
        if (abs(c) < tiny) c = tiny;
        d = 1 / d;
        h *= d * c;
        aa = -(a + Scalar(m)) * (qab + Scalar(m)) * x / ((a + m2) * (qap + m2));
        d = 1 + aa * d;
        if (abs(d) < tiny) d = tiny;
        c = 1 + aa / c;
        if (abs(c) < tiny) c = tiny;
        d = 1 / d;
        const Scalar del = d * c;
        h *= del;
        if (abs(del - 1) <= eps) {
            return exp(a * log(x) + b * log1p(-x) - detail::log_beta(a, b)) * h / a;
        }
    }
    detail::no_convergence("incomplete beta continued fraction");
}

/// Regularized incomplete beta I_x(a, b), a, b > 0, x ∈ [0, 1].
template <typename Scalar>
Scalar regularized_incomplete_beta(Scalar a, Scalar b, Scalar x) {
    if (!(a > 0) || !(b > 0) || !(x >= 0 && x <= 1)) {
        throw AnalyticsError(AnalyticsErrc::InvalidArgument, "incomplete beta domain");
    }
    if (x == 0 || x == 1) return x;
    if (x < (a + 1) / (a + b + 2)) return incomplete_beta_cf(a, b, x);
    return 1 - incomplete_beta_cf(b, a, 1 - x);
}

/// Lower regularized gamma P(a, x) by its power series. Converges for all x ≥ 0.
template <typename Scalar>
Scalar gamma_p_series(Scalar a, Scalar x) {
    using std::abs, std::exp, std::log, std::lgamma;
    if (x <= 0) return Scalar(0);
    const Scalar eps = std::numeric_limits<Scalar>::epsilon();
    Scalar ap = a, del = 1 / a, sum = del;
    for (int n = 1; n < detail::kMaxTerms; ++n) {
        ap += 1;
        del *= x / ap;
        sum += del;
        if (abs(del) < abs(sum) * eps) return sum * exp(-x + a * log(x) - lgamma(a));
    }
    detail::no_convergence("incomplete gamma series");
}

/// Upper regularized gamma Q(a, x) by its continued fraction (modified Lentz). Fast for x > a + 1.
template <typename Scalar>
Scalar gamma_q_cf(Scalar a, Scalar x) {
    using std::abs, std::exp, std::log, std::lgamma;
    if (x <= 0) return Scalar(1);
    const Scalar eps = std::numeric_limits<Scalar>::epsilon();
    const Scalar tiny = detail::kTiny<Scalar>;
    Scalar b = x + 1 - a, c = 1 / tiny, d = 1 / b, h = d;
    for (int i = 1; i < detail::kMaxTerms; ++i) {
        const Scalar an = -Scalar(i) * (Scalar(i) - a);
        b += 2;
        d = an * d + b;
        if (abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (abs(c) < tiny) c = tiny;
        d = 1 / d;
        const Scalar del = d * c;
        h *= del;
        if (abs(del - 1) <= eps) return exp(-x + a * log(x) - lgamma(a)) * h;
    }
    detail::no_convergence("incomplete gamma continued fraction");
}

template <typename Scalar>
Scalar gamma_p(Scalar a, Scalar x) {
    if (!(a > 0) || !(x >= 0)) throw AnalyticsError(AnalyticsErrc::InvalidArgument, "incomplete gamma domain");
    return x < a + 1 ? gamma_p_series(a, x) : 1 - gamma_q_cf(a, x);
}

template <typename Scalar>
Scalar gamma_q(Scalar a, Scalar x) {
    if (!(a > 0) || !(x >= 0)) throw AnalyticsError(AnalyticsErrc::InvalidArgument, "incomplete gamma domain");
    return x < a + 1 ? 1 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

/// P(T ≤ t) for Student's t with `df` degrees of freedom.
template <typename Scalar>
Scalar student_t_cdf(Scalar t, Scalar df) {
    using std::isinf;
    if (isinf(t)) return t > 0 ? Scalar(1) : Scalar(0);
    const Scalar tail = regularized_incomplete_beta(df / 2, Scalar(0.5), df / (df + t * t)) / 2;
    return t > 0 ? 1 - tail : tail;
}

/// P(|T| ≥ |t|).
template <typename Scalar>
Scalar student_t_two_sided_p(Scalar t, Scalar df) {
    using std::isinf;
    if (isinf(t)) return Scalar(0);
    return regularized_incomplete_beta(df / 2, Scalar(0.5), df / (df + t * t));
}

/// P(X ≥ x) for a χ² variable with `df` degrees of freedom.
template <typename Scalar>
Scalar chi_square_sf(Scalar x, Scalar df) {
    if (x <= 0) return Scalar(1);
    return gamma_q(df / 2, x / 2);
}

}  // namespace scholartrace::analytics
