#pragma once

#include <cmath>
#include <limits>

#include <Eigen/Core>

#include "scholartrace/analytics/describe.hpp"
#include "scholartrace/analytics/special.hpp"

namespace scholartrace::analytics {

template <typename Scalar>
struct TestResult {
    Scalar statistic = 0;
    Scalar df = 0;
    Scalar p_value = 1;
};

enum class TTestKind { Pooled, Welch };

/// Two-sample t-test, two-sided. Pooled-variance Student's t by default.
/// Throws TooFewObservations unless both samples have n ≥ 2.
template <typename DerivedA, typename DerivedB>
TestResult<typename DerivedA::Scalar> t_test(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
                                             TTestKind kind = TTestKind::Pooled) {
    using Scalar = typename DerivedA::Scalar;
    if (a.size() < 2 || b.size() < 2) throw AnalyticsError(AnalyticsErrc::TooFewObservations, "t_test needs n >= 2 per group");
    const auto da = describe(a);
    const auto db = describe(b.template cast<Scalar>());
    const Scalar na = Scalar(da.n), nb = Scalar(db.n);
    const Scalar va = da.sd * da.sd, vb = db.sd * db.sd;

    TestResult<Scalar> r;
    Scalar se = 0;
    if (kind == TTestKind::Pooled) {
        r.df = na + nb - 2;
        const Scalar pooled = ((na - 1) * va + (nb - 1) * vb) / r.df;
        se = std::sqrt(pooled * (1 / na + 1 / nb));
    } else {
        const Scalar qa = va / na, qb = vb / nb;
        se = std::sqrt(qa + qb);
        r.df = (qa + qb) * (qa + qb) / (qa * qa / (na - 1) + qb * qb / (nb - 1));
    }
    const Scalar diff = da.mean - db.mean;
    if (se == 0) {
        // both samples constant
        if (kind == TTestKind::Welch) r.df = na + nb - 2;
        r.statistic = diff == 0 ? Scalar(0) : std::copysign(std::numeric_limits<Scalar>::infinity(), diff);
        r.p_value = diff == 0 ? Scalar(1) : Scalar(0);
        return r;
    }
    r.statistic = diff / se;
    r.p_value = student_t_two_sided_p(r.statistic, r.df);
    return r;
}

/// Pearson χ² test of independence on an r × c table of counts (r, c ≥ 2).
/// `yates` applies the continuity correction; it is only allowed on 2 × 2 tables.
/// Throws ZeroExpectedCount if any expected count is zero.
template <typename Derived>
TestResult<typename Derived::Scalar> chi_square(const Eigen::MatrixBase<Derived>& table, bool yates = false) {
    using Scalar = typename Derived::Scalar;
    if (table.rows() < 2 || table.cols() < 2) {
        throw AnalyticsError(AnalyticsErrc::InvalidArgument, "chi_square needs at least a 2 x 2 table");
    }
    if (yates && (table.rows() != 2 || table.cols() != 2)) {
        throw AnalyticsError(AnalyticsErrc::InvalidArgument, "continuity correction applies to 2 x 2 tables only");
    }
    if ((table.array() < 0).any()) throw AnalyticsError(AnalyticsErrc::InvalidArgument, "negative count");
    const auto rows = table.rowwise().sum().eval();
    const auto cols = table.colwise().sum().eval();
    const Scalar total = table.sum();

    TestResult<Scalar> r;
    for (Eigen::Index i = 0; i < table.rows(); ++i) {
        for (Eigen::Index j = 0; j < table.cols(); ++j) {
            const Scalar expected = rows(i) * cols(j) / total;
            if (!(expected > 0)) throw AnalyticsError(AnalyticsErrc::ZeroExpectedCount, "expected count is zero");
            Scalar dev = std::abs(table(i, j) - expected);
            if (yates) dev -= std::min(Scalar(0.5), dev);
            r.statistic += dev * dev / expected;
        }
    }
    r.df = Scalar((table.rows() - 1) * (table.cols() - 1));
    r.p_value = chi_square_sf(r.statistic, r.df);
    return r;
}

}  // namespace scholartrace::analytics
