#pragma once

#include <cmath>

#include <Eigen/Core>

#include "scholartrace/analytics/errors.hpp"

namespace scholartrace::analytics {

template <typename Scalar>
struct Description {
    Eigen::Index n = 0;
    Scalar mean = 0;
    Scalar sd = 0;  ///< sample standard deviation, n − 1 denominator
};

/// Mean and sample sd of a vector. Throws TooFewObservations when n < 2.
template <typename Derived>
Description<typename Derived::Scalar> describe(const Eigen::MatrixBase<Derived>& xs) {
    using Scalar = typename Derived::Scalar;
    if (xs.size() < 2) throw AnalyticsError(AnalyticsErrc::TooFewObservations, "describe needs n >= 2");
    const Scalar mean = xs.mean();
    const Scalar ss = (xs.array() - mean).square().sum();
    return {xs.size(), mean, std::sqrt(ss / Scalar(xs.size() - 1))};
}

}  // namespace scholartrace::analytics
