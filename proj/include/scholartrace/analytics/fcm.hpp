#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Core>

#include "scholartrace/analytics/errors.hpp"
#include "scholartrace/common/random.hpp"

namespace scholartrace::analytics {

struct FcmOptions {
    double m = 2.0;        ///< fuzzifier, > 1
    double tolerance = 1e-6;
    int max_iterations = 500;
    std::uint64_t seed = 1;
};

template <typename Scalar>
struct FcmResult {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> centers;     ///< c × d
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> membership;  ///< n × c, rows sum to 1
    std::vector<Scalar> objective;  ///< J_m after each iteration
    int iterations = 0;
    bool converged = false;
};

/// k-means++ seeding: first center uniform, later ones drawn with probability
/// proportional to squared distance to the nearest chosen center. When every
/// remaining point coincides with a center, the next unused row is taken.
template <typename DerivedX>
Eigen::Matrix<typename DerivedX::Scalar, Eigen::Dynamic, Eigen::Dynamic> kmeanspp_seed(
    const Eigen::MatrixBase<DerivedX>& X, int c, Rng& rng) {
    using Scalar = typename DerivedX::Scalar;
    const Eigen::Index n = X.rows();
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> centers(c, X.cols());
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    Eigen::Index first = rng.integer(0, n - 1);
    centers.row(0) = X.row(first);
    used[static_cast<std::size_t>(first)] = true;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> d2 = (X.rowwise() - centers.row(0)).rowwise().squaredNorm();
    for (int j = 1; j < c; ++j) {
        const Scalar total = d2.sum();
        Eigen::Index pick = -1;
        if (total > 0) {
            const Scalar r = Scalar(rng.uniform()) * total;
            Scalar acc = 0;
            for (Eigen::Index i = 0; i < n; ++i) {
                acc += d2(i);
                if (d2(i) > 0 && acc > r) {
                    pick = i;
                    break;
                }
            }
            if (pick < 0) {
                for (Eigen::Index i = n - 1; i >= 0; --i) {
                    if (d2(i) > 0) {
                        pick = i;
                        break;
                    }
                }
            }
        } else {
            for (Eigen::Index i = 0; i < n; ++i) {
                if (!used[static_cast<std::size_t>(i)]) {
                    pick = i;
                    break;
                }
            }
        }
        used[static_cast<std::size_t>(pick)] = true;
        centers.row(j) = X.row(pick);
        d2 = d2.cwiseMin((X.rowwise() - centers.row(j)).rowwise().squaredNorm());
    }
    return centers;
}

namespace detail {

template <typename Scalar, typename DerivedX>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> squared_distances(
    const Eigen::MatrixBase<DerivedX>& X, const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& centers) {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> d2(X.rows(), centers.rows());
    for (Eigen::Index j = 0; j < centers.rows(); ++j) d2.col(j) = (X.rowwise() - centers.row(j)).rowwise().squaredNorm();
    return d2;
}

// u_ij = 1 / Σ_k (d_ij / d_ik)^(2/(m−1)); a point on top of one or more centers
// splits its membership equally among them.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> memberships(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& d2, Scalar m) {
    const Scalar power = 1 / (m - 1);
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> u(d2.rows(), d2.cols());
    for (Eigen::Index i = 0; i < d2.rows(); ++i) {
        const Eigen::Index zeros = (d2.row(i).array() == 0).count();
        if (zeros > 0) {
            u.row(i) = (d2.row(i).array() == 0).template cast<Scalar>() / Scalar(zeros);
            continue;
        }
        for (Eigen::Index j = 0; j < d2.cols(); ++j) {
            u(i, j) = 1 / (d2(i, j) / d2.row(i).array()).pow(power).sum();
        }
        u.row(i) /= u.row(i).sum();
    }
    return u;
}

template <typename Scalar>
Scalar fcm_objective(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& u,
                     const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& d2, Scalar m) {
    return (u.array().pow(m) * d2.array()).sum();
}

}  // namespace detail

/// Fuzzy c-means by alternating membership and center updates from a k-means++
/// start. Stops when the largest membership change is below `tolerance`;
/// otherwise `converged` is false after max_iterations.
/// Throws InvalidArgument unless 2 ≤ c ≤ n and m > 1.
template <typename DerivedX>
FcmResult<typename DerivedX::Scalar> fuzzy_cmeans(const Eigen::MatrixBase<DerivedX>& X, int c,
                                                  const FcmOptions& options = {}) {
    using Scalar = typename DerivedX::Scalar;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    if (c < 2 || c > X.rows()) throw AnalyticsError(AnalyticsErrc::InvalidArgument, "need 2 <= c <= n");
    if (!(options.m > 1)) throw AnalyticsError(AnalyticsErrc::InvalidArgument, "fuzzifier must exceed 1");
    const Scalar m = Scalar(options.m);

    Rng rng(options.seed);
    FcmResult<Scalar> r;
    r.centers = kmeanspp_seed(X, c, rng);
    Matrix u_prev;
    for (int it = 0; it < options.max_iterations; ++it) {
        Matrix u = detail::memberships(detail::squared_distances(X, r.centers), m);
        const Matrix um = u.array().pow(m);
        for (Eigen::Index j = 0; j < c; ++j) {
            const Scalar weight = um.col(j).sum();
            if (weight > 0) r.centers.row(j) = (um.col(j).transpose() * X) / weight;
        }
        r.objective.push_back(detail::fcm_objective(u, detail::squared_distances(X, r.centers), m));
        r.iterations = it + 1;
        const bool settled = u_prev.size() > 0 && (u - u_prev).cwiseAbs().maxCoeff() < Scalar(options.tolerance);
        u_prev = std::move(u);
        if (settled) {
            r.converged = true;
            break;
        }
    }
    r.membership = std::move(u_prev);
    return r;
}

}  // namespace scholartrace::analytics
