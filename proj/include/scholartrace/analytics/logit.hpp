#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <vector>

#include <Eigen/Core>

#include "scholartrace/analytics/errors.hpp"
#include "scholartrace/analytics/linear_model.hpp"

namespace scholartrace::analytics {

struct LogitOptions {
    double l2 = 0.0;            ///< penalty on weights, not on intercepts
    double tolerance = 1e-8;    ///< on the Euclidean norm of the gradient
    int max_iterations = 20000;
    std::uint64_t seed = 0;     ///< recorded only; the solver starts from zero and is deterministic
};

/// Packs the free parameters: (K−1) blocks of [w_k (d), b_k].
template <typename Scalar>
using ParamVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

namespace detail {

template <typename Scalar, typename DerivedX>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> logits(const Eigen::MatrixBase<DerivedX>& X,
                                                             const ParamVector<Scalar>& theta, int K) {
    const Eigen::Index d = X.cols();
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> z = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(X.rows(), K);
    for (int k = 0; k + 1 < K; ++k) {
        const auto block = theta.segment(k * (d + 1), d + 1);
        z.col(k) = X * block.head(d);
        z.col(k).array() += block(d);
    }
    return z;
}

template <typename Scalar>
Scalar weight_norm2(const ParamVector<Scalar>& theta, Eigen::Index d, int K) {
    Scalar s = 0;
    for (int k = 0; k + 1 < K; ++k) s += theta.segment(k * (d + 1), d).squaredNorm();
    return s;
}

}  // namespace detail

/// Mean log-likelihood minus (l2/2)·‖W‖², for labels in 0..K−1.
template <typename DerivedX, typename Scalar = typename DerivedX::Scalar>
Scalar logit_objective(const Eigen::MatrixBase<DerivedX>& X, const std::vector<int>& y, int K, Scalar l2,
                       const ParamVector<Scalar>& theta) {
    const auto z = detail::logits<Scalar>(X, theta, K);
    Scalar ll = 0;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        const Scalar zmax = z.row(i).maxCoeff();
        const Scalar lse = zmax + std::log((z.row(i).array() - zmax).exp().sum());
        ll += z(i, y[static_cast<std::size_t>(i)]) - lse;
    }
    return ll / Scalar(X.rows()) - l2 / 2 * detail::weight_norm2(theta, X.cols(), K);
}

/// Gradient of logit_objective with respect to the packed parameters.
template <typename DerivedX, typename Scalar = typename DerivedX::Scalar>
ParamVector<Scalar> logit_gradient(const Eigen::MatrixBase<DerivedX>& X, const std::vector<int>& y, int K, Scalar l2,
                                   const ParamVector<Scalar>& theta) {
    const Eigen::Index n = X.rows(), d = X.cols();
    auto z = detail::logits<Scalar>(X, theta, K);
    // residuals 1[y=k] − p_k
    for (Eigen::Index i = 0; i < n; ++i) {
        const Scalar zmax = z.row(i).maxCoeff();
        z.row(i) = (z.row(i).array() - zmax).exp();
        z.row(i) /= -z.row(i).sum();
        z(i, y[static_cast<std::size_t>(i)]) += 1;
    }
    ParamVector<Scalar> g(theta.size());
    for (int k = 0; k + 1 < K; ++k) {
        auto block = g.segment(k * (d + 1), d + 1);
        block.head(d) = X.transpose() * z.col(k) / Scalar(n) - l2 * theta.segment(k * (d + 1), d);
        block(d) = z.col(k).sum() / Scalar(n);
    }
    return g;
}

/// Penalized multinomial logistic regression by full-batch gradient ascent with
/// Barzilai–Borwein steps and a non-monotone Armijo safeguard. Starts from zero.
/// Throws SingleClass when fewer than two classes, InvalidArgument on bad labels.
/// Non-convergence is reported through `converged`, never thrown.
template <typename DerivedX>
LinearModel<typename DerivedX::Scalar> fit_multinomial_logit(const Eigen::MatrixBase<DerivedX>& X,
                                                             const std::vector<int>& y, int K,
                                                             const LogitOptions& options = {}) {
    using Scalar = typename DerivedX::Scalar;
    const Eigen::Index n = X.rows(), d = X.cols();
    if (static_cast<Eigen::Index>(y.size()) != n || n == 0) throw AnalyticsError(AnalyticsErrc::InvalidArgument, "label count");
    if (K < 2) throw AnalyticsError(AnalyticsErrc::SingleClass, "K must be at least 2");
    for (const int label : y) {
        if (label < 0 || label >= K) throw AnalyticsError(AnalyticsErrc::InvalidArgument, "label outside 0..K-1");
    }
    const Scalar l2 = Scalar(options.l2);

    ParamVector<Scalar> theta = ParamVector<Scalar>::Zero((K - 1) * (d + 1));
    Scalar f = logit_objective(X, y, K, l2, theta);
    ParamVector<Scalar> g = logit_gradient(X, y, K, l2, theta);
    std::deque<Scalar> recent{f};
    constexpr std::size_t kMemory = 10;
    Scalar step = 1;

    LinearModel<Scalar> model;
    model.seed = options.seed;
    int it = 0;
    for (; it < options.max_iterations; ++it) {
        if (g.norm() <= Scalar(options.tolerance)) break;
        const Scalar reference = *std::min_element(recent.begin(), recent.end());
        const Scalar gg = g.squaredNorm();
        ParamVector<Scalar> next;
        Scalar f_next = 0;
        bool accepted = false;
        for (int halvings = 0; halvings < 60; ++halvings) {
            next = theta + step * g;
            f_next = logit_objective(X, y, K, l2, next);
            if (std::isfinite(f_next) && f_next >= reference + Scalar(1e-4) * step * gg) {
                accepted = true;
                break;
            }
            step /= 2;
        }
        if (!accepted) break;
        const ParamVector<Scalar> g_next = logit_gradient(X, y, K, l2, next);
        const ParamVector<Scalar> s = next - theta;
        const Scalar sy = -s.dot(g_next - g);
        step = sy > 0 ? std::clamp(s.squaredNorm() / sy, Scalar(1e-10), Scalar(1e10)) : Scalar(1);
        theta = next;
        g = g_next;
        f = f_next;
        recent.push_back(f);
        if (recent.size() > kMemory) recent.pop_front();
    }

    model.iterations = it;
    model.residual = g.norm();
    model.converged = model.residual <= Scalar(options.tolerance);
    model.weights = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(K, d);
    model.bias = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(K);
    for (int k = 0; k + 1 < K; ++k) {
        model.weights.row(k) = theta.segment(k * (d + 1), d).transpose();
        model.bias(k) = theta(k * (d + 1) + d);
    }
    return model;
}

/// Packs a fitted model's free parameters in the layout of logit_gradient.
template <typename Scalar>
ParamVector<Scalar> pack_parameters(const LinearModel<Scalar>& m) {
    const Eigen::Index K = m.weights.rows(), d = m.weights.cols();
    ParamVector<Scalar> theta((K - 1) * (d + 1));
    for (Eigen::Index k = 0; k + 1 < K; ++k) {
        theta.segment(k * (d + 1), d) = m.weights.row(k).transpose();
        theta(k * (d + 1) + d) = m.bias(k);
    }
    return theta;
}

/// Class probabilities for each row of X (n × K).
template <typename Scalar, typename DerivedX>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> predict_proba(const LinearModel<Scalar>& m,
                                                                    const Eigen::MatrixBase<DerivedX>& X) {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> z = X * m.weights.transpose();
    z.rowwise() += m.bias.transpose();
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
        z.row(i) = (z.row(i).array() - z.row(i).maxCoeff()).exp();
        z.row(i) /= z.row(i).sum();
    }
    return z;
}

/// Most probable class for each row; ties go to the lowest class id.
template <typename Scalar, typename DerivedX>
std::vector<int> predict_class(const LinearModel<Scalar>& m, const Eigen::MatrixBase<DerivedX>& X) {
    const auto p = predict_proba(m, X);
    std::vector<int> out(static_cast<std::size_t>(p.rows()));
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
        Eigen::Index best = 0;
        p.row(i).maxCoeff(&best);
        out[static_cast<std::size_t>(i)] = static_cast<int>(best);
    }
    return out;
}

}  // namespace scholartrace::analytics
