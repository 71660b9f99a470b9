#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Core>

#include "scholartrace/analytics/errors.hpp"
#include "scholartrace/analytics/linear_model.hpp"

namespace scholartrace::analytics {

struct SvmOptions {
    double tolerance = 1e-6;   ///< on the largest projected dual gradient
    int max_epochs = 200000;
    std::uint64_t seed = 0;    ///< recorded only; traversal order is fixed
};

namespace detail {

// Projected gradient of the dual at coordinate i.
template <typename Scalar>
Scalar projected_gradient(Scalar gradient, Scalar alpha, Scalar C) {
    if (alpha <= 0) return std::min(gradient, Scalar(0));
    if (alpha >= C) return std::max(gradient, Scalar(0));
    return gradient;
}

}  // namespace detail

/// Linear soft-margin SVM (hinge loss) by dual coordinate descent in fixed
/// index order. The bias is learned as the weight of a constant feature 1.
/// `y` must hold ±1 with both classes present (else SingleClass).
template <typename DerivedX>
LinearModel<typename DerivedX::Scalar> svm_train(const Eigen::MatrixBase<DerivedX>& X, const std::vector<int>& y,
                                                 double C, const SvmOptions& options = {}) {
    using Scalar = typename DerivedX::Scalar;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    const Eigen::Index n = X.rows(), d = X.cols();
    if (static_cast<Eigen::Index>(y.size()) != n || n == 0) throw AnalyticsError(AnalyticsErrc::InvalidArgument, "label count");
    if (!(C > 0)) throw AnalyticsError(AnalyticsErrc::InvalidArgument, "C must be positive");
    bool pos = false, neg = false;
    for (const int label : y) {
        if (label == 1) pos = true;
        else if (label == -1) neg = true;
        else throw AnalyticsError(AnalyticsErrc::InvalidArgument, "labels must be +1 or -1");
    }
    if (!pos || !neg) throw AnalyticsError(AnalyticsErrc::SingleClass, "both classes are required");

    const Scalar c = Scalar(C);
    Vector w = Vector::Zero(d + 1);  // last entry is the bias
    Vector alpha = Vector::Zero(n);
    Vector q(n);
    for (Eigen::Index i = 0; i < n; ++i) q(i) = X.row(i).squaredNorm() + 1;

    const auto gradient = [&](Eigen::Index i) {
        return Scalar(y[static_cast<std::size_t>(i)]) * (X.row(i).dot(w.head(d)) + w(d)) - 1;
    };
    const auto residual = [&] {
        Scalar r = 0;
        for (Eigen::Index i = 0; i < n; ++i) r = std::max(r, std::abs(detail::projected_gradient(gradient(i), alpha(i), c)));
        return r;
    };

    LinearModel<Scalar> model;
    model.seed = options.seed;
    const Scalar tol = Scalar(options.tolerance);
    int epoch = 0;
    for (; epoch < options.max_epochs; ++epoch) {
        Scalar worst = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const Scalar g = gradient(i);
            const Scalar pg = detail::projected_gradient(g, alpha(i), c);
            worst = std::max(worst, std::abs(pg));
            if (pg == 0) continue;
            const Scalar old = alpha(i);
            alpha(i) = std::clamp(old - g / q(i), Scalar(0), c);
            const Scalar delta = (alpha(i) - old) * Scalar(y[static_cast<std::size_t>(i)]);
            w.head(d) += delta * X.row(i).transpose();
            w(d) += delta;
        }
        if (worst <= tol && residual() <= tol) {
            ++epoch;
            break;
        }
    }
    model.iterations = epoch;
    model.residual = residual();
    model.converged = model.residual <= tol;
    model.weights = w.head(d).transpose();
    model.bias = Vector::Constant(1, w(d));
    return model;
}

template <typename Scalar, typename DerivedV>
Scalar svm_decision(const LinearModel<Scalar>& m, const Eigen::MatrixBase<DerivedV>& x) {
    return m.weights.row(0).dot(x.template cast<Scalar>()) + m.bias(0);
}

/// +1 when the decision value is ≥ 0, otherwise −1.
template <typename Scalar, typename DerivedV>
int svm_predict(const LinearModel<Scalar>& m, const Eigen::MatrixBase<DerivedV>& x) {
    return svm_decision(m, x) >= 0 ? 1 : -1;
}

}  // namespace scholartrace::analytics
