#pragma once

#include <stdexcept>

#include <Eigen/Core>

namespace scholartrace::psychometrics {

class DegenerateVariance : public std::domain_error {
public:
    DegenerateVariance() : std::domain_error("DegenerateVariance: total-score variance is zero") {}
};

/// Cronbach's alpha for an n respondents × k items matrix:
///   α = k/(k−1) · (1 − Σ var(item) / var(total)), sample variances (n − 1).
/// Accumulates in long double so identical columns give exactly 1.
/// Throws std::invalid_argument when n < 2 or k < 2, DegenerateVariance when var(total) = 0.
template <typename Derived>
typename Derived::Scalar cronbach_alpha(const Eigen::MatrixBase<Derived>& items) {
    using Scalar = typename Derived::Scalar;
    using Wide = long double;
    const Eigen::Index n = items.rows(), k = items.cols();
    if (n < 2 || k < 2) throw std::invalid_argument("cronbach_alpha needs n >= 2 and k >= 2");

    const Eigen::Matrix<Wide, Eigen::Dynamic, Eigen::Dynamic> x = items.template cast<Wide>();
    const auto centered = (x.rowwise() - x.colwise().mean()).eval();
    const Wide item_variance_sum = centered.colwise().squaredNorm().sum() / static_cast<Wide>(n - 1);
    const Eigen::Matrix<Wide, Eigen::Dynamic, 1> total = x.rowwise().sum();
    const Wide total_variance = (total.array() - total.mean()).square().sum() / static_cast<Wide>(n - 1);
    if (total_variance == Wide{0}) throw DegenerateVariance();

    const Wide kk = static_cast<Wide>(k);
    return static_cast<Scalar>(kk / (kk - 1) * (1 - item_variance_sum / total_variance));
}

}  // namespace scholartrace::psychometrics
