#pragma once

#include <cstdint>

#include <Eigen/Core>

namespace scholartrace::analytics {

/// Weights and training metadata shared by the logistic and SVM fits.
/// Multinomial: one row of `weights` and one `bias` entry per class, the
/// reference class K−1 fixed at zero. SVM: a single row and bias.
template <typename Scalar>
struct LinearModel {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> weights;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> bias;
    int iterations = 0;
    bool converged = false;
    std::uint64_t seed = 0;
    Scalar residual = 0;  ///< gradient norm (logit) or KKT residual (SVM) at termination
};

}  // namespace scholartrace::analytics
