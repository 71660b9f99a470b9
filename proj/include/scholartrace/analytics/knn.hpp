#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "scholartrace/analytics/errors.hpp"

namespace scholartrace::analytics {

/// One neighbour: squared Euclidean distance and training-row index.
template <typename Scalar>
struct Neighbor {
    Scalar distance2;
    Eigen::Index index;

    friend bool operator<(const Neighbor& a, const Neighbor& b) {
        return a.distance2 < b.distance2 || (a.distance2 == b.distance2 && a.index < b.index);
    }
    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// The k nearest training rows to `x`, ordered by (distance, index), using a
/// bounded max-heap. Throws EmptyTrainingSet, KTooLarge, or InvalidArgument for k < 1.
template <typename DerivedX, typename DerivedQ>
std::vector<Neighbor<typename DerivedX::Scalar>> nearest_neighbors(const Eigen::MatrixBase<DerivedX>& train, int k,
                                                                  const Eigen::MatrixBase<DerivedQ>& x) {
    using Scalar = typename DerivedX::Scalar;
    if (train.rows() == 0) throw AnalyticsError(AnalyticsErrc::EmptyTrainingSet, "no training points");
    if (k < 1) throw AnalyticsError(AnalyticsErrc::InvalidArgument, "k must be positive");
    if (k > train.rows()) throw AnalyticsError(AnalyticsErrc::KTooLarge, "k exceeds the training set");
    if (x.size() != train.cols()) throw AnalyticsError(AnalyticsErrc::InvalidArgument, "query dimension");

    std::priority_queue<Neighbor<Scalar>> heap;  // largest (distance, index) on top
    for (Eigen::Index i = 0; i < train.rows(); ++i) {
        const Neighbor<Scalar> candidate{(train.row(i) - x.reshaped().transpose().template cast<Scalar>()).squaredNorm(), i};
        if (static_cast<int>(heap.size()) < k) {
            heap.push(candidate);
        } else if (candidate < heap.top()) {
            heap.pop();
            heap.push(candidate);
        }
    }
    std::vector<Neighbor<Scalar>> out(heap.size());
    for (auto it = out.rbegin(); it != out.rend(); ++it) {
        *it = heap.top();
        heap.pop();
    }
    return out;
}

/// Majority vote among neighbours; ties go to the label with the smaller mean
/// Euclidean distance, then to the lowest label.
template <typename Scalar>
int majority_vote(const std::vector<Neighbor<Scalar>>& neighbors, const std::vector<int>& labels) {
    std::map<int, std::pair<int, Scalar>> tally;  // label → (votes, distance sum)
    for (const auto& nb : neighbors) {
        auto& [votes, dist] = tally[labels[static_cast<std::size_t>(nb.index)]];
        ++votes;
        dist += std::sqrt(nb.distance2);
    }
    int best = 0, best_votes = -1;
    Scalar best_mean = 0;
    for (const auto& [label, entry] : tally) {
        const Scalar mean = entry.second / Scalar(entry.first);
        if (entry.first > best_votes || (entry.first == best_votes && mean < best_mean)) {
            best = label;
            best_votes = entry.first;
            best_mean = mean;
        }
    }
    return best;
}

/// k-NN classification of one query point.
template <typename DerivedX, typename DerivedQ>
int knn_classify(const Eigen::MatrixBase<DerivedX>& train, const std::vector<int>& labels, int k,
                 const Eigen::MatrixBase<DerivedQ>& x) {
    if (static_cast<Eigen::Index>(labels.size()) != train.rows()) {
        throw AnalyticsError(AnalyticsErrc::InvalidArgument, "label count");
    }
    return majority_vote(nearest_neighbors(train, k, x), labels);
}

}  // namespace scholartrace::analytics
