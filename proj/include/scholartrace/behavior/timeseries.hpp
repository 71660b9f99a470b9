#pragma once

#include <span>
#include <vector>

#include "scholartrace/common/time.hpp"

namespace scholartrace::behavior {

inline constexpr Seconds kWeek{7 * 24 * 3600};

enum class BucketState : unsigned char { Observed, Imputed, Missing };

/// Event counts on a regular grid starting at `origin`.
struct TimeSeries {
    Seconds bucket_width{3600};
    Timestamp origin{};
    std::vector<double> values;
    std::vector<BucketState> state;

    std::size_t size() const { return values.size(); }
    Timestamp bucket_start(std::size_t i) const { return origin + bucket_width * static_cast<long>(i); }
    /// Buckets per week; valid because bucket_width divides a week.
    std::size_t week_stride() const { return static_cast<std::size_t>(kWeek / bucket_width); }

    friend bool operator==(const TimeSeries&, const TimeSeries&) = default;
};

/// Counts events into buckets covering `range`; events outside it are ignored.
/// Buckets that overlap any downtime window are Missing with value 0.
/// Throws BehaviorError(MisalignedBucket) unless bucket_width > 0 divides one
/// week and `range` starts and ends on bucket boundaries relative to the epoch.
TimeSeries aggregate(std::span<const Timestamp> times, Seconds bucket_width,
                     std::span<const TimeWindow> downtime, TimeWindow range);

/// Same, with the range spanning every event and downtime window, widened to
/// bucket boundaries. No events and no downtime give an empty series.
TimeSeries aggregate(std::span<const Timestamp> times, Seconds bucket_width,
                     std::span<const TimeWindow> downtime);

struct ImputationResult {
    TimeSeries series;
    std::vector<std::size_t> unresolved;  ///< buckets that stay Missing
};

/// Fills each Missing bucket with the mean of the Observed buckets exactly one
/// week before and after, or the single Observed one when only one exists.
/// Imputed values never feed other imputations, which makes the operation idempotent.
ImputationResult impute_gaps(const TimeSeries& series);

}  // namespace scholartrace::behavior
