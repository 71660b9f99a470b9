#include "scholartrace/behavior/timeseries.hpp"

#include <algorithm>
#include <optional>

#include "scholartrace/behavior/errors.hpp"

namespace scholartrace::behavior {

namespace {

void check_width(Seconds width) {
    if (width.count() <= 0 || kWeek % width != Seconds{0}) {
        throw BehaviorError(BehaviorErrc::MisalignedBucket, "bucket width must divide one week");
    }
}

bool aligned(Timestamp t, Seconds width) { return t.time_since_epoch() % width == Seconds{0}; }

Timestamp floor_to(Timestamp t, Seconds width) { return t - (t.time_since_epoch() % width + width) % width; }

}  // namespace

TimeSeries aggregate(std::span<const Timestamp> times, Seconds width, std::span<const TimeWindow> downtime,
                     TimeWindow range) {
    check_width(width);
    if (!aligned(range.start, width) || !aligned(range.end, width) || range.end < range.start) {
        throw BehaviorError(BehaviorErrc::MisalignedBucket, "range must lie on bucket boundaries");
    }
    TimeSeries s;
    s.bucket_width = width;
    s.origin = range.start;
    const auto n = static_cast<std::size_t>((range.end - range.start) / width);
    s.values.assign(n, 0.0);
    s.state.assign(n, BucketState::Observed);

    for (const Timestamp t : times) {
        if (!range.contains(t)) continue;
        s.values[static_cast<std::size_t>((t - range.start) / width)] += 1.0;
    }
    for (const TimeWindow& w : downtime) {
        if (!w.overlaps(range) || w.end <= w.start) continue;
        const auto first = static_cast<std::size_t>((std::max(w.start, range.start) - range.start) / width);
        const auto last_excl = static_cast<std::size_t>(
            (std::min(w.end, range.end) - range.start + width - Seconds{1}) / width);
        for (std::size_t i = first; i < last_excl && i < n; ++i) {
            s.values[i] = 0.0;
            s.state[i] = BucketState::Missing;
        }
    }
    return s;
}

TimeSeries aggregate(std::span<const Timestamp> times, Seconds width, std::span<const TimeWindow> downtime) {
    check_width(width);
    std::optional<Timestamp> lo, hi;  // hi is exclusive
    const auto widen = [&](Timestamp a, Timestamp b) {
        lo = lo ? std::min(*lo, a) : a;
        hi = hi ? std::max(*hi, b) : b;
    };
    for (const Timestamp t : times) widen(t, t + Seconds{1});
    for (const TimeWindow& w : downtime) {
        if (w.start < w.end) widen(w.start, w.end);
    }
    if (!lo) return TimeSeries{width, {}, {}, {}};
    const Timestamp start = floor_to(*lo, width);
    Timestamp end = floor_to(*hi, width);
    if (end < *hi) end += width;
    return aggregate(times, width, downtime, TimeWindow{start, end});
}

ImputationResult impute_gaps(const TimeSeries& series) {
    ImputationResult out{series, {}};
    const std::size_t stride = series.week_stride();
    const auto observed = [&](std::size_t i) { return series.state[i] == BucketState::Observed; };
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series.state[i] != BucketState::Missing) continue;
        const bool has_prev = i >= stride && observed(i - stride);
        const bool has_next = i + stride < series.size() && observed(i + stride);
        if (has_prev && has_next) {
            out.series.values[i] = (series.values[i - stride] + series.values[i + stride]) / 2.0;
        } else if (has_prev) {
            out.series.values[i] = series.values[i - stride];
        } else if (has_next) {
            out.series.values[i] = series.values[i + stride];
        } else {
            out.unresolved.push_back(i);
            continue;
        }
        out.series.state[i] = BucketState::Imputed;
    }
    return out;
}

}  // namespace scholartrace::behavior
