#include "scholartrace/psychometrics/scoring.hpp"

#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "scholartrace/common/csv.hpp"

namespace scholartrace::psychometrics {

int score_pss(std::span<const int, kPssItems> items, std::span<const int> reverse_set) {
    std::array<bool, kPssItems> reversed{};
    for (const int idx : reverse_set) {
        if (idx < 1 || idx > static_cast<int>(kPssItems)) throw std::invalid_argument("PSS reverse index out of 1..10");
        reversed[static_cast<std::size_t>(idx - 1)] = true;
    }
    int total = 0;
    for (std::size_t i = 0; i < kPssItems; ++i) total += reversed[i] ? 4 - items[i] : items[i];
    return total;
}

int score_jss(std::span<const int, kJssItems> items) { return std::accumulate(items.begin(), items.end(), 0); }

RizzoScores score_rizzo(std::span<const int, kRoleConflictItems> conflict,
                        std::span<const int, kRoleAmbiguityItems> ambiguity, bool reverse_ambiguity) {
    RizzoScores s;
    s.conflict = std::accumulate(conflict.begin(), conflict.end(), 0);
    for (const int x : ambiguity) s.ambiguity += reverse_ambiguity ? 6 - x : x;
    return s;
}

FamilySupportScore score_family_support(std::span<const int, kFamilySupportItems> items) {
    const int sum = std::accumulate(items.begin(), items.end(), 0);
    return {sum, static_cast<double>(sum) / static_cast<double>(kFamilySupportItems)};
}

ScoredWave score_wave(const SurveyWave& w, const ScoringConfig& config) {
    ScoredWave s;
    s.pss_total = score_pss(w.pss, config.pss_reverse);
    s.jss_total = score_jss(w.jss);
    const auto rizzo = score_rizzo(w.role_conflict, w.role_ambiguity, config.reverse_role_ambiguity);
    s.role_conflict_total = rizzo.conflict;
    s.role_ambiguity_total = rizzo.ambiguity;
    const auto family = score_family_support(w.family_support);
    s.family_support_total = family.sum;
    s.family_support_mean = family.mean;
    return s;
}

void write_scored_header(std::ostream& out) {
    for (std::size_t i = 0; i < kScoredColumns.size(); ++i) out << (i ? "," : "") << kScoredColumns[i];
    out << '\n';
}

void write_scored_row(std::ostream& out, const SurveyWave& w, const ScoredWave& s) {
    char mean[32];
    std::snprintf(mean, sizeof mean, "%.2f", s.family_support_mean);
    out << csv_escape(w.uid.str()) << ',' << w.wave_index << ',' << s.pss_total << ',' << s.jss_total << ','
        << s.role_conflict_total << ',' << s.role_ambiguity_total << ',' << s.family_support_total << ',' << mean
        << '\n';
}

}  // namespace scholartrace::psychometrics
