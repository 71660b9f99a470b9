#pragma once

#include <array>
#include <ostream>
#include <span>
#include <vector>

#include "scholartrace/psychometrics/survey.hpp"

namespace scholartrace::psychometrics {

struct ScoringConfig {
    /// 1-indexed PSS items scored x → 4 − x.
    std::vector<int> pss_reverse{4, 5, 7, 8};
    /// Score role-ambiguity items x → 6 − x.
    bool reverse_role_ambiguity = false;
};

struct RizzoScores {
    int conflict = 0;   ///< 8..40
    int ambiguity = 0;  ///< 6..30
};

struct FamilySupportScore {
    int sum = 0;       ///< 4..28
    double mean = 0;   ///< 1..7
};

struct ScoredWave {
    int pss_total = 0;
    int jss_total = 0;
    int role_conflict_total = 0;
    int role_ambiguity_total = 0;
    int family_support_total = 0;
    double family_support_mean = 0;

    friend bool operator==(const ScoredWave&, const ScoredWave&) = default;
};

/// Throws std::invalid_argument for a reverse index outside 1..10.
int score_pss(std::span<const int, kPssItems> items, std::span<const int> reverse_set = ScoringConfig{}.pss_reverse);
int score_jss(std::span<const int, kJssItems> items);
RizzoScores score_rizzo(std::span<const int, kRoleConflictItems> conflict,
                        std::span<const int, kRoleAmbiguityItems> ambiguity, bool reverse_ambiguity = false);
FamilySupportScore score_family_support(std::span<const int, kFamilySupportItems> items);

ScoredWave score_wave(const SurveyWave& wave, const ScoringConfig& config = {});

/// Column order of the scored CSV.
inline constexpr std::array<const char*, 8> kScoredColumns{
    "uid", "wave", "pss_total", "jss_total", "role_conflict_total", "role_ambiguity_total",
    "family_support_total", "family_support_mean"};

void write_scored_header(std::ostream& out);
void write_scored_row(std::ostream& out, const SurveyWave& wave, const ScoredWave& scored);

}  // namespace scholartrace::psychometrics
