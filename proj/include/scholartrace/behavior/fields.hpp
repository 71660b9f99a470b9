#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>

namespace scholartrace::behavior {

/// PMID → research field lookup loaded from CSV with header "pmid,field".
class FieldTable {
public:
    /// Throws std::runtime_error on a wrong header, bad PMID or duplicate row.
    static FieldTable from_csv(std::istream& in);
    static FieldTable from_file(const std::filesystem::path& path);

    void add(std::uint32_t pmid, std::string field);
    std::optional<std::string> lookup(std::uint32_t pmid) const;
    std::size_t size() const { return table_.size(); }

private:
    std::unordered_map<std::uint32_t, std::string> table_;
};

struct FieldDistribution {
    std::map<std::string, double> shares;  ///< over matched PMIDs; sums to 1 when matched > 0
    std::size_t matched = 0;
    std::size_t total = 0;

    double coverage() const { return total == 0 ? 0.0 : static_cast<double>(matched) / static_cast<double>(total); }
};

/// Throws BehaviorError(EmptyInput) for an empty PMID list.
FieldDistribution categorize_participant(std::span<const std::uint32_t> pmids, const FieldTable& table);

}  // namespace scholartrace::behavior
