#include "scholartrace/behavior/fields.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

#include "scholartrace/behavior/errors.hpp"
#include "scholartrace/common/csv.hpp"

namespace scholartrace::behavior {

FieldTable FieldTable::from_csv(std::istream& in) {
    const auto rows = read_csv(in);
    if (rows.empty() || rows.front() != std::vector<std::string>{"pmid", "field"}) {
        throw std::runtime_error("field table: expected header pmid,field");
    }
    FieldTable table;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        std::uint32_t pmid = 0;
        if (row.size() != 2 || row[1].empty()) {
            throw std::runtime_error("field table: bad row " + std::to_string(r + 1));
        }
        const auto [ptr, ec] = std::from_chars(row[0].data(), row[0].data() + row[0].size(), pmid);
        if (ec != std::errc{} || ptr != row[0].data() + row[0].size() || pmid == 0) {
            throw std::runtime_error("field table: bad pmid on row " + std::to_string(r + 1));
        }
        if (table.lookup(pmid)) throw std::runtime_error("field table: duplicate pmid " + row[0]);
        table.add(pmid, row[1]);
    }
    return table;
}

FieldTable FieldTable::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return from_csv(in);
}

void FieldTable::add(std::uint32_t pmid, std::string field) { table_[pmid] = std::move(field); }

std::optional<std::string> FieldTable::lookup(std::uint32_t pmid) const {
    const auto it = table_.find(pmid);
    if (it == table_.end()) return std::nullopt;
    return it->second;
}

FieldDistribution categorize_participant(std::span<const std::uint32_t> pmids, const FieldTable& table) {
    if (pmids.empty()) throw BehaviorError(BehaviorErrc::EmptyInput, "no PMIDs");
    FieldDistribution d;
    d.total = pmids.size();
    std::map<std::string, std::size_t> counts;
    for (const auto pmid : pmids) {
        if (auto field = table.lookup(pmid)) {
            ++counts[*field];
            ++d.matched;
        }
    }
    for (const auto& [field, n] : counts) {
        d.shares[field] = static_cast<double>(n) / static_cast<double>(d.matched);
    }
    return d;
}

}  // namespace scholartrace::behavior
