#include "scholartrace/analytics/matrix_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "scholartrace/common/csv.hpp"
#include "scholartrace/common/random.hpp"

namespace scholartrace::analytics {

CsvMatrix read_matrix_csv(std::istream& in, bool has_header) {
    auto rows = read_csv(in);
    CsvMatrix out;
    std::size_t first = 0;
    if (has_header) {
        if (rows.empty()) throw std::runtime_error("matrix CSV: missing header");
        out.header = rows.front();
        first = 1;
    }
    const std::size_t n = rows.size() - first;
    const std::size_t d = n > 0 ? rows[first].size() : out.header.size();
    out.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    for (std::size_t r = 0; r < n; ++r) {
        const auto& row = rows[first + r];
        if (row.size() != d) throw std::runtime_error("matrix CSV: ragged row " + std::to_string(first + r + 1));
        for (std::size_t c = 0; c < d; ++c) {
            double v = 0;
            const auto& cell = row[c];
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
                throw std::runtime_error("matrix CSV: non-numeric cell on row " + std::to_string(first + r + 1));
            }
            out.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
        }
    }
    return out;
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m, const std::vector<std::string>& header) {
    for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << csv_escape(header[c]);
    if (!header.empty()) out << '\n';
    char buf[64];
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            // shortest text that reads back to the same double
            const auto res = std::to_chars(buf, buf + sizeof buf, m(r, c));
            out << (c ? "," : "") << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
        }
        out << '\n';
    }
}

TrainTestSplit train_test_split(Eigen::Index n, double test_fraction, std::uint64_t seed) {
    if (n < 0 || !(test_fraction >= 0 && test_fraction <= 1)) throw std::invalid_argument("train_test_split arguments");
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    Rng rng(seed);
    for (std::size_t i = idx.size(); i > 1; --i) {
        std::swap(idx[i - 1], idx[static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(i) - 1))]);
    }
    const auto n_test = static_cast<std::size_t>(std::llround(static_cast<double>(n) * test_fraction));
    TrainTestSplit s;
    s.test.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_test));
    s.train.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_test), idx.end());
    std::sort(s.test.begin(), s.test.end());
    std::sort(s.train.begin(), s.train.end());
    return s;
}

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& rows) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(rows[i]);
    return out;
}

}  // namespace scholartrace::analytics
