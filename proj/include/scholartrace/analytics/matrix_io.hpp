#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace scholartrace::analytics {

struct CsvMatrix {
    Eigen::MatrixXd values;
    std::vector<std::string> header;  ///< empty unless read with has_header
};

/// Row-major numeric CSV. Throws std::runtime_error on ragged rows or non-numeric cells.
CsvMatrix read_matrix_csv(std::istream& in, bool has_header);
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m, const std::vector<std::string>& header = {});

struct TrainTestSplit {
    std::vector<Eigen::Index> train;
    std::vector<Eigen::Index> test;
};

/// Shuffles 0..n−1 with the seed and puts round(n·test_fraction) indices in `test`.
/// Both halves are returned sorted.
TrainTestSplit train_test_split(Eigen::Index n, double test_fraction, std::uint64_t seed);

/// Rows of `m` selected by `rows`, in order.
Eigen::MatrixXd take_rows(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& rows);

}  // namespace scholartrace::analytics
