#include <doctest.h>

#include <fstream>

#include <json.hpp>

#include "scholartrace/analytics/describe.hpp"
#include "scholartrace/analytics/hypothesis.hpp"
#include "scholartrace/analytics/special.hpp"
#include "scholartrace/common/random.hpp"

using namespace scholartrace;
using namespace scholartrace::analytics;

namespace {

nlohmann::json load_reference() {
    std::ifstream in(std::string(ST_SOURCE_DIR) + "/tests/oracles/stats_reference.json");
    REQUIRE(in);
    return nlohmann::json::parse(in);
}

Eigen::VectorXd vec(const std::vector<double>& v) { return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())); }

Eigen::MatrixXd table_from(const nlohmann::json& rows) {
    Eigen::MatrixXd t(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
    for (Eigen::Index i = 0; i < t.rows(); ++i)
        for (Eigen::Index j = 0; j < t.cols(); ++j) t(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].get<double>();
    return t;
}

}  // namespace

TEST_CASE("describe") {
    const auto d = describe(Eigen::Vector3d(1, 2, 3));
    CHECK(d.mean == 2.0);
    CHECK(d.sd == 1.0);
    CHECK(describe(Eigen::VectorXd::Constant(5, 3.5)).sd == 0.0);
    CHECK_THROWS_AS(describe(Eigen::VectorXd::Ones(1)), AnalyticsError);

    Rng rng(100);
    Eigen::VectorXd z(100000);
    for (auto& x : z) x = rng.normal();
    const auto dz = describe(z);
    CHECK(std::abs(dz.mean) <= 0.02);
    CHECK(std::abs(dz.sd - 1.0) <= 0.02);
    CHECK(describe(Eigen::Vector3f(1, 2, 3)).sd == 1.0f);
}

TEST_CASE("t_test reference cases") {
    const Eigen::VectorXd a = vec({1, 2, 3, 4, 5}), b = vec({2, 3, 4, 5, 6});
    const auto r = t_test(a, b);
    CHECK(r.statistic == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(r.df == 8.0);
    CHECK(std::abs(r.p_value - 0.3466) <= 1e-4);

    const auto same = t_test(a, a);
    CHECK(same.statistic == 0.0);
    CHECK(same.p_value == 1.0);

    const auto swapped = t_test(b, a);
    CHECK(swapped.statistic == -r.statistic);
    CHECK(swapped.p_value == r.p_value);

    const auto welch = t_test(a, b, TTestKind::Welch);
    CHECK(welch.df == doctest::Approx(8.0));

    CHECK_THROWS_AS(t_test(vec({1}), b), AnalyticsError);
    const auto constant = t_test(vec({2, 2, 2}), vec({3, 3}));
    CHECK(constant.p_value == 0.0);
}

TEST_CASE("t_test matches the frozen statistical-package fixtures") {
    const auto ref = load_reference();
    REQUIRE(ref["t_test"].size() >= 50);
    for (const auto& c : ref["t_test"]) {
        const auto r = t_test(vec(c["a"].get<std::vector<double>>()), vec(c["b"].get<std::vector<double>>()),
                              c["pooled"].get<bool>() ? TTestKind::Pooled : TTestKind::Welch);
        CHECK(r.statistic == doctest::Approx(c["statistic"].get<double>()).epsilon(1e-9));
        CHECK(r.df == doctest::Approx(c["df"].get<double>()).epsilon(1e-9));
        CHECK(std::abs(r.p_value - c["p_value"].get<double>()) <= 1e-4);
        CHECK(std::abs(r.p_value - c["p_value"].get<double>()) <= 1e-10);
    }
}

TEST_CASE("chi_square reference cases") {
    Eigen::Matrix2d t;
    t << 10, 20, 20, 10;
    const auto r = chi_square(t);
    CHECK(r.statistic == doctest::Approx(20.0 / 3.0).epsilon(1e-12));
    CHECK(r.df == 1.0);
    CHECK(std::abs(r.p_value - 0.0098) <= 1e-4);
    CHECK(chi_square(Eigen::Matrix2d(t.transpose())).statistic == doctest::Approx(r.statistic).epsilon(1e-15));

    Eigen::Matrix<double, 2, 3> equal;
    equal << 4, 8, 12, 4, 8, 12;
    CHECK(chi_square(equal).statistic == 0.0);
    CHECK(chi_square(equal).p_value == 1.0);

    Eigen::Matrix2d zero_col;
    zero_col << 0, 5, 0, 7;
    CHECK_THROWS_AS(chi_square(zero_col), AnalyticsError);
    CHECK_THROWS_AS(chi_square(equal, true), AnalyticsError);
    // Yates pulls each cell 0.5 toward its expectation
    CHECK(chi_square(t, true).statistic == doctest::Approx(4.5 * 4.5 / 15 * 4).epsilon(1e-12));
}

TEST_CASE("chi_square matches the frozen statistical-package fixtures") {
    const auto ref = load_reference();
    REQUIRE(ref["chi_square"].size() >= 50);
    for (const auto& c : ref["chi_square"]) {
        const Eigen::MatrixXd table = table_from(c["table"]);
        const auto r = chi_square(table, c["yates"].get<bool>());
        CHECK(r.statistic == doctest::Approx(c["statistic"].get<double>()).epsilon(1e-9));
        CHECK(r.df == c["df"].get<double>());
        CHECK(std::abs(r.p_value - c["p_value"].get<double>()) <= 1e-4);
        CHECK(std::abs(r.p_value - c["p_value"].get<double>()) <= 1e-10);
        const Eigen::MatrixXd transposed = table.transpose();
        CHECK(chi_square(transposed, c["yates"].get<bool>()).statistic == doctest::Approx(r.statistic).epsilon(1e-12));
    }
}

TEST_CASE("special functions match reference values") {
    const auto ref = load_reference();
    for (const auto& c : ref["incomplete_beta"]) {
        const double v = regularized_incomplete_beta(c["a"].get<double>(), c["b"].get<double>(), c["x"].get<double>());
        INFO(c.dump());
        CHECK(std::abs(v - c["value"].get<double>()) <= 1e-10);
    }
    for (const auto& c : ref["incomplete_gamma"]) {
        const double a = c["a"].get<double>(), x = c["x"].get<double>();
        INFO(c.dump());
        CHECK(std::abs(gamma_p(a, x) - c["p"].get<double>()) <= 1e-10);
        CHECK(std::abs(gamma_q(a, x) - c["q"].get<double>()) <= 1e-10);
    }
}

TEST_CASE("series and continued-fraction evaluations agree on a grid") {
    double worst_beta = 0, worst_gamma = 0;
    for (const double a : {0.5, 1.0, 1.5, 2.5, 4.0, 7.0, 15.0, 30.0}) {
        for (const double b : {0.5, 1.0, 2.0, 3.0, 6.5, 12.0}) {
            for (const double x : {0.001, 0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5}) {
                const double series = incomplete_beta_series(a, b, x);
                worst_beta = std::max(worst_beta, std::abs(series - regularized_incomplete_beta(a, b, x)));
                if (x < (a + 1) / (a + b + 2)) {
                    worst_beta = std::max(worst_beta, std::abs(series - incomplete_beta_cf(a, b, x)));
                }
            }
        }
    }
    for (const double a : {0.5, 1.0, 2.0, 3.5, 7.5, 15.0, 40.0}) {
        for (const double x : {0.05, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 30.0, 45.0, 60.0, 80.0}) {
            // the continued fraction is only stable from about x = a upward
            if (x < a) continue;
            worst_gamma = std::max(worst_gamma, std::abs(gamma_p_series(a, x) + gamma_q_cf(a, x) - 1.0));
        }
    }
    CHECK(worst_beta <= 1e-10);
    CHECK(worst_gamma <= 1e-10);
}

TEST_CASE("distribution tails") {
    for (const double df : {1.0, 2.0, 5.0, 30.0}) {
        for (const double t : {-8.0, -2.0, -0.3, 0.0, 0.7, 3.0}) {
            CHECK(student_t_cdf(t, df) + student_t_cdf(-t, df) == doctest::Approx(1.0).epsilon(1e-14));
            CHECK(student_t_two_sided_p(t, df) == doctest::Approx(2 * student_t_cdf(-std::abs(t), df)).epsilon(1e-12));
        }
    }
    // closed forms: t with 1 df is Cauchy; χ² with 2 df is exponential
    CHECK(std::abs(student_t_cdf(1.0, 1.0) - 0.75) <= 1e-14);
    CHECK(std::abs(chi_square_sf(3.0, 2.0) - std::exp(-1.5)) <= 1e-14);
    CHECK(chi_square_sf(0.0, 3.0) == 1.0);
    CHECK(student_t_two_sided_p(0.0, 4.0) == 1.0);
}

TEST_CASE("property: p-values stay in [0,1]") {
    Rng rng(9);
    for (int trial = 0; trial < 3000; ++trial) {
        Eigen::VectorXd a(rng.integer(2, 30)), b(rng.integer(2, 30));
        const double scale = std::pow(10.0, rng.uniform(-3, 3));
        for (auto& x : a) x = rng.normal(0, scale);
        for (auto& x : b) x = rng.normal(rng.uniform(-3, 3) * scale, scale);
        const auto r = t_test(a, b, rng.bernoulli(0.5) ? TTestKind::Pooled : TTestKind::Welch);
        REQUIRE((r.p_value >= 0.0 && r.p_value <= 1.0));
        REQUIRE(r.df > 0);

        Eigen::MatrixXd t(rng.integer(2, 5), rng.integer(2, 5));
        for (auto& x : t.reshaped()) x = static_cast<double>(rng.integer(1, 500));
        const auto c = chi_square(t);
        REQUIRE((c.p_value >= 0.0 && c.p_value <= 1.0));
    }
}
