#include <gtest/gtest.h>

#include <random>

#include "lieobs/euclidean.hpp"
#include "support/oracles.hpp"

using namespace lieobs;

TEST(Euclidean, KnownPairs) {
    // Double integrator with position output: observable.
    EuclideanSystem sys;
    sys.a = Eigen::MatrixXd{{0.0, 1.0}, {0.0, 0.0}};
    sys.c = Eigen::MatrixXd{{1.0, 0.0}};
    EuclideanReport rep = euclidean_observability(sys);
    EXPECT_TRUE(rep.observable);
    EXPECT_EQ(rep.rank, 2);

    // Velocity output loses the absolute position.
    sys.c = Eigen::MatrixXd{{0.0, 1.0}};
    rep = euclidean_observability(sys);
    EXPECT_FALSE(rep.observable);
    EXPECT_EQ(rep.rank, 1);

    // Diagonal A with a repeated eigenvalue and a single output cannot
    // separate the repeated modes.
    sys.a = Eigen::MatrixXd{{2.0, 0.0, 0.0}, {0.0, 2.0, 0.0}, {0.0, 0.0, 3.0}};
    sys.c = Eigen::MatrixXd{{1.0, 1.0, 1.0}};
    rep = euclidean_observability(sys);
    EXPECT_FALSE(rep.observable);
    EXPECT_EQ(rep.rank, 2);

    // A second independent output row restores observability.
    sys.c = Eigen::MatrixXd{{1.0, 1.0, 1.0}, {1.0, -1.0, 0.0}};
    EXPECT_TRUE(euclidean_observability(sys).observable);

    // Zero output sees nothing.
    sys.c = Eigen::MatrixXd::Zero(1, 3);
    EXPECT_EQ(euclidean_observability(sys).rank, 0);
}

TEST(Euclidean, RankMatchesEliminationOracle) {
    std::mt19937_64 gen(515);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::uniform_int_distribution<int> nd(1, 5), md(1, 3), coin(0, 3);
    for (int rep = 0; rep < 100; ++rep) {
        int n = nd(gen), m = md(gen);
        EuclideanSystem sys;
        sys.a = Eigen::MatrixXd::Zero(n, n);
        sys.c = Eigen::MatrixXd::Zero(m, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) sys.a(i, j) = coin(gen) == 0 ? 0.0 : u(gen);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) sys.c(i, j) = coin(gen) == 0 ? 0.0 : u(gen);

        std::vector<std::vector<double>> stacked;
        std::vector<std::vector<double>> block(m, std::vector<double>(n));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) block[i][j] = sys.c(i, j);
        for (int k = 0; k < n; ++k) {
            for (const auto& row : block) stacked.push_back(row);
            std::vector<std::vector<double>> next(m, std::vector<double>(n, 0.0));
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < n; ++j)
                    for (int l = 0; l < n; ++l) next[i][j] += block[i][l] * sys.a(l, j);
            block = std::move(next);
        }
        int want = oracles::elimination_rank(stacked);
        EuclideanReport got = euclidean_observability(sys);
        EXPECT_EQ(got.rank, want) << "n=" << n << " m=" << m << " rep=" << rep;
        EXPECT_EQ(got.observable, want == n);
    }
}

TEST(Euclidean, ShapeErrors) {
    EuclideanSystem sys;
    sys.a = Eigen::MatrixXd::Zero(2, 3);
    sys.c = Eigen::MatrixXd::Zero(1, 3);
    EXPECT_THROW(euclidean_observability(sys), std::invalid_argument);
    sys.a = Eigen::MatrixXd::Zero(3, 3);
    sys.c = Eigen::MatrixXd::Zero(1, 2);
    EXPECT_THROW(euclidean_observability(sys), std::invalid_argument);
}
