#include <doctest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <numeric>
#include <random>
#include <sstream>

#include "bgc/linalg.hpp"

using namespace bgc;
using Rational = boost::multiprecision::cpp_rational;

namespace {

// Dense Gaussian elimination over Q.
int dense_rank(const SparseIntMatrix& m) {
    std::vector<std::vector<Rational>> a(static_cast<std::size_t>(m.rows()),
                                         std::vector<Rational>(static_cast<std::size_t>(m.cols())));
    for (const Triplet& t : m.entries()) a[t.row][t.col] = t.value;
    int rank = 0;
    for (int c = 0; c < m.cols() && rank < m.rows(); ++c) {
        int pivot = -1;
        for (int r = rank; r < m.rows(); ++r) {
            if (a[r][c] != 0) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) continue;
        std::swap(a[pivot], a[rank]);
        for (int r = rank + 1; r < m.rows(); ++r) {
            if (a[r][c] == 0) continue;
            const Rational f = a[r][c] / a[rank][c];
            for (int k = c; k < m.cols(); ++k) a[r][k] -= f * a[rank][k];
        }
        ++rank;
    }
    return rank;
}

SparseIntMatrix random_matrix(int rows, int cols, double density, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    SparseIntMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            if (u(rng) < density) m.add(r, c, rng() % 2 == 0 ? 1 : -1);
        }
    }
    m.finalize();
    return m;
}

}  // namespace

TEST_SUITE("linalg") {
    TEST_CASE("trivial ranks") {
        CHECK(rank_exact(SparseIntMatrix(0, 0)) == 0);
        CHECK(rank_exact(SparseIntMatrix(5, 3)) == 0);
        CHECK(rank_mod_p(SparseIntMatrix(5, 3), 7) == 0);
        CHECK(rank_exact(identity_matrix(9)) == 9);
        CHECK(rank_consensus(identity_matrix(9)).rank == 9);
    }

    TEST_CASE("sparse matrix bookkeeping") {
        SparseIntMatrix m(2, 3);
        m.add(1, 2, 4);
        m.add(0, 0, 1);
        m.add(1, 2, -4);
        m.add(0, 1, 2);
        m.finalize();
        CHECK(m.nnz() == 2);
        CHECK(m.at(0, 1) == 2);
        CHECK(m.at(1, 2) == 0);
        CHECK(m.transposed().at(1, 0) == 2);
        CHECK(multiply(identity_matrix(2), m) == m);
        CHECK(add(m, m).at(0, 1) == 4);
        CHECK(m.select_cols({1}).at(0, 0) == 2);
        CHECK(m.select_rows({1}).is_zero());
    }

    TEST_CASE("random sign matrices against dense elimination") {
        std::mt19937 rng(2024);
        for (int trial = 0; trial < 40; ++trial) {
            const int rows = 5 + static_cast<int>(rng() % 16);
            const int cols = 5 + static_cast<int>(rng() % 16);
            const SparseIntMatrix m = random_matrix(rows, cols, 0.3, rng);
            const int expected = dense_rank(m);
            CHECK(rank_exact(m) == expected);
            const RankResult r = rank_consensus(m);
            CHECK(r.rank == expected);
            CHECK_FALSE(r.disagreement);
            for (std::uint32_t p : {3u, 5u, 65521u}) CHECK(rank_mod_p(m, p) <= expected);
            CHECK(rank_exact(m.transposed()) == expected);
        }
    }

    TEST_CASE("rank of a product of low-rank factors") {
        std::mt19937 rng(9);
        const SparseIntMatrix a = random_matrix(20, 4, 0.6, rng);
        const SparseIntMatrix b = random_matrix(4, 20, 0.6, rng);
        const SparseIntMatrix ab = multiply(a, b);
        CHECK(rank_consensus(ab).rank == dense_rank(ab));
        CHECK(rank_consensus(ab).rank <= 4);
    }

    TEST_CASE("rank is invariant under row and column permutations") {
        std::mt19937 rng(17);
        const SparseIntMatrix m = random_matrix(20, 20, 0.2, rng);
        std::vector<int> rows(20), cols(20);
        std::iota(rows.begin(), rows.end(), 0);
        std::iota(cols.begin(), cols.end(), 0);
        std::shuffle(rows.begin(), rows.end(), rng);
        std::shuffle(cols.begin(), cols.end(), rng);
        const SparseIntMatrix p = m.select_rows(rows).select_cols(cols);
        CHECK(rank_consensus(p).rank == rank_consensus(m).rank);
    }

    TEST_CASE("a prime dividing an entry is outvoted and flagged") {
        const std::uint32_t p = default_primes().front();
        SparseIntMatrix m(1, 1);
        m.add(0, 0, static_cast<std::int64_t>(p));
        m.finalize();
        CHECK(rank_mod_p(m, p) == 0);
        const RankResult r = rank_consensus(m);
        CHECK(r.disagreement);
        CHECK(r.rank == 1);
    }

    TEST_CASE("dmat round trip") {
        std::mt19937 rng(1);
        const SparseIntMatrix m = random_matrix(7, 11, 0.3, rng);
        std::stringstream buf;
        write_dmat(buf, m);
        CHECK(read_dmat(buf) == m);
        std::istringstream bad("2 2 1\n5 0 1\n");
        CHECK_THROWS_AS((void)read_dmat(bad), LinalgError);
    }

    TEST_CASE("exact rank guard") {
        std::mt19937 rng(4);
        const SparseIntMatrix m = random_matrix(30, 30, 0.5, rng);
        CHECK_THROWS_AS((void)rank_exact(m, 10), LinalgError);
    }
}
