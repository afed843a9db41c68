#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace bgc {

struct Triplet {
    int row = 0;
    int col = 0;
    std::int64_t value = 0;

    friend bool operator==(const Triplet&, const Triplet&) = default;
};

/// Coordinate-form integer matrix. After finalize() entries are row-major,
/// coordinates are unique and no value is zero.
class SparseIntMatrix {
public:
    SparseIntMatrix() = default;
    SparseIntMatrix(int rows, int cols) : rows_(rows), cols_(cols) {}
    SparseIntMatrix(int rows, int cols, std::vector<Triplet> entries);

    [[nodiscard]] int rows() const { return rows_; }
    [[nodiscard]] int cols() const { return cols_; }
    [[nodiscard]] const std::vector<Triplet>& entries() const { return entries_; }
    [[nodiscard]] std::size_t nnz() const { return entries_.size(); }
    [[nodiscard]] bool is_zero() const { return entries_.empty(); }

    /// Accumulates; call finalize() before reading entries.
    void add(int row, int col, std::int64_t value);
    void finalize();

    [[nodiscard]] std::int64_t at(int row, int col) const;
    [[nodiscard]] SparseIntMatrix transposed() const;
    [[nodiscard]] SparseIntMatrix select_rows(const std::vector<int>& keep) const;
    [[nodiscard]] SparseIntMatrix select_cols(const std::vector<int>& keep) const;

    friend bool operator==(const SparseIntMatrix&, const SparseIntMatrix&) = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Triplet> entries_;
};

[[nodiscard]] SparseIntMatrix multiply(const SparseIntMatrix& a, const SparseIntMatrix& b);
[[nodiscard]] SparseIntMatrix add(const SparseIntMatrix& a, const SparseIntMatrix& b);
[[nodiscard]] SparseIntMatrix identity_matrix(int n);

class LinalgError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

[[nodiscard]] int rank_mod_p(const SparseIntMatrix& m, std::uint32_t p);

inline constexpr std::size_t kDefaultExactGuard = 2000;

/// Rank over Q by fraction arithmetic. Throws LinalgError above `max_nnz`.
[[nodiscard]] int rank_exact(const SparseIntMatrix& m, std::size_t max_nnz = kDefaultExactGuard);

enum class RankMethod { ModularConsensus, Rational };

struct RankResult {
    int rank = 0;
    RankMethod method = RankMethod::ModularConsensus;
    std::vector<std::uint32_t> primes_used;
    std::vector<int> per_prime;
    bool disagreement = false;
};

/// The three largest primes below 2^31.
[[nodiscard]] const std::vector<std::uint32_t>& default_primes();

[[nodiscard]] RankResult rank_consensus(const SparseIntMatrix& m,
                                        const std::vector<std::uint32_t>& primes = default_primes(),
                                        std::size_t exact_guard = kDefaultExactGuard);

// .dmat text format: "rows cols nnz" then one "row col value" per line.
void write_dmat(std::ostream& out, const SparseIntMatrix& m);
[[nodiscard]] SparseIntMatrix read_dmat(std::istream& in);

}  // namespace bgc
