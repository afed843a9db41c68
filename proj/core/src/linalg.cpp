#include "bgc/linalg.hpp"

#include <algorithm>
#include <functional>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <queue>

#include <boost/multiprecision/cpp_int.hpp>

namespace bgc {

SparseIntMatrix::SparseIntMatrix(int rows, int cols, std::vector<Triplet> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    finalize();
}

void SparseIntMatrix::add(int row, int col, std::int64_t value) {
    if (row < 0 || row >= rows_ || col < 0 || col >= cols_) {
        throw LinalgError("matrix coordinate out of range");
    }
    if (value != 0) entries_.push_back({row, col, value});
}

void SparseIntMatrix::finalize() {
    for (const Triplet& t : entries_) {
        if (t.row < 0 || t.row >= rows_ || t.col < 0 || t.col >= cols_) {
            throw LinalgError("matrix coordinate out of range");
        }
    }
    std::sort(entries_.begin(), entries_.end(), [](const Triplet& x, const Triplet& y) {
        return x.row != y.row ? x.row < y.row : x.col < y.col;
    });
    std::size_t out = 0;
    for (std::size_t i = 0; i < entries_.size();) {
        Triplet merged = entries_[i];
        std::size_t j = i + 1;
        while (j < entries_.size() && entries_[j].row == merged.row && entries_[j].col == merged.col) {
            merged.value += entries_[j].value;
            ++j;
        }
        if (merged.value != 0) entries_[out++] = merged;
        i = j;
    }
    entries_.resize(out);
}

std::int64_t SparseIntMatrix::at(int row, int col) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), Triplet{row, col, 0},
                               [](const Triplet& x, const Triplet& y) {
                                   return x.row != y.row ? x.row < y.row : x.col < y.col;
                               });
    if (it != entries_.end() && it->row == row && it->col == col) return it->value;
    return 0;
}

SparseIntMatrix SparseIntMatrix::transposed() const {
    std::vector<Triplet> t;
    t.reserve(entries_.size());
    for (const Triplet& e : entries_) t.push_back({e.col, e.row, e.value});
    return SparseIntMatrix(cols_, rows_, std::move(t));
}

SparseIntMatrix SparseIntMatrix::select_rows(const std::vector<int>& keep) const {
    std::vector<int> where(rows_, -1);
    for (std::size_t i = 0; i < keep.size(); ++i) where[keep[i]] = static_cast<int>(i);
    std::vector<Triplet> t;
    for (const Triplet& e : entries_) {
        if (where[e.row] >= 0) t.push_back({where[e.row], e.col, e.value});
    }
    return SparseIntMatrix(static_cast<int>(keep.size()), cols_, std::move(t));
}

SparseIntMatrix SparseIntMatrix::select_cols(const std::vector<int>& keep) const {
    std::vector<int> where(cols_, -1);
    for (std::size_t i = 0; i < keep.size(); ++i) where[keep[i]] = static_cast<int>(i);
    std::vector<Triplet> t;
    for (const Triplet& e : entries_) {
        if (where[e.col] >= 0) t.push_back({e.row, where[e.col], e.value});
    }
    return SparseIntMatrix(rows_, static_cast<int>(keep.size()), std::move(t));
}

SparseIntMatrix multiply(const SparseIntMatrix& a, const SparseIntMatrix& b) {
    if (a.cols() != b.rows()) throw LinalgError("multiply: dimension mismatch");
    // Row index into b.
    std::vector<std::size_t> start(b.rows() + 1, 0);
    for (const Triplet& t : b.entries()) ++start[t.row + 1];
    std::partial_sum(start.begin(), start.end(), start.begin());
    std::vector<Triplet> out;
    std::vector<std::int64_t> acc(b.cols(), 0);
    std::vector<int> touched;
    std::size_t i = 0;
    while (i < a.entries().size()) {
        const int row = a.entries()[i].row;
        for (; i < a.entries().size() && a.entries()[i].row == row; ++i) {
            const Triplet& x = a.entries()[i];
            for (std::size_t k = start[x.col]; k < start[x.col + 1]; ++k) {
                const Triplet& y = b.entries()[k];
                if (acc[y.col] == 0) touched.push_back(y.col);
                acc[y.col] += x.value * y.value;
            }
        }
        for (int c : touched) {
            if (acc[c] != 0) out.push_back({row, c, acc[c]});
            acc[c] = 0;
        }
        touched.clear();
    }
    return SparseIntMatrix(a.rows(), b.cols(), std::move(out));
}

SparseIntMatrix add(const SparseIntMatrix& a, const SparseIntMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw LinalgError("add: dimension mismatch");
    std::vector<Triplet> t = a.entries();
    t.insert(t.end(), b.entries().begin(), b.entries().end());
    return SparseIntMatrix(a.rows(), a.cols(), std::move(t));
}

SparseIntMatrix identity_matrix(int n) {
    std::vector<Triplet> t;
    t.reserve(n);
    for (int i = 0; i < n; ++i) t.push_back({i, i, 1});
    return SparseIntMatrix(n, n, std::move(t));
}

namespace {

std::uint32_t reduce(std::int64_t value, std::uint32_t p) {
    std::int64_t r = value % static_cast<std::int64_t>(p);
    if (r < 0) r += p;
    return static_cast<std::uint32_t>(r);
}

std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t p) {
    std::uint64_t result = 1;
    std::uint64_t base = a;
    std::uint32_t e = p - 2;
    while (e) {
        if (e & 1u) result = result * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return static_cast<std::uint32_t>(result);
}

int dense_rank_mod_p(const std::vector<std::vector<std::pair<int, std::uint32_t>>>& rows, int cols,
                     std::uint32_t p) {
    const int n = static_cast<int>(rows.size());
    std::vector<std::uint32_t> a(static_cast<std::size_t>(n) * cols, 0);
    for (int i = 0; i < n; ++i) {
        for (auto [c, v] : rows[i]) a[static_cast<std::size_t>(i) * cols + c] = v;
    }
    int rank = 0;
    for (int c = 0; c < cols && rank < n; ++c) {
        int pivot = -1;
        for (int i = rank; i < n; ++i) {
            if (a[static_cast<std::size_t>(i) * cols + c] != 0) {
                pivot = i;
                break;
            }
        }
        if (pivot < 0) continue;
        std::uint32_t* prow = &a[static_cast<std::size_t>(pivot) * cols];
        if (pivot != rank) {
            std::swap_ranges(prow, prow + cols, &a[static_cast<std::size_t>(rank) * cols]);
            prow = &a[static_cast<std::size_t>(rank) * cols];
        }
        const std::uint64_t inv = inverse_mod(prow[c], p);
        for (int k = c; k < cols; ++k) prow[k] = static_cast<std::uint32_t>(prow[k] * inv % p);
        for (int i = rank + 1; i < n; ++i) {
            std::uint32_t* row = &a[static_cast<std::size_t>(i) * cols];
            const std::uint64_t f = row[c];
            if (f == 0) continue;
            for (int k = c; k < cols; ++k) {
                if (prow[k]) row[k] = static_cast<std::uint32_t>((row[k] + (p - f) * prow[k]) % p);
            }
        }
        ++rank;
    }
    return rank;
}

}  // namespace

int rank_mod_p(const SparseIntMatrix& m, std::uint32_t p) {
    if (p < 3) throw LinalgError("rank_mod_p: modulus must be an odd prime");
    if (m.is_zero()) return 0;
    const int cols = m.cols();

    // Sparse columns first to keep fill low.
    std::vector<int> col_count(cols, 0);
    for (const Triplet& t : m.entries()) ++col_count[t.col];
    std::vector<int> order(cols);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return col_count[x] < col_count[y]; });
    std::vector<int> new_col(cols);
    for (int i = 0; i < cols; ++i) new_col[order[i]] = i;

    std::vector<std::vector<std::pair<int, std::uint32_t>>> rows(m.rows());
    for (const Triplet& t : m.entries()) {
        const std::uint32_t v = reduce(t.value, p);
        if (v) rows[t.row].emplace_back(new_col[t.col], v);
    }
    rows.erase(std::remove_if(rows.begin(), rows.end(), [](const auto& r) { return r.empty(); }),
               rows.end());
    for (auto& r : rows) std::sort(r.begin(), r.end());
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& x, const auto& y) { return x.size() < y.size(); });

    const double dense_cells = static_cast<double>(rows.size()) * cols;
    const bool dense_ok = dense_cells <= 2.5e7;
    std::vector<std::vector<std::pair<int, std::uint32_t>>> pivots(cols);
    std::vector<std::uint64_t> acc(cols, 0);
    std::vector<char> queued(cols, 0);
    std::priority_queue<int, std::vector<int>, std::greater<>> heap;
    std::size_t stored = 0;
    int rank = 0;
    for (const auto& row : rows) {
        for (auto [c, v] : row) {
            acc[c] = v;
            queued[c] = 1;
            heap.push(c);
        }
        while (!heap.empty()) {
            const int c = heap.top();
            heap.pop();
            queued[c] = 0;
            if (acc[c] == 0) continue;
            if (!pivots[c].empty()) {
                const std::uint64_t f = p - acc[c];
                acc[c] = 0;
                const auto& prow = pivots[c];
                for (std::size_t k = 1; k < prow.size(); ++k) {
                    const int col = prow[k].first;
                    acc[col] = (acc[col] + f * prow[k].second) % p;
                    if (!queued[col]) {
                        queued[col] = 1;
                        heap.push(col);
                    }
                }
                continue;
            }
            // New pivot: the remaining queue holds the rest of the row.
            const std::uint64_t inv = inverse_mod(static_cast<std::uint32_t>(acc[c]), p);
            auto& prow = pivots[c];
            prow.emplace_back(c, 1u);
            acc[c] = 0;
            while (!heap.empty()) {
                const int col = heap.top();
                heap.pop();
                queued[col] = 0;
                if (acc[col]) prow.emplace_back(col, static_cast<std::uint32_t>(acc[col] * inv % p));
                acc[col] = 0;
            }
            stored += prow.size();
            ++rank;
        }
        if (dense_ok && static_cast<double>(stored) > 0.3 * dense_cells) {
            return dense_rank_mod_p(rows, cols, p);
        }
    }
    return rank;
}

int rank_exact(const SparseIntMatrix& m, std::size_t max_nnz) {
    using boost::multiprecision::cpp_rational;
    if (m.nnz() > max_nnz) {
        throw LinalgError("rank_exact: " + std::to_string(m.nnz()) + " nonzeros exceed the guard of " +
                          std::to_string(max_nnz));
    }
    std::vector<std::map<int, cpp_rational>> rows(m.rows());
    for (const Triplet& t : m.entries()) rows[t.row][t.col] = cpp_rational(t.value);
    std::map<int, std::map<int, cpp_rational>> pivots;
    int rank = 0;
    for (auto& row : rows) {
        while (!row.empty()) {
            const int c = row.begin()->first;
            auto it = pivots.find(c);
            if (it == pivots.end()) {
                const cpp_rational lead = row.begin()->second;
                for (auto& [col, value] : row) value /= lead;
                pivots.emplace(c, std::move(row));
                ++rank;
                break;
            }
            const cpp_rational f = row.begin()->second;
            for (const auto& [col, value] : it->second) {
                cpp_rational& target = row[col];
                target -= f * value;
                if (target == 0) row.erase(col);
            }
        }
    }
    return rank;
}

const std::vector<std::uint32_t>& default_primes() {
    static const std::vector<std::uint32_t> primes{2147483647u, 2147483629u, 2147483587u};
    return primes;
}

RankResult rank_consensus(const SparseIntMatrix& m, const std::vector<std::uint32_t>& primes,
                          std::size_t exact_guard) {
    RankResult result;
    result.primes_used = primes;
    for (std::uint32_t p : primes) result.per_prime.push_back(rank_mod_p(m, p));
    if (!result.per_prime.empty()) {
        result.rank = *std::max_element(result.per_prime.begin(), result.per_prime.end());
        result.disagreement =
            std::any_of(result.per_prime.begin(), result.per_prime.end(),
                        [&](int r) { return r != result.rank; });
    }
    if (m.nnz() <= exact_guard) {
        const int exact = rank_exact(m, exact_guard);
        if (exact != result.rank || primes.empty()) {
            result.disagreement = result.disagreement || !primes.empty();
            result.rank = exact;
            result.method = RankMethod::Rational;
        }
    }
    return result;
}

void write_dmat(std::ostream& out, const SparseIntMatrix& m) {
    out << m.rows() << ' ' << m.cols() << ' ' << m.nnz() << '\n';
    for (const Triplet& t : m.entries()) out << t.row << ' ' << t.col << ' ' << t.value << '\n';
}

SparseIntMatrix read_dmat(std::istream& in) {
    long long rows = 0, cols = 0, nnz = 0;
    if (!(in >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0) {
        throw LinalgError("dmat: malformed header");
    }
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(nnz));
    for (long long i = 0; i < nnz; ++i) {
        Triplet x;
        if (!(in >> x.row >> x.col >> x.value)) throw LinalgError("dmat: truncated entries");
        t.push_back(x);
    }
    SparseIntMatrix m(static_cast<int>(rows), static_cast<int>(cols), std::move(t));
    if (m.nnz() != static_cast<std::size_t>(nnz)) throw LinalgError("dmat: duplicate or zero entries");
    return m;
}

}  // namespace bgc
