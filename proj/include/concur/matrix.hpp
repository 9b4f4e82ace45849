#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "concur/errors.hpp"

namespace concur {

using Rng = std::mt19937_64;

// Raw N x d score matrix, entries in [0, 4], stored row-major.
class ScoredMatrix {
public:
    static constexpr int kMinScore = 0;
    static constexpr int kMaxScore = 4;

    ScoredMatrix(std::vector<int> values, std::vector<std::string> row_labels,
                 std::vector<std::string> col_labels);

    std::size_t rows() const noexcept { return row_labels_.size(); }
    std::size_t cols() const noexcept { return col_labels_.size(); }
    int operator()(std::size_t i, std::size_t j) const { return values_[i * cols() + j]; }

    const std::vector<std::string>& row_labels() const noexcept { return row_labels_; }
    const std::vector<std::string>& col_labels() const noexcept { return col_labels_; }

private:
    std::vector<int> values_;
    std::vector<std::string> row_labels_;
    std::vector<std::string> col_labels_;
};

// N x d presence/absence matrix. Rows are samples, columns are variables.
class BinaryMatrix {
public:
    BinaryMatrix(std::vector<std::uint8_t> bits, std::vector<std::string> row_labels,
                 std::vector<std::string> col_labels);

    // All-zero matrix with generated labels "r0".. and "c0"..
    BinaryMatrix(std::size_t rows, std::size_t cols);

    // Convenience for tests and small literals: rows of 0/1 values, generated labels.
    static BinaryMatrix from_rows(const std::vector<std::vector<int>>& rows);

    std::size_t rows() const noexcept { return row_labels_.size(); }
    std::size_t cols() const noexcept { return col_labels_.size(); }

    bool operator()(std::size_t i, std::size_t j) const { return bits_[i * cols() + j] != 0; }
    void set(std::size_t i, std::size_t j, bool value) { bits_[i * cols() + j] = value ? 1 : 0; }
    void flip(std::size_t i, std::size_t j) { bits_[i * cols() + j] ^= 1; }

    std::size_t count_ones() const noexcept;
    const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

    const std::vector<std::string>& row_labels() const noexcept { return row_labels_; }
    const std::vector<std::string>& col_labels() const noexcept { return col_labels_; }

    bool operator==(const BinaryMatrix&) const = default;

private:
    std::vector<std::uint8_t> bits_;
    std::vector<std::string> row_labels_;
    std::vector<std::string> col_labels_;
};

// First- and second-order statistics: the Gram matrix C = D^T D and its diagonal s.
struct ConcurrenceCounts {
    std::size_t dim = 0;
    std::vector<std::int64_t> gram;     // dim x dim, row-major, symmetric
    std::vector<std::int64_t> column_sums;

    std::int64_t operator()(std::size_t i, std::size_t j) const { return gram[i * dim + j]; }
    bool all_zero() const noexcept;
};

// Reads CSV or TSV (delimiter inferred from the header line): a header row of column labels
// preceded by a corner cell, then one row per sample with its label and d integer scores.
ScoredMatrix load_scored_matrix(std::istream& in);
ScoredMatrix load_scored_matrix_file(const std::string& path);

// Entry is 1 iff the score is positive.
BinaryMatrix dichotomize(const ScoredMatrix& m);

ConcurrenceCounts concurrence_matrix(const BinaryMatrix& b);

// (label, column sum) pairs, count descending, ties broken by label ascending.
std::vector<std::pair<std::string, std::int64_t>> mutation_counts(const BinaryMatrix& b);

// Nonparametric bootstrap: N rows drawn uniformly with replacement. Row labels record the
// source index as "r<index>".
BinaryMatrix resample_rows(const BinaryMatrix& b, Rng& rng);

// Same tabular layout as the reader, 0/1 cells.
void write_binary_matrix(std::ostream& out, const BinaryMatrix& b, char delimiter = ',');

}  // namespace concur
