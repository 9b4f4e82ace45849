#include "concur/matrix.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <string_view>

namespace concur {

namespace {

std::vector<std::string> generated_labels(char prefix, std::size_t n) {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.push_back(prefix + std::to_string(i));
    return labels;
}

void check_unique(const std::vector<std::string>& labels) {
    std::set<std::string_view> seen;
    for (const auto& label : labels) {
        if (!seen.insert(label).second) throw ValueError("duplicate column label '" + label + "'");
    }
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char delimiter) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(delimiter, start);
        if (pos == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return fields;
}

}  // namespace

ScoredMatrix::ScoredMatrix(std::vector<int> values, std::vector<std::string> row_labels,
                           std::vector<std::string> col_labels)
    : values_(std::move(values)),
      row_labels_(std::move(row_labels)),
      col_labels_(std::move(col_labels)) {
    if (row_labels_.empty() || col_labels_.empty())
        throw ValueError("score matrix needs at least one row and one column");
    if (values_.size() != rows() * cols())
        throw ContractError("score matrix size does not match its labels");
    check_unique(col_labels_);
    for (int v : values_) {
        if (v < kMinScore || v > kMaxScore)
            throw ValueError("score " + std::to_string(v) + " outside [0, 4]");
    }
}

BinaryMatrix::BinaryMatrix(std::vector<std::uint8_t> bits, std::vector<std::string> row_labels,
                           std::vector<std::string> col_labels)
    : bits_(std::move(bits)), row_labels_(std::move(row_labels)), col_labels_(std::move(col_labels)) {
    if (bits_.size() != rows() * cols())
        throw ContractError("binary matrix size does not match its labels");
    check_unique(col_labels_);
    for (auto b : bits_) {
        if (b > 1) throw ValueError("binary matrix entries must be 0 or 1");
    }
}

BinaryMatrix::BinaryMatrix(std::size_t rows, std::size_t cols)
    : bits_(rows * cols, 0),
      row_labels_(generated_labels('r', rows)),
      col_labels_(generated_labels('c', cols)) {}

BinaryMatrix BinaryMatrix::from_rows(const std::vector<std::vector<int>>& rows) {
    const std::size_t n = rows.size();
    const std::size_t d = n ? rows.front().size() : 0;
    BinaryMatrix b(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != d) throw ContractError("ragged row literal");
        for (std::size_t j = 0; j < d; ++j) {
            if (rows[i][j] != 0 && rows[i][j] != 1) throw ValueError("binary literal must be 0/1");
            b.set(i, j, rows[i][j] == 1);
        }
    }
    return b;
}

std::size_t BinaryMatrix::count_ones() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

bool ConcurrenceCounts::all_zero() const noexcept {
    return std::all_of(gram.begin(), gram.end(), [](std::int64_t v) { return v == 0; });
}

ScoredMatrix load_scored_matrix(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;

    // Header: skip leading blank lines.
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) {
            have_header = true;
            break;
        }
    }
    if (!have_header) throw ParseError("empty input: missing header row");

    // Strip a UTF-8 byte-order mark.
    if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);

    const char delimiter = line.find('\t') != std::string::npos ? '\t' : ',';
    auto header = split(line, delimiter);
    if (header.size() < 2) throw ParseError("header needs a corner cell and at least one column", line_no);
    std::vector<std::string> col_labels(header.begin() + 1, header.end());
    for (const auto& label : col_labels) {
        if (label.empty()) throw ParseError("empty column label", line_no);
    }
    const std::size_t d = col_labels.size();

    std::vector<int> values;
    std::vector<std::string> row_labels;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split(line, delimiter);
        if (fields.size() != d + 1) {
            throw ParseError("expected " + std::to_string(d + 1) + " fields, found " +
                                 std::to_string(fields.size()),
                             line_no);
        }
        row_labels.emplace_back(fields[0]);
        for (std::size_t j = 1; j <= d; ++j) {
            const auto field = fields[j];
            int value = 0;
            const auto* end = field.data() + field.size();
            const auto [ptr, ec] = std::from_chars(field.data(), end, value);
            if (field.empty() || ec != std::errc{} || ptr != end) {
                throw ValueError("line " + std::to_string(line_no) + ": '" + std::string(field) +
                                 "' is not an integer score");
            }
            if (value < ScoredMatrix::kMinScore || value > ScoredMatrix::kMaxScore) {
                throw ValueError("line " + std::to_string(line_no) + ": score " +
                                 std::to_string(value) + " outside [0, 4]");
            }
            values.push_back(value);
        }
    }
    if (row_labels.empty()) throw ParseError("no data rows");
    return ScoredMatrix(std::move(values), std::move(row_labels), std::move(col_labels));
}

ScoredMatrix load_scored_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open '" + path + "'");
    return load_scored_matrix(in);
}

BinaryMatrix dichotomize(const ScoredMatrix& m) {
    std::vector<std::uint8_t> bits(m.rows() * m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) bits[i * m.cols() + j] = m(i, j) > 0 ? 1 : 0;
    return BinaryMatrix(std::move(bits), m.row_labels(), m.col_labels());
}

ConcurrenceCounts concurrence_matrix(const BinaryMatrix& b) {
    const std::size_t d = b.cols();
    ConcurrenceCounts counts;
    counts.dim = d;
    counts.gram.assign(d * d, 0);
    std::vector<std::size_t> ones;
    for (std::size_t i = 0; i < b.rows(); ++i) {
        ones.clear();
        for (std::size_t j = 0; j < d; ++j)
            if (b(i, j)) ones.push_back(j);
        for (auto p : ones)
            for (auto q : ones) ++counts.gram[p * d + q];
    }
    counts.column_sums.resize(d);
    for (std::size_t j = 0; j < d; ++j) counts.column_sums[j] = counts.gram[j * d + j];
    return counts;
}

std::vector<std::pair<std::string, std::int64_t>> mutation_counts(const BinaryMatrix& b) {
    std::vector<std::pair<std::string, std::int64_t>> out;
    out.reserve(b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        std::int64_t sum = 0;
        for (std::size_t i = 0; i < b.rows(); ++i) sum += b(i, j) ? 1 : 0;
        out.emplace_back(b.col_labels()[j], sum);
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        if (x.second != y.second) return x.second > y.second;
        return x.first < y.first;
    });
    return out;
}

BinaryMatrix resample_rows(const BinaryMatrix& b, Rng& rng) {
    const std::size_t n = b.rows();
    const std::size_t d = b.cols();
    if (n == 0) throw ContractError("cannot resample a matrix with no rows");
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<std::uint8_t> bits(n * d);
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t src = pick(rng);
        std::copy_n(b.bits().begin() + static_cast<std::ptrdiff_t>(src * d), d,
                    bits.begin() + static_cast<std::ptrdiff_t>(i * d));
        labels.push_back("r" + std::to_string(src));
    }
    return BinaryMatrix(std::move(bits), std::move(labels), b.col_labels());
}

void write_binary_matrix(std::ostream& out, const BinaryMatrix& b, char delimiter) {
    out << "sample";
    for (const auto& label : b.col_labels()) out << delimiter << label;
    out << '\n';
    for (std::size_t i = 0; i < b.rows(); ++i) {
        out << b.row_labels()[i];
        for (std::size_t j = 0; j < b.cols(); ++j) out << delimiter << (b(i, j) ? '1' : '0');
        out << '\n';
    }
}

}  // namespace concur
