#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "concur/errors.hpp"
#include "concur/matrix.hpp"

namespace concur {

// Precomputed pieces of D = U Lambda V^T + M for a data matrix D with N > d.
struct NullModelFactors {
    std::size_t rows = 0;
    Eigen::VectorXd column_sums;      // s
    Eigen::MatrixXd mean;             // M = N^-1 1_N s, N x d
    Eigen::VectorXd singular_values;  // Lambda, descending
    Eigen::MatrixXd right_vectors;    // V, d x d orthogonal
    ConcurrenceCounts counts;         // C = D^T D
};

// Variance-style weights for the distance: (C + c)/2 with c the mean entry of C, diagonal halved.
struct ShrunkWeights {
    std::size_t dim = 0;
    std::vector<double> values;  // dim x dim, row-major
    double operator()(std::size_t i, std::size_t j) const { return values[i * dim + j]; }
};

struct SynthesisRecord {
    BinaryMatrix matrix{0, 0};
    std::uint64_t seed = 0;
    double threshold = 0.0;
    double delta_initial = 0.0;
    double delta_final = 0.0;
    std::size_t flip_attempts = 0;
    std::size_t successful_flips = 0;
    std::vector<double> delta_trace;  // delta after each attempt, when requested
};

class NonConvergenceError : public std::runtime_error {
public:
    NonConvergenceError(const std::string& what, SynthesisRecord best)
        : std::runtime_error(what), best_(std::move(best)) {}

    const SynthesisRecord& best() const noexcept { return best_; }

private:
    SynthesisRecord best_;
};

NullModelFactors factorize(const BinaryMatrix& b);

// d orthonormal N-vectors with zero sum: centred standard-Gaussian draws, then Gram-Schmidt.
Eigen::MatrixXd sample_centered_frame(std::size_t rows, std::size_t cols, Rng& rng);

// Y = W Lambda V^T + M. Y^T Y equals C for every admissible frame W.
Eigen::MatrixXd synthesize_gaussian(const NullModelFactors& factors, const Eigen::MatrixXd& frame);

ShrunkWeights shrunk_weights(const ConcurrenceCounts& counts);

// Weighted squared distance between two Gram matrices, summed over all d^2 ordered pairs.
double delta_from_gram(const std::vector<std::int64_t>& gram, const ConcurrenceCounts& target,
                       const ShrunkWeights& weights);
double delta_distance(const BinaryMatrix& b, const ConcurrenceCounts& target, const ShrunkWeights& weights);

// A binary matrix together with its Gram matrix and current distance, supporting O(d)
// evaluation and application of single-entry flips.
class GramTracker {
public:
    GramTracker(BinaryMatrix matrix, const ConcurrenceCounts& target, const ShrunkWeights& weights);

    // Change in delta that flipping entry (i, j) would produce.
    double flip_change(std::size_t i, std::size_t j) const;
    void apply_flip(std::size_t i, std::size_t j, double change);
    void apply_flip(std::size_t i, std::size_t j) { apply_flip(i, j, flip_change(i, j)); }

    double delta() const noexcept { return delta_; }
    const BinaryMatrix& matrix() const noexcept { return matrix_; }
    const std::vector<std::int64_t>& gram() const noexcept { return gram_; }
    BinaryMatrix release() && { return std::move(matrix_); }

private:
    BinaryMatrix matrix_;
    const ConcurrenceCounts* target_;
    const ShrunkWeights* weights_;
    std::vector<std::int64_t> gram_;
    double delta_ = 0.0;
};

struct ThresholdResult {
    double threshold = 0.0;
    BinaryMatrix matrix{0, 0};
    double delta = 0.0;
};

// Scans every distinct value t of Y as a threshold for [Y >= t]; returns the minimiser of delta,
// preferring the smallest t among ties.
ThresholdResult optimal_threshold(const Eigen::MatrixXd& y, const ConcurrenceCounts& target,
                                  const ShrunkWeights& weights);

// Median of delta(D2^T D2, C) over bootstrap resamples D2 of the rows of b, with C and the
// weights fixed from b.
double bootstrap_cutoff(const BinaryMatrix& b, std::size_t n_resamples, Rng& rng);

inline constexpr std::size_t kDefaultMaxFlipAttempts = 50'000;

struct RefineOptions {
    std::size_t max_attempts = kDefaultMaxFlipAttempts;
    bool record_trace = false;
};

// Greedy single-entry flips accepted only on strict decrease of delta, until delta < cutoff.
SynthesisRecord refine_flips(BinaryMatrix start, const ConcurrenceCounts& target, const ShrunkWeights& weights,
                             double cutoff, Rng& rng, const RefineOptions& options = {});

// Caches the factors and weights of one source matrix; generate() is const and thread-safe.
class NullSampler {
public:
    explicit NullSampler(const BinaryMatrix& source);

    const NullModelFactors& factors() const noexcept { return factors_; }
    const ShrunkWeights& weights() const noexcept { return weights_; }

    SynthesisRecord generate(std::uint64_t seed, double cutoff, const RefineOptions& options = {}) const;

private:
    NullModelFactors factors_;
    ShrunkWeights weights_;
    std::vector<std::string> col_labels_;
};

SynthesisRecord generate_synthetic(const BinaryMatrix& b, double cutoff, std::uint64_t seed,
                                   const RefineOptions& options = {});

}  // namespace concur
