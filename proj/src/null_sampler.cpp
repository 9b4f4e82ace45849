#include "concur/null_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include <Eigen/SVD>

namespace concur {

namespace {

constexpr int kMaxFrameRetries = 16;
// A Gram-Schmidt residual this small relative to the draw means the column is numerically
// dependent on the previous ones.
constexpr double kRankTolerance = 1e-8;
// Rounding noise in an O(d) change; genuine changes are sums of odd integers over weights.
constexpr double kAcceptTolerance = 1e-12;
constexpr double kTieTolerance = 1e-9;

std::vector<std::string> synthetic_row_labels(std::size_t n) {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.push_back("s" + std::to_string(i));
    return labels;
}

}  // namespace

NullModelFactors factorize(const BinaryMatrix& b) {
    const auto n = b.rows();
    const auto d = b.cols();
    if (n <= d) {
        throw ContractError("null model needs more rows than columns (N=" + std::to_string(n) +
                            ", d=" + std::to_string(d) + ")");
    }
    Eigen::MatrixXd data(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j)
            data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = b(i, j) ? 1.0 : 0.0;

    NullModelFactors f;
    f.rows = n;
    f.column_sums = data.colwise().sum().transpose();
    f.mean = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n)) * f.column_sums.transpose() / static_cast<double>(n);
    const Eigen::MatrixXd centered = data - f.mean;

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinU | Eigen::ComputeFullV);
    if (svd.info() != Eigen::Success) throw NumericError("singular value decomposition did not converge");
    f.singular_values = svd.singularValues();
    f.right_vectors = svd.matrixV();
    f.counts = concurrence_matrix(b);
    return f;
}

Eigen::MatrixXd sample_centered_frame(std::size_t rows, std::size_t cols, Rng& rng) {
    if (rows <= cols) throw ContractError("centred frame needs rows > cols");
    const auto n = static_cast<Eigen::Index>(rows);
    const auto d = static_cast<Eigen::Index>(cols);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd frame(n, d);

    for (Eigen::Index k = 0; k < d; ++k) {
        bool accepted = false;
        for (int attempt = 0; attempt < kMaxFrameRetries && !accepted; ++attempt) {
            Eigen::VectorXd w(n);
            for (Eigen::Index i = 0; i < n; ++i) w(i) = gauss(rng);
            w.array() -= w.mean();
            const double drawn_norm = w.norm();

            // Classical Gram-Schmidt, applied twice to restore orthogonality lost to rounding.
            for (int pass = 0; pass < 2; ++pass) {
                if (k > 0) {
                    const auto previous = frame.leftCols(k);
                    w -= previous * (previous.transpose() * w);
                }
            }
            const double residual = w.norm();
            if (!(residual > kRankTolerance * drawn_norm)) continue;
            frame.col(k) = w / residual;
            accepted = true;
        }
        if (!accepted) throw NumericError("Gram-Schmidt kept producing dependent columns");
    }
    return frame;
}

Eigen::MatrixXd synthesize_gaussian(const NullModelFactors& factors, const Eigen::MatrixXd& frame) {
    if (frame.rows() != factors.mean.rows() || frame.cols() != factors.singular_values.size()) {
        throw ContractError("frame shape does not match the factors");
    }
    return frame * factors.singular_values.asDiagonal() * factors.right_vectors.transpose() + factors.mean;
}

ShrunkWeights shrunk_weights(const ConcurrenceCounts& counts) {
    if (counts.dim == 0) throw ContractError("empty concurrence matrix");
    const double total = std::accumulate(counts.gram.begin(), counts.gram.end(), 0.0,
                                         [](double acc, std::int64_t v) { return acc + static_cast<double>(v); });
    const double grand_mean = total / static_cast<double>(counts.gram.size());
    ShrunkWeights w;
    w.dim = counts.dim;
    w.values.resize(counts.gram.size());
    for (std::size_t i = 0; i < counts.dim; ++i) {
        for (std::size_t j = 0; j < counts.dim; ++j) {
            double v = 0.5 * static_cast<double>(counts(i, j)) + 0.5 * grand_mean;
            if (i == j) v /= 2.0;
            w.values[i * counts.dim + j] = v;
        }
    }
    return w;
}

double delta_from_gram(const std::vector<std::int64_t>& gram, const ConcurrenceCounts& target,
                       const ShrunkWeights& weights) {
    if (gram.size() != target.gram.size() || weights.dim != target.dim)
        throw ContractError("Gram matrix, target and weights disagree in shape");
    if (target.all_zero()) throw DegenerateInputError("all-zero concurrence matrix: distance weights vanish");
    double delta = 0.0;
    for (std::size_t k = 0; k < gram.size(); ++k) {
        const double w = weights.values[k];
        if (!(w > 0.0)) throw DegenerateInputError("non-positive distance weight");
        const double diff = static_cast<double>(gram[k] - target.gram[k]);
        delta += diff * diff / w;
    }
    return delta;
}

double delta_distance(const BinaryMatrix& b, const ConcurrenceCounts& target, const ShrunkWeights& weights) {
    if (b.cols() != target.dim) throw ContractError("matrix and target disagree in column count");
    return delta_from_gram(concurrence_matrix(b).gram, target, weights);
}

GramTracker::GramTracker(BinaryMatrix matrix, const ConcurrenceCounts& target, const ShrunkWeights& weights)
    : matrix_(std::move(matrix)), target_(&target), weights_(&weights) {
    gram_ = concurrence_matrix(matrix_).gram;
    delta_ = delta_from_gram(gram_, target, weights);
}

double GramTracker::flip_change(std::size_t i, std::size_t j) const {
    const std::size_t d = target_->dim;
    const double sign = matrix_(i, j) ? -1.0 : 1.0;
    const auto diff = [&](std::size_t k) { return static_cast<double>(gram_[k] - target_->gram[k]); };

    // Off-diagonal (j, k) and (k, j) move together, hence the factor 2.
    double change = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        if (k == j || !matrix_(i, k)) continue;
        const std::size_t at = j * d + k;
        change += 2.0 * (2.0 * sign * diff(at) + 1.0) / weights_->values[at];
    }
    const std::size_t diag = j * d + j;
    change += (2.0 * sign * diff(diag) + 1.0) / weights_->values[diag];
    return change;
}

void GramTracker::apply_flip(std::size_t i, std::size_t j, double change) {
    const std::size_t d = target_->dim;
    const std::int64_t sign = matrix_(i, j) ? -1 : 1;
    for (std::size_t k = 0; k < d; ++k) {
        if (k == j || !matrix_(i, k)) continue;
        gram_[j * d + k] += sign;
        gram_[k * d + j] += sign;
    }
    gram_[j * d + j] += sign;
    matrix_.flip(i, j);
    delta_ += change;
}

ThresholdResult optimal_threshold(const Eigen::MatrixXd& y, const ConcurrenceCounts& target,
                                  const ShrunkWeights& weights) {
    const auto n = static_cast<std::size_t>(y.rows());
    const auto d = static_cast<std::size_t>(y.cols());
    if (d != target.dim) throw ContractError("threshold input and target disagree in column count");
    if (n == 0 || d == 0) throw ContractError("empty threshold input");
    if (!y.allFinite()) throw ContractError("threshold input has non-finite entries");

    std::vector<std::tuple<double, std::size_t, std::size_t>> entries;
    entries.reserve(n * d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j)
            entries.emplace_back(y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), i, j);
    std::sort(entries.begin(), entries.end(),
              [](const auto& x, const auto& z) { return std::get<0>(x) > std::get<0>(z); });

    // Lower t from above the maximum, switching entries on as t passes them.
    GramTracker tracker(BinaryMatrix(n, d), target, weights);
    double best_t = 0.0;
    double best_delta = 0.0;
    bool have_best = false;
    for (std::size_t k = 0; k < entries.size();) {
        const double t = std::get<0>(entries[k]);
        for (; k < entries.size() && std::get<0>(entries[k]) == t; ++k)
            tracker.apply_flip(std::get<1>(entries[k]), std::get<2>(entries[k]));
        const double candidate = tracker.delta();
        if (!have_best || candidate <= best_delta + kTieTolerance * std::max(1.0, std::abs(best_delta))) {
            best_t = t;
            best_delta = candidate;
            have_best = true;
        }
    }

    BinaryMatrix thresholded(n, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j)
            thresholded.set(i, j, y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) >= best_t);
    const double exact = delta_distance(thresholded, target, weights);
    return ThresholdResult{best_t, std::move(thresholded), exact};
}

double bootstrap_cutoff(const BinaryMatrix& b, std::size_t n_resamples, Rng& rng) {
    if (n_resamples < 1) throw ContractError("bootstrap cutoff needs at least one resample");
    const auto target = concurrence_matrix(b);
    const auto weights = shrunk_weights(target);
    std::vector<double> deltas;
    deltas.reserve(n_resamples);
    for (std::size_t r = 0; r < n_resamples; ++r) deltas.push_back(delta_distance(resample_rows(b, rng), target, weights));
    std::sort(deltas.begin(), deltas.end());
    const auto mid = n_resamples / 2;
    return n_resamples % 2 == 1 ? deltas[mid] : 0.5 * (deltas[mid - 1] + deltas[mid]);
}

SynthesisRecord refine_flips(BinaryMatrix start, const ConcurrenceCounts& target, const ShrunkWeights& weights,
                             double cutoff, Rng& rng, const RefineOptions& options) {
    if (options.max_attempts < 1) throw ContractError("max_attempts must be at least 1");
    if (!(cutoff > 0.0)) throw ContractError("cutoff must be positive: delta < cutoff is otherwise unreachable");
    const auto n = start.rows();
    const auto d = start.cols();
    if (n == 0 || d == 0) throw ContractError("cannot refine an empty matrix");

    GramTracker tracker(std::move(start), target, weights);
    SynthesisRecord record;
    record.delta_initial = tracker.delta();

    std::uniform_int_distribution<std::size_t> pick_row(0, n - 1);
    std::uniform_int_distribution<std::size_t> pick_col(0, d - 1);
    while (tracker.delta() >= cutoff) {
        if (record.flip_attempts == options.max_attempts) {
            record.delta_final = tracker.delta();
            record.matrix = std::move(tracker).release();
            throw NonConvergenceError("flip refinement did not reach the cutoff within " +
                                          std::to_string(options.max_attempts) + " attempts",
                                      std::move(record));
        }
        const auto i = pick_row(rng);
        const auto j = pick_col(rng);
        ++record.flip_attempts;
        const double change = tracker.flip_change(i, j);
        if (change < -kAcceptTolerance) {
            tracker.apply_flip(i, j, change);
            ++record.successful_flips;
        }
        if (options.record_trace) record.delta_trace.push_back(tracker.delta());
    }
    record.delta_final = tracker.delta();
    record.matrix = std::move(tracker).release();
    return record;
}

NullSampler::NullSampler(const BinaryMatrix& source)
    : factors_(factorize(source)), weights_(shrunk_weights(factors_.counts)), col_labels_(source.col_labels()) {}

SynthesisRecord NullSampler::generate(std::uint64_t seed, double cutoff, const RefineOptions& options) const {
    Rng rng(seed);
    const auto frame = sample_centered_frame(factors_.rows, factors_.counts.dim, rng);
    const auto y = synthesize_gaussian(factors_, frame);
    auto start = optimal_threshold(y, factors_.counts, weights_);

    const auto finish = [&](SynthesisRecord& record) {
        record.seed = seed;
        record.threshold = start.threshold;
        record.matrix = BinaryMatrix(record.matrix.bits(), synthetic_row_labels(factors_.rows), col_labels_);
    };
    try {
        auto record = refine_flips(std::move(start.matrix), factors_.counts, weights_, cutoff, rng, options);
        finish(record);
        return record;
    } catch (const NonConvergenceError& e) {
        auto best = e.best();
        finish(best);
        throw NonConvergenceError(e.what(), std::move(best));
    }
}

SynthesisRecord generate_synthetic(const BinaryMatrix& b, double cutoff, std::uint64_t seed,
                                   const RefineOptions& options) {
    return NullSampler(b).generate(seed, cutoff, options);
}

}  // namespace concur
