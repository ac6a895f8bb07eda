#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "embtopo/metrics.hpp"

namespace embtopo {

/// Least-squares polynomial on the normalized depth domain [0, 1]; coefficients in ascending power.
struct FittedPolynomial {
    int degree = 1;
    std::vector<double> coefficients;

    double operator()(double t) const noexcept;
    double derivative(double t) const noexcept;
};

struct TTPResult {
    std::string model_id;
    double theta = 0.0;
    FittedPolynomial polynomial;
    double midpoint = 0.5;
};

/// Maps strictly increasing layer indices affinely onto [0, 1].
std::vector<double> normalized_depth(std::span<const int> layer_indices);

FittedPolynomial fit_polynomial(std::span<const double> t, std::span<const double> y, int degree = 3);
FittedPolynomial fit_polynomial(const OmegaTrajectory& trajectory, int degree = 3);

/// Slope of the fitted Omega-vs-depth polynomial at the middle of the normalized domain.
TTPResult ttp(const OmegaTrajectory& trajectory, int degree = 3);

/// Sample Pearson correlation.
double pearson(std::span<const double> x, std::span<const double> y);

/// Row-major n×Z matrix of source-model class probabilities.
struct SoftmaxMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    std::span<const double> row(std::size_t i) const { return std::span<const double>(values).subspan(i * cols, cols); }
};

/// Log expected empirical prediction of target labels under the source model's soft outputs.
double leep(const SoftmaxMatrix& source_softmax, std::span<const int> target_labels);

struct RankingEntry {
    std::string model_id;
    double theta = 0.0;
    std::optional<double> accuracy;
    std::optional<double> leep;
};

struct RankingReport {
    std::vector<RankingEntry> entries;  // ascending theta, ties by model_id
    double pearson_theta = 0.0;
    std::optional<double> pearson_leep;
    /// Models without an accuracy; ranked but left out of the correlations.
    std::vector<std::string> excluded;
};

/// Ranks models by theta and correlates theta (and LEEP, when given for >= 3 of them) with
/// fine-tuned accuracy.
RankingReport rank_models(std::span<const TTPResult> results, const std::map<std::string, double>& accuracies,
                          const std::map<std::string, double>& leep_scores = {});

}  // namespace embtopo
