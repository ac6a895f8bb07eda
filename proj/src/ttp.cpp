#include "embtopo/ttp.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "embtopo/error.hpp"

namespace embtopo {

double FittedPolynomial::operator()(double t) const noexcept {
    double acc = 0.0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * t + *it;
    return acc;
}

double FittedPolynomial::derivative(double t) const noexcept {
    double acc = 0.0;
    for (std::size_t p = coefficients.size(); p-- > 1;) acc = acc * t + static_cast<double>(p) * coefficients[p];
    return acc;
}

std::vector<double> normalized_depth(std::span<const int> layer_indices) {
    if (layer_indices.empty()) return {};
    const auto [lo, hi] = std::minmax_element(layer_indices.begin(), layer_indices.end());
    if (*lo == *hi) throw Error(ErrorKind::DegenerateFit, "all layer indices are identical");
    std::vector<double> t;
    t.reserve(layer_indices.size());
    const double span = static_cast<double>(*hi) - static_cast<double>(*lo);
    for (int idx : layer_indices) t.push_back((static_cast<double>(idx) - *lo) / span);
    return t;
}

FittedPolynomial fit_polynomial(std::span<const double> t, std::span<const double> y, int degree) {
    if (degree < 1) throw Error(ErrorKind::InvalidArgument, "polynomial degree must be >= 1");
    if (t.size() != y.size()) throw Error(ErrorKind::LengthMismatch, "depth and value counts differ");
    if (t.size() < static_cast<std::size_t>(degree) + 1)
        throw Error(ErrorKind::InsufficientLayers, std::to_string(t.size()) + " layers cannot fit degree " +
                                                       std::to_string(degree));
    if (std::all_of(t.begin(), t.end(), [&](double v) { return v == t.front(); }))
        throw Error(ErrorKind::DegenerateFit, "all depths are identical");

    const auto n = static_cast<Eigen::Index>(t.size());
    Eigen::MatrixXd vandermonde(n, degree + 1);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double power = 1.0;
        for (int p = 0; p <= degree; ++p) {
            vandermonde(i, p) = power;
            power *= t[static_cast<std::size_t>(i)];
        }
        rhs(i) = y[static_cast<std::size_t>(i)];
    }
    const auto qr = vandermonde.colPivHouseholderQr();
    if (qr.rank() < degree + 1)
        throw Error(ErrorKind::DegenerateFit, "too few distinct depths for degree " + std::to_string(degree));
    const Eigen::VectorXd solution = qr.solve(rhs);

    FittedPolynomial poly;
    poly.degree = degree;
    poly.coefficients.assign(solution.data(), solution.data() + solution.size());
    return poly;
}

FittedPolynomial fit_polynomial(const OmegaTrajectory& trajectory, int degree) {
    std::vector<int> indices;
    std::vector<double> omega;
    for (const auto& r : trajectory.records) {
        indices.push_back(r.layer_index);
        omega.push_back(r.omega_mean);
    }
    if (indices.size() < static_cast<std::size_t>(std::max(degree, 1)) + 1)
        throw Error(ErrorKind::InsufficientLayers, std::to_string(indices.size()) + " layers cannot fit degree " +
                                                       std::to_string(degree));
    return fit_polynomial(normalized_depth(indices), omega, degree);
}

TTPResult ttp(const OmegaTrajectory& trajectory, int degree) {
    TTPResult result;
    result.model_id = trajectory.model_id;
    result.polynomial = fit_polynomial(trajectory, degree);
    result.midpoint = 0.5;
    result.theta = result.polynomial.derivative(result.midpoint);
    return result;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error(ErrorKind::LengthMismatch, "pearson inputs differ in length");
    if (x.size() < 3) throw Error(ErrorKind::InvalidArgument, "pearson needs at least 3 points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw Error(ErrorKind::ZeroVariance, "pearson input has zero variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double leep(const SoftmaxMatrix& source_softmax, std::span<const int> target_labels) {
    const std::size_t n = source_softmax.rows;
    const std::size_t z_count = source_softmax.cols;
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "LEEP needs at least one image");
    if (target_labels.size() != n) throw Error(ErrorKind::LengthMismatch, "label count differs from softmax rows");
    if (source_softmax.values.size() != n * z_count)
        throw Error(ErrorKind::LengthMismatch, "softmax matrix storage does not match its shape");

    int max_label = -1;
    for (int y : target_labels) {
        if (y < 0) throw Error(ErrorKind::InvalidArgument, "target labels must be non-negative");
        max_label = std::max(max_label, y);
    }
    const auto y_count = static_cast<std::size_t>(max_label) + 1;

    // Empirical joint P(y, z) and source marginal P(z).
    std::vector<double> joint(y_count * z_count, 0.0);
    std::vector<double> marginal(z_count, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = source_softmax.row(i);
        double sum = 0.0;
        for (double p : row) sum += p;
        if (std::abs(sum - 1.0) > 1e-6)
            throw Error(ErrorKind::RowNotNormalized, "row " + std::to_string(i) + " sums to " + std::to_string(sum));
        const auto y = static_cast<std::size_t>(target_labels[i]);
        for (std::size_t z = 0; z < z_count; ++z) {
            joint[y * z_count + z] += row[z] / static_cast<double>(n);
            marginal[z] += row[z] / static_cast<double>(n);
        }
    }

    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = source_softmax.row(i);
        const auto y = static_cast<std::size_t>(target_labels[i]);
        double expected = 0.0;
        for (std::size_t z = 0; z < z_count; ++z) {
            if (marginal[z] <= 0.0) continue;  // source class never predicted: no conditional
            expected += joint[y * z_count + z] / marginal[z] * row[z];
        }
        total += std::log(expected);
    }
    return std::min(0.0, total / static_cast<double>(n));
}

RankingReport rank_models(std::span<const TTPResult> results, const std::map<std::string, double>& accuracies,
                          const std::map<std::string, double>& leep_scores) {
    RankingReport report;
    for (const auto& r : results) {
        RankingEntry entry{r.model_id, r.theta, std::nullopt, std::nullopt};
        if (auto it = accuracies.find(r.model_id); it != accuracies.end()) entry.accuracy = it->second;
        if (auto it = leep_scores.find(r.model_id); it != leep_scores.end()) entry.leep = it->second;
        report.entries.push_back(std::move(entry));
    }
    std::sort(report.entries.begin(), report.entries.end(), [](const RankingEntry& a, const RankingEntry& b) {
        return a.theta != b.theta ? a.theta < b.theta : a.model_id < b.model_id;
    });

    std::vector<double> theta, accuracy, leep_accuracy, leep_values;
    for (const auto& e : report.entries) {
        if (!e.accuracy) {
            report.excluded.push_back(e.model_id);
            continue;
        }
        theta.push_back(e.theta);
        accuracy.push_back(*e.accuracy);
        if (e.leep) {
            leep_values.push_back(*e.leep);
            leep_accuracy.push_back(*e.accuracy);
        }
    }
    if (theta.size() < 3)
        throw Error(ErrorKind::InvalidArgument,
                    "ranking needs at least 3 models with accuracies, got " + std::to_string(theta.size()));
    report.pearson_theta = pearson(theta, accuracy);
    if (leep_values.size() >= 3) report.pearson_leep = pearson(leep_values, leep_accuracy);
    return report;
}

}  // namespace embtopo
