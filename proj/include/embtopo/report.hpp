#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "embtopo/metrics.hpp"
#include "embtopo/persistence.hpp"
#include "embtopo/ttp.hpp"

namespace embtopo {

/// 17 significant digits ("%.17g"); infinities print as "inf".
std::string format_real(double value);

std::string diagram_csv(const PersistenceDiagram& diagram);
std::string betti_csv(const BettiCurve& curve);
std::string omega_csv(const OmegaTrajectory& trajectory);
std::string ranking_csv(const RankingReport& report);

/// Parses a diagram CSV produced by diagram_csv.
PersistenceDiagram parse_diagram_csv(const std::string& text);

/// `model_id,accuracy` with a header line.
std::map<std::string, double> parse_accuracy_csv(const std::string& text);
/// `image_id,label` with a header line.
std::map<std::string, int> parse_labels_csv(const std::string& text);

struct SoftmaxTable {
    std::vector<std::string> image_ids;
    SoftmaxMatrix matrix;
};
/// `image_id,p_0,...,p_{Z-1}` with a header line.
SoftmaxTable parse_softmax_csv(const std::string& text);

std::string read_text_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it into place, so readers never observe a
/// partially written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace embtopo
