#pragma once

#include <string>

#include "embtopo/metrics.hpp"
#include "embtopo/persistence.hpp"
#include "embtopo/ttp.hpp"

namespace embtopo {

struct SvgOptions {
    std::string title;
    /// Omit the generation timestamp comment so output is byte-stable.
    bool reproducible = false;
};

/// Birth/death scatter with the diagonal; essential classes sit on a band above the plot.
std::string diagram_svg(const PersistenceDiagram& diagram, const SvgOptions& options);
/// One polyline per Betti number.
std::string betti_svg(const BettiCurve& curve, const SvgOptions& options);
/// Omega against layer index; the threshold goes in the title block.
std::string omega_svg(const OmegaTrajectory& trajectory, const SvgOptions& options);
/// Theta against accuracy with a least-squares trend line.
std::string ranking_svg(const RankingReport& report, const SvgOptions& options);

}  // namespace embtopo
