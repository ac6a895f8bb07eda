#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "embtopo/cubical.hpp"

namespace embtopo {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct PersistencePair {
    int dim = 0;
    double birth = 0.0;
    double death = kInfinity;

    bool essential() const noexcept { return death == kInfinity; }

    friend auto operator<=>(const PersistencePair&, const PersistencePair&) = default;
};

/// Multiset of persistence pairs kept sorted by (dim, birth, death) so that equality is
/// multiset equality.
struct PersistenceDiagram {
    std::vector<PersistencePair> pairs;

    PersistenceDiagram() = default;
    explicit PersistenceDiagram(std::vector<PersistencePair> p);

    std::vector<PersistencePair> of_dim(int dim) const;
    bool empty() const noexcept { return pairs.empty(); }

    friend bool operator==(const PersistenceDiagram&, const PersistenceDiagram&) = default;
};

using BettiNumbers = std::array<std::int64_t, 3>;

struct ReductionOptions {
    /// Upper bound on the bytes held by reduced columns.
    std::size_t max_workspace_bytes = std::size_t{4} << 30;
};

/// Zeroth persistence by union-find over vertices and edges in cell order (elder rule).
/// Zero-persistence pairs are dropped; the surviving component is reported with infinite death.
std::vector<PersistencePair> h0_union_find(const FilteredComplex& complex, const CellOrder& order);
std::vector<PersistencePair> h0_union_find(const FilteredComplex& complex);

/// Full diagram: H0 from union-find, H1/H2 from top-down column reduction with clearing.
PersistenceDiagram reduce_with_clearing(const FilteredComplex& complex, const ReductionOptions& options = {});

/// Textbook left-to-right reduction of the whole boundary matrix. Verification only.
PersistenceDiagram naive_reduce(const FilteredComplex& complex, std::size_t max_cells = 10'000);

/// Diagram of a grid through build_complex + reduce_with_clearing.
PersistenceDiagram compute_diagram(const ScalarGrid& grid, const ReductionOptions& options = {});

/// beta_k(eta) = #{(k, b, d) : b <= eta < d}.
BettiNumbers betti_at(const PersistenceDiagram& diagram, double eta) noexcept;

}  // namespace embtopo
