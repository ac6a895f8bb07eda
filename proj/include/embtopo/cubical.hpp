#pragma once

#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "embtopo/grid.hpp"

namespace embtopo {

/// Packed cell identifier: row-major anchor index * 8 + spanned-axes mask.
/// Comparing ids orders cells by anchor lexicographically, then by axes mask.
using CellId = std::uint64_t;

/// Elementary cube: an anchor vertex plus the set of axes it spans (bit a = axis a).
struct Cube {
    std::array<std::uint32_t, 3> anchor{};
    std::uint8_t axes = 0;

    int dim() const noexcept { return std::popcount(axes); }

    friend auto operator<=>(const Cube&, const Cube&) = default;
};

/// The 2·dim faces of `cube`, collapsing each spanned axis (ascending) to its low then high end.
std::vector<Cube> boundary(const Cube& cube);

/// V-construction sublevel filtration of a grid: vertices carry grid values and every cube
/// takes the maximum over its vertices. Nothing beyond the grid itself is stored; cells,
/// filtration values and faces are all computed from packed ids.
class FilteredComplex {
public:
    static constexpr std::uint64_t kDefaultCellCap = std::uint64_t{1} << 31;

    explicit FilteredComplex(ScalarGrid grid, std::uint64_t cell_cap = kDefaultCellCap);

    const ScalarGrid& grid() const noexcept { return grid_; }
    int rank() const noexcept { return static_cast<int>(grid_.rank()); }
    const std::array<std::uint32_t, 3>& extent() const noexcept { return extent_; }
    std::uint64_t vertex_count() const noexcept { return grid_.size(); }
    /// Exclusive upper bound of all cell ids.
    std::uint64_t id_bound() const noexcept { return vertex_count() * 8; }

    std::uint64_t cell_count(int dim) const noexcept;
    std::uint64_t total_cells() const noexcept;

    bool contains(const Cube& cube) const noexcept;
    CellId id_of(const Cube& cube) const noexcept;
    Cube cube_of(CellId id) const noexcept;
    static int dim_of(CellId id) noexcept { return std::popcount(static_cast<unsigned>(id & 7u)); }

    double filtration(CellId id) const noexcept;
    double filtration(const Cube& cube) const noexcept { return filtration(id_of(cube)); }

    /// Writes the face ids of `id` into `out` and returns how many there are (0..6).
    int boundary_ids(CellId id, std::array<CellId, 6>& out) const noexcept;

    /// Calls fn(CellId) for every cell of dimension `dim`, in ascending id order.
    template <class Fn>
    void for_each_cell(int dim, Fn&& fn) const;

private:
    std::uint64_t stride(int axis) const noexcept { return strides_[static_cast<std::size_t>(axis)]; }

    ScalarGrid grid_;
    std::array<std::uint32_t, 3> extent_{};
    std::array<std::uint64_t, 3> strides_{};
};

FilteredComplex build_complex(const ScalarGrid& grid, std::uint64_t cell_cap = FilteredComplex::kDefaultCellCap);

/// A cell paired with its position key in the total order.
struct OrderedCell {
    double value = 0.0;
    int dim = 0;
    CellId id = 0;

    friend bool operator==(const OrderedCell&, const OrderedCell&) = default;
};

/// Ascending (filtration value, dim, anchor, axes).
bool cell_order_less(const OrderedCell& a, const OrderedCell& b) noexcept;

/// Total order on the cells of a complex, stored per dimension. Within one dimension the
/// order is the restriction of the global order.
class CellOrder {
public:
    CellOrder() = default;
    explicit CellOrder(std::array<std::vector<OrderedCell>, 4> by_dim) : by_dim_(std::move(by_dim)) {}

    std::span<const OrderedCell> dimension(int dim) const noexcept {
        return by_dim_[static_cast<std::size_t>(dim)];
    }
    std::size_t size() const noexcept;
    /// The global order, merged across dimensions.
    std::vector<OrderedCell> sequence() const;

private:
    std::array<std::vector<OrderedCell>, 4> by_dim_;
};

CellOrder sorted_cells(const FilteredComplex& complex);

template <class Fn>
void FilteredComplex::for_each_cell(int dim, Fn&& fn) const {
    const auto [n0, n1, n2] = extent_;
    for (std::uint32_t i = 0; i < n0; ++i) {
        for (std::uint32_t j = 0; j < n1; ++j) {
            for (std::uint32_t k = 0; k < n2; ++k) {
                const CellId base = ((static_cast<CellId>(i) * n1 + j) * n2 + k) * 8;
                for (unsigned mask = 0; mask < 8; ++mask) {
                    if (std::popcount(mask) != dim) continue;
                    if (((mask & 1u) && i + 1 >= n0) || ((mask & 2u) && j + 1 >= n1) || ((mask & 4u) && k + 1 >= n2))
                        continue;
                    fn(base + mask);
                }
            }
        }
    }
}

}  // namespace embtopo
