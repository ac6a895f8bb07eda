#include "embtopo/cubical.hpp"

#include <algorithm>

#include "embtopo/error.hpp"

namespace embtopo {

std::vector<Cube> boundary(const Cube& cube) {
    std::vector<Cube> faces;
    faces.reserve(static_cast<std::size_t>(2 * cube.dim()));
    for (int axis = 0; axis < 3; ++axis) {
        const auto bit = static_cast<std::uint8_t>(1u << axis);
        if (!(cube.axes & bit)) continue;
        Cube low = cube;
        low.axes = static_cast<std::uint8_t>(cube.axes & ~bit);
        Cube high = low;
        ++high.anchor[static_cast<std::size_t>(axis)];
        faces.push_back(low);
        faces.push_back(high);
    }
    return faces;
}

FilteredComplex::FilteredComplex(ScalarGrid grid, std::uint64_t cell_cap) : grid_(std::move(grid)) {
    if (grid_.size() == 0) throw Error(ErrorKind::InvalidGrid, "cannot build a complex from an empty grid");
    const auto e = grid_.extent();
    for (std::size_t a = 0; a < 3; ++a) {
        if (e[a] > 0xffffffffu) throw Error(ErrorKind::GridTooLarge, "axis length exceeds 32 bits");
        extent_[a] = static_cast<std::uint32_t>(e[a]);
    }
    strides_ = {std::uint64_t{extent_[1]} * extent_[2], extent_[2], 1};
    if (total_cells() > cell_cap)
        throw Error(ErrorKind::GridTooLarge, std::to_string(total_cells()) + " cells exceed the cap of " +
                                                 std::to_string(cell_cap));
}

std::uint64_t FilteredComplex::cell_count(int dim) const noexcept {
    std::uint64_t total = 0;
    for (unsigned mask = 0; mask < 8; ++mask) {
        if (std::popcount(mask) != dim) continue;
        std::uint64_t count = 1;
        for (std::size_t a = 0; a < 3; ++a) count *= (mask >> a) & 1u ? extent_[a] - 1u : extent_[a];
        total += count;
    }
    return total;
}

std::uint64_t FilteredComplex::total_cells() const noexcept {
    return cell_count(0) + cell_count(1) + cell_count(2) + cell_count(3);
}

bool FilteredComplex::contains(const Cube& cube) const noexcept {
    if (cube.axes >= 8) return false;
    for (std::size_t a = 0; a < 3; ++a) {
        const std::uint64_t reach = std::uint64_t{cube.anchor[a]} + ((cube.axes >> a) & 1u);
        if (reach >= extent_[a]) return false;
    }
    return true;
}

CellId FilteredComplex::id_of(const Cube& cube) const noexcept {
    const CellId linear = cube.anchor[0] * strides_[0] + cube.anchor[1] * strides_[1] + cube.anchor[2];
    return linear * 8 + cube.axes;
}

Cube FilteredComplex::cube_of(CellId id) const noexcept {
    Cube cube;
    cube.axes = static_cast<std::uint8_t>(id & 7u);
    CellId linear = id >> 3;
    cube.anchor[2] = static_cast<std::uint32_t>(linear % extent_[2]);
    linear /= extent_[2];
    cube.anchor[1] = static_cast<std::uint32_t>(linear % extent_[1]);
    cube.anchor[0] = static_cast<std::uint32_t>(linear / extent_[1]);
    return cube;
}

double FilteredComplex::filtration(CellId id) const noexcept {
    const auto values = grid_.values();
    const unsigned mask = static_cast<unsigned>(id & 7u);
    const CellId linear = id >> 3;
    double best = values[linear];
    // Visit every vertex of the cube: each subset of the spanned axes is one corner offset.
    for (unsigned sub = mask; sub != 0; sub = (sub - 1) & mask) {
        CellId offset = 0;
        for (int a = 0; a < 3; ++a)
            if ((sub >> a) & 1u) offset += stride(a);
        best = std::max(best, values[linear + offset]);
    }
    return best;
}

int FilteredComplex::boundary_ids(CellId id, std::array<CellId, 6>& out) const noexcept {
    const unsigned mask = static_cast<unsigned>(id & 7u);
    const CellId linear = id >> 3;
    int n = 0;
    for (int a = 0; a < 3; ++a) {
        const unsigned bit = 1u << a;
        if (!(mask & bit)) continue;
        const CellId face_mask = mask & ~bit;
        out[static_cast<std::size_t>(n++)] = linear * 8 + face_mask;
        out[static_cast<std::size_t>(n++)] = (linear + stride(a)) * 8 + face_mask;
    }
    return n;
}

FilteredComplex build_complex(const ScalarGrid& grid, std::uint64_t cell_cap) {
    return FilteredComplex(grid, cell_cap);
}

bool cell_order_less(const OrderedCell& a, const OrderedCell& b) noexcept {
    if (a.value != b.value) return a.value < b.value;
    if (a.dim != b.dim) return a.dim < b.dim;
    return a.id < b.id;
}

std::size_t CellOrder::size() const noexcept {
    std::size_t n = 0;
    for (const auto& cells : by_dim_) n += cells.size();
    return n;
}

std::vector<OrderedCell> CellOrder::sequence() const {
    std::vector<OrderedCell> all;
    all.reserve(size());
    for (const auto& cells : by_dim_) {
        const auto mid = all.size();
        all.insert(all.end(), cells.begin(), cells.end());
        std::inplace_merge(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(mid), all.end(), cell_order_less);
    }
    return all;
}

CellOrder sorted_cells(const FilteredComplex& complex) {
    std::array<std::vector<OrderedCell>, 4> by_dim;
    for (int dim = 0; dim <= 3; ++dim) {
        auto& cells = by_dim[static_cast<std::size_t>(dim)];
        cells.reserve(complex.cell_count(dim));
        complex.for_each_cell(dim, [&](CellId id) { cells.push_back({complex.filtration(id), dim, id}); });
        std::sort(cells.begin(), cells.end(), cell_order_less);
    }
    return CellOrder(std::move(by_dim));
}

}  // namespace embtopo
