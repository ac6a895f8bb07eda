#include "embtopo/persistence.hpp"

#include <algorithm>
#include <numeric>

#include "embtopo/error.hpp"

namespace embtopo {

namespace {

constexpr std::uint32_t kNone = 0xffffffffu;

// Column over GF(2): ascending face ranks, pivot is the last entry.
using Column = std::vector<std::uint32_t>;

void xor_into(Column& target, const Column& source, Column& scratch) {
    scratch.clear();
    std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(),
                                  std::back_inserter(scratch));
    target.swap(scratch);
}

void emit(std::vector<PersistencePair>& out, int dim, double birth, double death) {
    if (birth != death) out.push_back({dim, birth, death});
}

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0u); }

    std::uint32_t find(std::uint32_t x) noexcept {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void attach(std::uint32_t child, std::uint32_t root) noexcept { parent_[child] = root; }

private:
    std::vector<std::uint32_t> parent_;
};

struct H0Result {
    std::vector<PersistencePair> pairs;
    std::vector<bool> merge_edge;  // indexed by edge rank
};

// Components are tracked by vertex rank, so a smaller root means an older component.
H0Result run_union_find(const FilteredComplex& complex, const CellOrder& order) {
    const auto vertices = order.dimension(0);
    const auto edges = order.dimension(1);

    std::vector<std::uint32_t> rank_of_vertex(complex.vertex_count());
    for (std::uint32_t r = 0; r < vertices.size(); ++r) rank_of_vertex[vertices[r].id >> 3] = r;

    H0Result result;
    result.merge_edge.assign(edges.size(), false);
    UnionFind uf(vertices.size());
    std::array<CellId, 6> faces{};
    for (std::size_t e = 0; e < edges.size(); ++e) {
        complex.boundary_ids(edges[e].id, faces);
        const auto a = uf.find(rank_of_vertex[faces[0] >> 3]);
        const auto b = uf.find(rank_of_vertex[faces[1] >> 3]);
        if (a == b) continue;
        const auto elder = std::min(a, b);
        const auto younger = std::max(a, b);
        emit(result.pairs, 0, vertices[younger].value, edges[e].value);
        uf.attach(younger, elder);
        result.merge_edge[e] = true;
    }
    for (std::uint32_t r = 0; r < vertices.size(); ++r) {
        if (uf.find(r) == r) result.pairs.push_back({0, vertices[r].value, kInfinity});
    }
    return result;
}

// Per-dimension rank lookup: rank_of[id] is the position of the cell within its dimension.
std::vector<std::uint32_t> rank_lookup(const FilteredComplex& complex, const CellOrder& order) {
    std::vector<std::uint32_t> rank_of(complex.id_bound(), kNone);
    for (int dim = 0; dim <= 3; ++dim) {
        const auto cells = order.dimension(dim);
        for (std::uint32_t r = 0; r < cells.size(); ++r) rank_of[cells[r].id] = r;
    }
    return rank_of;
}

struct DimensionReduction {
    std::vector<std::uint32_t> pivot_owner;  // face rank -> column rank whose reduced pivot it is
    std::vector<bool> zero_column;           // column rank -> reduced to zero (positive cell)
};

// Reduces the boundary columns of all `dim`-cells, skipping columns marked in `cleared`.
DimensionReduction reduce_dimension(const FilteredComplex& complex, const CellOrder& order,
                                    const std::vector<std::uint32_t>& rank_of, int dim,
                                    const std::vector<bool>& cleared, const ReductionOptions& options,
                                    std::vector<PersistencePair>& pairs) {
    const auto cells = order.dimension(dim);
    const auto faces = order.dimension(dim - 1);

    DimensionReduction out;
    out.pivot_owner.assign(faces.size(), kNone);
    out.zero_column.assign(cells.size(), false);

    std::vector<Column> reduced(cells.size());
    std::size_t workspace = 0;
    Column column;
    Column scratch;
    std::array<CellId, 6> face_ids{};
    for (std::uint32_t j = 0; j < cells.size(); ++j) {
        if (!cleared.empty() && cleared[j]) {
            out.zero_column[j] = true;
            continue;
        }
        const int n = complex.boundary_ids(cells[j].id, face_ids);
        column.clear();
        for (int f = 0; f < n; ++f) column.push_back(rank_of[face_ids[static_cast<std::size_t>(f)]]);
        std::sort(column.begin(), column.end());

        while (!column.empty()) {
            const auto owner = out.pivot_owner[column.back()];
            if (owner == kNone) break;
            xor_into(column, reduced[owner], scratch);
        }
        if (column.empty()) {
            out.zero_column[j] = true;
            continue;
        }
        const auto pivot = column.back();
        out.pivot_owner[pivot] = j;
        emit(pairs, dim - 1, faces[pivot].value, cells[j].value);

        workspace += column.size() * sizeof(std::uint32_t);
        if (workspace > options.max_workspace_bytes)
            throw Error(ErrorKind::ReductionOverflow, "reduced columns of dimension " + std::to_string(dim) +
                                                          " exceed " + std::to_string(options.max_workspace_bytes) +
                                                          " bytes");
        reduced[j] = column;
    }
    return out;
}

}  // namespace

PersistenceDiagram::PersistenceDiagram(std::vector<PersistencePair> p) : pairs(std::move(p)) {
    std::sort(pairs.begin(), pairs.end());
}

std::vector<PersistencePair> PersistenceDiagram::of_dim(int dim) const {
    std::vector<PersistencePair> out;
    std::copy_if(pairs.begin(), pairs.end(), std::back_inserter(out),
                 [dim](const PersistencePair& p) { return p.dim == dim; });
    return out;
}

std::vector<PersistencePair> h0_union_find(const FilteredComplex& complex, const CellOrder& order) {
    auto pairs = run_union_find(complex, order).pairs;
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

std::vector<PersistencePair> h0_union_find(const FilteredComplex& complex) {
    return h0_union_find(complex, sorted_cells(complex));
}

PersistenceDiagram reduce_with_clearing(const FilteredComplex& complex, const ReductionOptions& options) {
    const auto order = sorted_cells(complex);
    auto h0 = run_union_find(complex, order);
    std::vector<PersistencePair> pairs = std::move(h0.pairs);

    const auto rank_of = rank_lookup(complex, order);
    const auto squares = order.dimension(2);
    const auto edges = order.dimension(1);

    // Cubes first: every square that is a reduced pivot of a cube column is positive and
    // already paired, so its own column is cleared before the square pass.
    std::vector<bool> cleared_squares;
    if (!order.dimension(3).empty()) {
        const auto cubes = reduce_dimension(complex, order, rank_of, 3, {}, options, pairs);
        cleared_squares.assign(squares.size(), false);
        for (std::size_t s = 0; s < squares.size(); ++s) cleared_squares[s] = cubes.pivot_owner[s] != kNone;
    }

    std::vector<std::uint32_t> square_pivot(edges.size(), kNone);
    if (!squares.empty()) {
        const auto sq = reduce_dimension(complex, order, rank_of, 2, cleared_squares, options, pairs);
        square_pivot = sq.pivot_owner;
        for (std::size_t s = 0; s < squares.size(); ++s) {
            const bool killed = !cleared_squares.empty() && cleared_squares[s];
            if (sq.zero_column[s] && !killed) pairs.push_back({2, squares[s].value, kInfinity});
        }
    }

    // Edges that neither merge components nor get filled by a square carry essential H1.
    for (std::size_t e = 0; e < edges.size(); ++e) {
        if (!h0.merge_edge[e] && square_pivot[e] == kNone) pairs.push_back({1, edges[e].value, kInfinity});
    }
    return PersistenceDiagram(std::move(pairs));
}

PersistenceDiagram naive_reduce(const FilteredComplex& complex, std::size_t max_cells) {
    if (complex.total_cells() > max_cells)
        throw Error(ErrorKind::OracleTooLarge, std::to_string(complex.total_cells()) + " cells exceed the oracle limit of " +
                                                   std::to_string(max_cells));
    const auto cells = sorted_cells(complex).sequence();
    std::vector<std::uint32_t> position(complex.id_bound(), kNone);
    for (std::uint32_t i = 0; i < cells.size(); ++i) position[cells[i].id] = i;

    std::vector<Column> matrix(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j) {
        for (const auto& face : boundary(complex.cube_of(cells[j].id))) matrix[j].push_back(position[complex.id_of(face)]);
        std::sort(matrix[j].begin(), matrix[j].end());
    }

    std::vector<std::uint32_t> low_owner(cells.size(), kNone);
    Column scratch;
    for (std::uint32_t j = 0; j < cells.size(); ++j) {
        auto& column = matrix[j];
        while (!column.empty() && low_owner[column.back()] != kNone) xor_into(column, matrix[low_owner[column.back()]], scratch);
        if (!column.empty()) low_owner[column.back()] = j;
    }

    std::vector<PersistencePair> pairs;
    for (std::uint32_t i = 0; i < cells.size(); ++i) {
        if (!matrix[i].empty()) continue;  // negative cell: closes the class of its low
        if (low_owner[i] == kNone) {
            pairs.push_back({cells[i].dim, cells[i].value, kInfinity});
        } else {
            emit(pairs, cells[i].dim, cells[i].value, cells[low_owner[i]].value);
        }
    }
    return PersistenceDiagram(std::move(pairs));
}

PersistenceDiagram compute_diagram(const ScalarGrid& grid, const ReductionOptions& options) {
    return reduce_with_clearing(build_complex(grid), options);
}

BettiNumbers betti_at(const PersistenceDiagram& diagram, double eta) noexcept {
    BettiNumbers betti{0, 0, 0};
    for (const auto& p : diagram.pairs) {
        if (p.dim < 0 || p.dim > 2) continue;
        if (p.birth <= eta && eta < p.death) ++betti[static_cast<std::size_t>(p.dim)];
    }
    return betti;
}

}  // namespace embtopo
