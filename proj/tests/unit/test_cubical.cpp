#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "embtopo/cubical.hpp"
#include "embtopo/error.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace embtopo;

namespace {

std::vector<double> values_of_dim(const FilteredComplex& complex, int dim) {
    std::vector<double> out;
    complex.for_each_cell(dim, [&](CellId id) { out.push_back(complex.filtration(id)); });
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Cube> sorted(std::vector<Cube> cubes) {
    std::sort(cubes.begin(), cubes.end());
    return cubes;
}

}  // namespace

TEST_CASE("single vertex complex") {
    const auto complex = build_complex(ScalarGrid({1, 1}, {5.0}));
    CHECK(complex.cell_count(0) == 1);
    CHECK(complex.cell_count(1) == 0);
    CHECK(complex.cell_count(2) == 0);
    CHECK(values_of_dim(complex, 0) == std::vector<double>{5.0});
}

TEST_CASE("2x2 grid takes the max of vertices") {
    const auto complex = build_complex(ScalarGrid({2, 2}, {0, 1, 2, 3}));
    CHECK(values_of_dim(complex, 0) == std::vector<double>{0, 1, 2, 3});
    CHECK(values_of_dim(complex, 1) == std::vector<double>{1, 2, 3, 3});
    CHECK(values_of_dim(complex, 2) == std::vector<double>{3});
}

TEST_CASE("3x3x3 cell counts") {
    const auto complex = build_complex(testing::constant_grid({3, 3, 3}, 0.0));
    CHECK(complex.cell_count(0) == 27);
    CHECK(complex.cell_count(1) == 54);
    CHECK(complex.cell_count(2) == 36);
    CHECK(complex.cell_count(3) == 8);
}

TEST_CASE("cell counts match the closed formula for every shape up to 6x6x6") {
    for (std::size_t a = 1; a <= 6; ++a) {
        for (std::size_t b = 1; b <= 6; ++b) {
            for (std::size_t c = 0; c <= 6; ++c) {
                std::vector<std::size_t> dims{a, b};
                if (c > 0) dims.push_back(c);
                const auto grid = testing::constant_grid(dims, 1.0);
                const auto complex = build_complex(grid);
                for (int k = 0; k <= 3; ++k) {
                    std::uint64_t enumerated = 0;
                    complex.for_each_cell(k, [&](CellId) { ++enumerated; });
                    CHECK(complex.cell_count(k) == testing::closed_form_cell_count(grid, k));
                    CHECK(enumerated == complex.cell_count(k));
                }
            }
        }
    }
}

TEST_CASE("filtration values agree with brute-force enumeration") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const auto grid = testing::random_grid(rng, testing::random_small_shape(rng), 9);
        const auto complex = build_complex(grid);
        std::map<int, std::vector<double>> expected;
        for (const auto& c : testing::brute_cells(grid)) expected[c.dim].push_back(c.value);
        for (int k = 0; k <= 3; ++k) {
            std::sort(expected[k].begin(), expected[k].end());
            CHECK(values_of_dim(complex, k) == expected[k]);
        }
    }
}

TEST_CASE("boundary faces") {
    SUBCASE("vertex has none") { CHECK(boundary(Cube{{1, 1, 0}, 0}).empty()); }
    SUBCASE("edge along axis 0") {
        CHECK(sorted(boundary(Cube{{1, 1, 0}, 0b001})) == sorted({Cube{{1, 1, 0}, 0}, Cube{{2, 1, 0}, 0}}));
    }
    SUBCASE("square collapses each axis") {
        const std::vector<Cube> expected{Cube{{0, 0, 0}, 0b001}, Cube{{0, 1, 0}, 0b001}, Cube{{0, 0, 0}, 0b010},
                                         Cube{{1, 0, 0}, 0b010}};
        CHECK(sorted(boundary(Cube{{0, 0, 0}, 0b011})) == sorted(expected));
    }
    SUBCASE("cube has six faces") { CHECK(boundary(Cube{{0, 0, 0}, 0b111}).size() == 6); }
}

TEST_CASE("boundary_ids agrees with boundary") {
    const auto complex = build_complex(testing::constant_grid({3, 4, 2}, 0.0));
    std::array<CellId, 6> ids{};
    for (int k = 0; k <= 3; ++k) {
        complex.for_each_cell(k, [&](CellId id) {
            const int n = complex.boundary_ids(id, ids);
            const auto faces = boundary(complex.cube_of(id));
            REQUIRE(static_cast<std::size_t>(n) == faces.size());
            for (std::size_t f = 0; f < faces.size(); ++f) {
                CHECK(complex.contains(faces[f]));
                CHECK(complex.id_of(faces[f]) == ids[f]);
            }
            CHECK(complex.id_of(complex.cube_of(id)) == id);
        });
    }
}

TEST_CASE("filtration is monotone and the boundary of a boundary vanishes") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        const auto complex = build_complex(testing::random_grid(rng, testing::random_small_shape(rng), 4));
        for (int k = 1; k <= 3; ++k) {
            complex.for_each_cell(k, [&](CellId id) {
                const auto cube = complex.cube_of(id);
                std::map<Cube, int> multiplicity;
                for (const auto& face : boundary(cube)) {
                    CHECK(complex.filtration(face) <= complex.filtration(cube));
                    for (const auto& ridge : boundary(face)) ++multiplicity[ridge];
                }
                for (const auto& [ridge, count] : multiplicity) CHECK(count % 2 == 0);
            });
        }
    }
}

TEST_CASE("cell order tie-breaks") {
    SUBCASE("equal filtration: vertex before edge") {
        const OrderedCell vertex{1.0, 0, 40};
        const OrderedCell edge{1.0, 1, 1};
        CHECK(cell_order_less(vertex, edge));
        CHECK_FALSE(cell_order_less(edge, vertex));
    }
    SUBCASE("2x2 square follows both filtration-3 edges") {
        const auto complex = build_complex(ScalarGrid({2, 2}, {0, 1, 2, 3}));
        const auto seq = sorted_cells(complex).sequence();
        REQUIRE(seq.size() == 9);
        CHECK(seq.back().dim == 2);
        CHECK(seq.back().value == 3.0);
        CHECK(seq[seq.size() - 2].dim == 1);
        CHECK(seq[seq.size() - 3].dim == 1);
        CHECK(seq[seq.size() - 3].value == 3.0);
    }
}

TEST_CASE("every face precedes its cell in the order") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto complex = build_complex(testing::random_grid(rng, {4, 4}, 9));
        const auto seq = sorted_cells(complex).sequence();
        REQUIRE(seq.size() == 49);
        CHECK(std::is_sorted(seq.begin(), seq.end(), cell_order_less));
        std::map<CellId, std::size_t> position;
        for (std::size_t i = 0; i < seq.size(); ++i) position[seq[i].id] = i;
        for (std::size_t i = 0; i < seq.size(); ++i) {
            for (const auto& face : boundary(complex.cube_of(seq[i].id))) CHECK(position.at(complex.id_of(face)) < i);
        }
    }
}

TEST_CASE("order is stable across runs") {
    std::mt19937_64 rng(8);
    const auto grid = testing::random_grid(rng, {5, 4, 3}, 2);
    CHECK(sorted_cells(build_complex(grid)).sequence() == sorted_cells(build_complex(grid)).sequence());
}

TEST_CASE("cell cap") {
    const auto grid = testing::constant_grid({4, 4, 4}, 0.0);
    CHECK_NOTHROW(build_complex(grid, 343));
    try {
        build_complex(grid, 342);
        FAIL("expected GridTooLarge");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::GridTooLarge);
    }
}
