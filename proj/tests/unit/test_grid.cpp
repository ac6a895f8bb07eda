#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "embtopo/error.hpp"
#include "embtopo/grid.hpp"
#include "synthetic.hpp"

using namespace embtopo;

namespace {

Tensor make_tensor(std::vector<std::size_t> shape, std::vector<double> values) {
    Tensor t;
    t.header.shape = std::move(shape);
    t.values = std::move(values);
    return t;
}

std::vector<double> iota(std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<double>(i);
    return v;
}

}  // namespace

TEST_CASE("grid invariants") {
    CHECK_THROWS_AS(ScalarGrid({4}, iota(4)), Error);
    CHECK_THROWS_AS(ScalarGrid({2, 2}, iota(3)), Error);
    CHECK_THROWS_AS(ScalarGrid({2, 0}, {}), Error);
    CHECK_THROWS_AS(ScalarGrid({1, 2}, {0.0, std::numeric_limits<double>::quiet_NaN()}), Error);
    CHECK_THROWS_AS(ScalarGrid({1, 2}, {0.0, std::numeric_limits<double>::infinity()}), Error);
    const ScalarGrid g({2, 3, 2}, iota(12));
    CHECK(g.at(1, 2, 1) == 11.0);
    CHECK(g.at(0, 1, 0) == 2.0);
}

TEST_CASE("to_grid channel policies") {
    SUBCASE("2-axis tensors ignore the policy") {
        const auto t = make_tensor({4, 4}, iota(16));
        for (auto policy : {ChannelPolicy::volume(), ChannelPolicy::mean(), ChannelPolicy::select(2)}) {
            const auto g = to_grid(t, policy);
            CHECK(g.dims() == std::vector<std::size_t>{4, 4});
            CHECK(std::equal(g.values().begin(), g.values().end(), t.values.begin()));
        }
    }
    SUBCASE("volume keeps channels as the third axis") {
        const auto g = to_grid(make_tensor({4, 4, 3}, iota(48)), ChannelPolicy::volume());
        CHECK(g.dims() == std::vector<std::size_t>{4, 4, 3});
    }
    SUBCASE("mean averages the channel pairs") {
        const auto g = to_grid(make_tensor({2, 2, 2}, {1, 2, 3, 4, 5, 6, 7, 8}), ChannelPolicy::mean());
        CHECK(g.dims() == std::vector<std::size_t>{2, 2});
        CHECK(std::vector<double>(g.values().begin(), g.values().end()) == std::vector<double>{1.5, 3.5, 5.5, 7.5});
    }
    SUBCASE("select picks one channel") {
        const auto g = to_grid(make_tensor({2, 2, 3}, iota(12)), ChannelPolicy::select(1));
        CHECK(std::vector<double>(g.values().begin(), g.values().end()) == std::vector<double>{1, 4, 7, 10});
    }
    SUBCASE("select out of range") {
        try {
            to_grid(make_tensor({2, 2, 3}, iota(12)), ChannelPolicy::select(3));
            FAIL("expected BadChannelIndex");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::BadChannelIndex);
        }
    }
}

TEST_CASE("volume is a relabeling of the tensor values") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> value;
    for (int trial = 0; trial < 20; ++trial) {
        const std::vector<std::size_t> shape{1 + rng() % 5, 1 + rng() % 5, 1 + rng() % 4};
        std::vector<double> values(shape[0] * shape[1] * shape[2]);
        for (auto& v : values) v = value(rng);
        const auto g = to_grid(make_tensor(shape, values), ChannelPolicy::volume());
        std::vector<double> a(g.values().begin(), g.values().end());
        std::sort(a.begin(), a.end());
        std::sort(values.begin(), values.end());
        CHECK(a == values);
    }
}

TEST_CASE("split_images separates a batch") {
    const auto t = make_tensor({3, 2, 2, 2}, iota(24));
    const auto grids = split_images(t, ChannelPolicy::volume());
    REQUIRE(grids.size() == 3);
    CHECK(grids[2].dims() == std::vector<std::size_t>{2, 2, 2});
    CHECK(grids[2].values()[0] == 16.0);
    CHECK(split_images(make_tensor({2, 2}, iota(4))).size() == 1);
}

TEST_CASE("channel policy parsing") {
    CHECK(ChannelPolicy::parse("volume").mode == ChannelPolicy::Mode::Volume);
    CHECK(ChannelPolicy::parse("mean").mode == ChannelPolicy::Mode::Mean);
    CHECK(ChannelPolicy::parse("select:4").channel == 4);
    CHECK_THROWS_AS(ChannelPolicy::parse("select:"), Error);
    CHECK_THROWS_AS(ChannelPolicy::parse("max"), Error);
}

TEST_CASE("downsample") {
    const ScalarGrid g({4, 4}, iota(16));
    SUBCASE("factor 1 is the identity") {
        std::mt19937_64 rng(2);
        for (int trial = 0; trial < 10; ++trial) {
            const auto r = testing::random_grid(rng, testing::random_small_shape(rng), 9);
            CHECK(downsample(r, 1, PoolMode::Stride) == r);
            CHECK(downsample(r, 1, PoolMode::MaxPool) == r);
        }
    }
    SUBCASE("stride keeps every other position") {
        const auto d = downsample(g, 2, PoolMode::Stride);
        CHECK(d.dims() == std::vector<std::size_t>{2, 2});
        CHECK(std::vector<double>(d.values().begin(), d.values().end()) == std::vector<double>{0, 2, 8, 10});
    }
    SUBCASE("max pool matches brute-force block maxima") {
        std::mt19937_64 rng(12);
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t rows = 1 + rng() % 7, cols = 1 + rng() % 7, factor = 1 + rng() % 3;
            const auto r = testing::random_grid(rng, {rows, cols}, 50);
            const auto d = downsample(r, factor, PoolMode::MaxPool);
            REQUIRE(d.dims() == std::vector<std::size_t>{(rows + factor - 1) / factor, (cols + factor - 1) / factor});
            for (std::size_t i = 0; i < d.dims()[0]; ++i)
                for (std::size_t j = 0; j < d.dims()[1]; ++j) {
                    double best = -1e300;
                    for (std::size_t a = 0; a < rows; ++a)
                        for (std::size_t b = 0; b < cols; ++b)
                            if (a / factor == i && b / factor == j) best = std::max(best, r.at(a, b));
                    CHECK(d.at(i, j) == best);
                }
        }
    }
    SUBCASE("channel axis is untouched") {
        const auto d = downsample(ScalarGrid({5, 3, 4}, iota(60)), 2, PoolMode::MaxPool);
        CHECK(d.dims() == std::vector<std::size_t>{3, 2, 4});
    }
    SUBCASE("degenerate 1x1 output") {
        CHECK(downsample(g, 8, PoolMode::MaxPool) == ScalarGrid({1, 1}, {15}));
    }
}

TEST_CASE("min-max normalization") {
    const auto n = min_max_normalize(ScalarGrid({1, 3}, {2, 4, 6}));
    CHECK(std::vector<double>(n.values().begin(), n.values().end()) == std::vector<double>{0, 0.5, 1});
    const auto c = min_max_normalize(testing::constant_grid({2, 2}, 3));
    CHECK(std::all_of(c.values().begin(), c.values().end(), [](double v) { return v == 0.0; }));
}
