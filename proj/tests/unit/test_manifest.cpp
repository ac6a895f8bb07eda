#include <doctest.h>

#include <fstream>

#include "embtopo/error.hpp"
#include "embtopo/manifest.hpp"
#include "synthetic.hpp"

using namespace embtopo;

namespace {

ErrorKind load_error(const std::filesystem::path& path) {
    try {
        load_manifest(path);
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("manifest was accepted");
    return ErrorKind::Io;
}

void write_text(const std::filesystem::path& path, const std::string& text) { std::ofstream(path) << text; }

}  // namespace

TEST_CASE("valid manifest") {
    testing::TempDir dir;
    const auto grid = testing::ring_grid();
    for (int i = 0; i < 3; ++i) testing::write_grid(dir / ("l" + std::to_string(i) + ".npy"), grid);
    testing::write_manifest(dir / "m.json", "resnet18", "stl10", 0.91,
                            {{0, "stem", "l0.npy", {3, 3}}, {1, "layer1.0", "l1.npy", {3, 3}}, {2, "layer1.1", "l2.npy", {3, 3}}});
    const auto m = load_manifest(dir / "m.json");
    CHECK(m.model_id == "resnet18");
    CHECK(m.dataset_id == "stl10");
    REQUIRE(m.finetuned_accuracy.has_value());
    CHECK(*m.finetuned_accuracy == doctest::Approx(0.91));
    REQUIRE(m.layers.size() == 3);
    CHECK(m.layers[1].name == "layer1.0");
    CHECK(m.layers[2].tensors.front() == dir / "l2.npy");
}

TEST_CASE("accuracy is optional") {
    testing::TempDir dir;
    testing::write_grid(dir / "l0.npy", testing::ring_grid());
    testing::write_manifest(dir / "m.json", "vgg16", "cifar10", std::nullopt, {{0, "conv1", "l0.npy", {3, 3}}});
    CHECK_FALSE(load_manifest(dir / "m.json").finetuned_accuracy.has_value());

    write_text(dir / "m2.json",
               R"({"model_id":"a","dataset_id":"b","layers":[{"index":0,"name":"x","tensor":"l0.npy","shape":[3,3]}]})");
    CHECK_FALSE(load_manifest(dir / "m2.json").finetuned_accuracy.has_value());
}

TEST_CASE("per-image tensor lists") {
    testing::TempDir dir;
    testing::write_grid(dir / "a.npy", testing::ring_grid());
    testing::write_grid(dir / "b.npy", testing::ring_grid());
    write_text(dir / "m.json", R"({"model_id":"a","dataset_id":"b","finetuned_accuracy":null,
        "layers":[{"index":0,"name":"x","tensor":["a.npy","b.npy"],"shape":[3,3]}]})");
    CHECK(load_manifest(dir / "m.json").layers.front().tensors.size() == 2);
}

TEST_CASE("manifest errors") {
    testing::TempDir dir;
    testing::write_grid(dir / "l.npy", testing::ring_grid());

    SUBCASE("non-monotone layer indices") {
        testing::write_manifest(dir / "m.json", "m", "d", std::nullopt,
                                {{0, "a", "l.npy", {3, 3}}, {2, "b", "l.npy", {3, 3}}, {1, "c", "l.npy", {3, 3}}});
        CHECK(load_error(dir / "m.json") == ErrorKind::NonMonotoneLayerIndex);
    }
    SUBCASE("missing tensor file") {
        testing::write_manifest(dir / "m.json", "m", "d", std::nullopt, {{0, "a", "nope.npy", {3, 3}}});
        CHECK(load_error(dir / "m.json") == ErrorKind::MissingTensorFile);
    }
    SUBCASE("shape mismatch") {
        testing::write_manifest(dir / "m.json", "m", "d", std::nullopt, {{0, "a", "l.npy", {3, 4}}});
        CHECK(load_error(dir / "m.json") == ErrorKind::SchemaViolation);
    }
    SUBCASE("missing field") {
        write_text(dir / "m.json", R"({"model_id":"m","layers":[]})");
        CHECK(load_error(dir / "m.json") == ErrorKind::SchemaViolation);
    }
    SUBCASE("wrong type") {
        write_text(dir / "m.json", R"({"model_id":"m","dataset_id":"d","layers":[{"index":"0","name":"a","tensor":"l.npy","shape":[3,3]}]})");
        CHECK(load_error(dir / "m.json") == ErrorKind::SchemaViolation);
    }
    SUBCASE("accuracy outside [0, 1]") {
        testing::write_manifest(dir / "m.json", "m", "d", 1.5, {{0, "a", "l.npy", {3, 3}}});
        CHECK(load_error(dir / "m.json") == ErrorKind::SchemaViolation);
    }
    SUBCASE("invalid JSON") {
        write_text(dir / "m.json", "{not json");
        CHECK(load_error(dir / "m.json") == ErrorKind::SchemaViolation);
    }
}
