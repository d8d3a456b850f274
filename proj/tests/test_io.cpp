// Tests for the CSV round-trip guarantees and the SVG plot writer.
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "rmi/csv.hpp"
#include "rmi/rng.hpp"
#include "rmi/svg.hpp"

using namespace rmi;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

struct TempFile {
    std::string path;
    explicit TempFile(std::string p) : path(std::move(p)) {}
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_SUITE("io") {

TEST_CASE("format_g17 survives a parse round-trip bitwise") {
    Rng rng(6);
    for (int i = 0; i < 200; ++i) {
        const double v = rng.normal() * std::pow(10.0, rng.uniform(-12.0, 12.0));
        CHECK(std::stod(format_g17(v)) == v);
    }
    CHECK(std::stod(format_g17(0.1)) == 0.1);
    CHECK(std::stod(format_g17(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("csv write/read round-trip is bitwise lossless and byte-stable") {
    TempFile f("io_roundtrip_tmp.csv");
    Matrix values(3, 2);
    Rng rng(8);
    for (long i = 0; i < 3; ++i)
        for (long j = 0; j < 2; ++j) values(i, j) = rng.normal() * 1e-7;

    write_csv(f.path, {"alpha", "beta"}, values);
    const CsvTable t = read_csv(f.path);
    REQUIRE(t.columns.size() == 2);
    CHECK(t.columns[0] == "alpha");
    CHECK(t.columns[1] == "beta");
    CHECK((t.values.array() == values.array()).all());

    // Re-writing the same content must reproduce the file byte for byte.
    const std::string first = slurp(f.path);
    write_csv(f.path, {"alpha", "beta"}, values);
    CHECK(slurp(f.path) == first);
    CHECK(first.back() == '\n');
}

TEST_CASE("csv reader rejects malformed input") {
    TempFile f("io_malformed_tmp.csv");
    SUBCASE("missing file") {
        CHECK_THROWS_AS(read_csv("does_not_exist_anywhere.csv"), ConfigError);
    }
    SUBCASE("ragged row") {
        spit(f.path, "a,b\n1.0,2.0\n3.0\n");
        CHECK_THROWS_AS(read_csv(f.path), ConfigError);
    }
    SUBCASE("non-numeric cell") {
        spit(f.path, "a,b\n1.0,banana\n");
        CHECK_THROWS_AS(read_csv(f.path), ConfigError);
    }
    SUBCASE("header only") {
        spit(f.path, "a,b\n");
        CHECK_THROWS_AS(load_dataset(f.path), ConfigError);
    }
}

TEST_CASE("dataset headers and loaders") {
    const auto cols = dataset_columns(3);
    REQUIRE(cols.size() == 3);
    CHECK(cols[0] == "x1");
    CHECK(cols[2] == "x3");

    TempFile f("io_dataset_tmp.csv");
    Matrix values(4, 3);
    values.setConstant(1.5);
    values(2, 1) = -0.25;
    write_csv(f.path, cols, values);
    const SampleBatch batch = load_dataset(f.path);
    CHECK(batch.n_samples() == 4);
    CHECK(batch.n_dims() == 3);
    CHECK((batch.data.array() == values.array()).all());

    const Matrix labels = load_labels(f.path);
    CHECK((labels.array() == values.array()).all());
}

TEST_CASE("line plot carries axes, labels, legend, and the data") {
    TempFile f("io_plot_tmp.svg");
    SvgSeries a;
    a.label = "objective";
    a.color = "#1f77b4";
    a.x = {0.0, 1.0, 2.0, 3.0};
    a.y = {0.5, 0.8, 0.9, 0.95};
    SvgSeries b;
    b.label = "penalty";
    b.color = "#d62728";
    b.x = {0.0, 1.0, 2.0, 3.0};
    b.y = {1.0, 0.5, 0.25, 0.125};

    write_line_svg(f.path, "training curves", "step", "value", {a, b});
    const std::string svg = slurp(f.path);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
    CHECK(svg.find("training curves") != std::string::npos);
    CHECK(svg.find("step") != std::string::npos);
    CHECK(svg.find("value") != std::string::npos);
    CHECK(svg.find("objective") != std::string::npos);
    CHECK(svg.find("penalty") != std::string::npos);
    CHECK(svg.find("#1f77b4") != std::string::npos);

    // Deterministic output for identical input.
    const std::string first = svg;
    write_line_svg(f.path, "training curves", "step", "value", {a, b});
    CHECK(slurp(f.path) == first);
}

TEST_CASE("line plot rejects mismatched series lengths") {
    SvgSeries bad;
    bad.label = "broken";
    bad.color = "black";
    bad.x = {0.0, 1.0};
    bad.y = {0.5};
    CHECK_THROWS_AS(write_line_svg("io_bad_tmp.svg", "t", "x", "y", {bad}), ConfigError);
    std::remove("io_bad_tmp.svg");
}

}  // TEST_SUITE("io")
