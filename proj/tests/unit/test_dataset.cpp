#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "xbarsim/dataset.hpp"

using namespace xbarsim;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string &name)
{
    const fs::path p = fs::temp_directory_path() / ("xbarsim_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

void put_be32(std::ofstream &out, std::uint32_t v)
{
    const unsigned char b[4] = {static_cast<unsigned char>(v >> 24), static_cast<unsigned char>(v >> 16),
            static_cast<unsigned char>(v >> 8), static_cast<unsigned char>(v)};
    out.write(reinterpret_cast<const char *>(b), 4);
}

} // namespace

TEST_CASE("IDX reader")
{
    const fs::path dir = scratch_dir("idx");
    {
        std::ofstream img(dir / "img", std::ios::binary);
        put_be32(img, 0x803);
        put_be32(img, 3);
        put_be32(img, 2);
        put_be32(img, 2);
        for (int i = 0; i < 12; ++i) {
            img.put(static_cast<char>(i * 20));
        }
        std::ofstream lab(dir / "lab", std::ios::binary);
        put_be32(lab, 0x801);
        put_be32(lab, 3);
        lab.put(7);
        lab.put(0);
        lab.put(9);
    }
    const LabeledDataset d = load_idx(dir / "img", dir / "lab");
    CHECK(d.size() == 3);
    CHECK(d.input_size == 4);
    CHECK(d.labels == std::vector<std::uint16_t>{7, 0, 9});
    CHECK(d.sample(2)[3] == 220);
    CHECK(load_idx(dir / "img", dir / "lab", 2).size() == 2);
    CHECK_THROWS_AS(load_idx(dir / "lab", dir / "img"), DatasetError);
    CHECK_THROWS_AS(load_idx(dir / "missing", dir / "lab"), DatasetError);
    CHECK_FALSE(find_mnist(dir, 10, 10).has_value());
}

TEST_CASE("CIFAR-10 records")
{
    const fs::path dir = scratch_dir("cifar");
    {
        std::ofstream out(dir / "batch.bin", std::ios::binary);
        for (int r = 0; r < 2; ++r) {
            out.put(static_cast<char>(r + 3));
            for (int i = 0; i < 3072; ++i) {
                out.put(static_cast<char>(r));
            }
        }
        out.put(1);
    }
    CHECK_THROWS_AS(load_cifar10(dir / "batch.bin"), DatasetError);
    const LabeledDataset d = load_cifar10(dir / "batch.bin", 2);
    CHECK(d.size() == 2);
    CHECK(d.labels[1] == 4);
    CHECK(d.sample(1)[3071] == 1);
}

TEST_CASE("area resampling averages blocks")
{
    const std::vector<std::uint8_t> src{0, 100, 200, 40, 60, 80, 10, 20, 30, 90, 110, 130, 1, 2, 3, 4};
    const auto out = resample_area(src, 4, 4, 2, 2);
    CHECK(out[0] == 60); // 0, 100, 60, 80
    CHECK(out[1] == 68); // 200, 40, 10, 20 -> 67.5 rounds away from zero
    CHECK(out[3] == 62); // 110, 130, 3, 4
    CHECK(out == resample_area(src, 4, 4, 2, 2));
    CHECK(resample_area(src, 4, 4, 4, 4) == src);
    CHECK_THROWS_AS(resample_area(src, 3, 4, 2, 2), DimensionError);
}

TEST_CASE("image directory with PGM files")
{
    const fs::path dir = scratch_dir("imgdir");
    for (const char *cls : {"a", "b"}) {
        fs::create_directories(dir / cls);
        std::ofstream out(dir / cls / "x.pgm", std::ios::binary);
        out << "P5\n# comment\n4 4\n255\n";
        for (int i = 0; i < 16; ++i) {
            out.put(static_cast<char>(cls[0] == 'a' ? 10 : 250));
        }
    }
    const LabeledDataset d = load_image_directory(dir, 2);
    CHECK(d.n_classes == 2);
    CHECK(d.size() == 2);
    CHECK(d.labels == std::vector<std::uint16_t>{0, 1});
    CHECK(d.sample(1)[0] == 250);
}

TEST_CASE("synthetic glyphs are deterministic and well formed")
{
    const LabeledDataset a = synthetic_digits(50, 9);
    const LabeledDataset b = synthetic_digits(50, 9);
    CHECK(a.pixels == b.pixels);
    CHECK(a.labels == b.labels);
    CHECK(a.input_size == 784);
    CHECK_NOTHROW(a.validate());
    CHECK(synthetic_digits(50, 10).pixels != a.pixels);
    const LabeledDataset l = synthetic_letters(30, 1);
    CHECK(l.n_classes == 26);
    CHECK(l.input_size == 2500);
    std::size_t ink = 0;
    for (const auto p : a.sample(0)) {
        ink += p > 128 ? 1 : 0;
    }
    CHECK(ink > 20);
}

TEST_CASE("dataset validation")
{
    LabeledDataset d;
    d.n_classes = 2;
    const std::uint8_t x[2] = {1, 2};
    d.add(x, 1);
    CHECK_NOTHROW(d.validate());
    d.labels[0] = 5;
    CHECK_THROWS_AS(d.validate(), DatasetError);
    const std::uint8_t y[3] = {1, 2, 3};
    CHECK_THROWS_AS(d.add(y, 0), DatasetError);
}
