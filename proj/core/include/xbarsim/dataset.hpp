#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xbarsim/common.hpp"

namespace xbarsim {

// Samples of unsigned 8-bit pixels with integer class labels.
struct LabeledDataset {
    std::size_t input_size = 0;
    std::size_t n_classes = 0;
    std::vector<std::uint8_t> pixels; // size() * input_size, row-major
    std::vector<std::uint16_t> labels;
    std::string source; // provenance label written into reports

    std::size_t size() const { return labels.size(); }
    bool empty() const { return labels.empty(); }
    std::span<const std::uint8_t> sample(std::size_t i) const
    {
        return {pixels.data() + i * input_size, input_size};
    }
    void add(std::span<const std::uint8_t> x, std::uint16_t label);
    // Throws DatasetError on ragged samples or out-of-range labels.
    void validate() const;
    LabeledDataset subset(std::size_t begin, std::size_t count) const;
};

// MNIST IDX pair (images magic 0x00000803, labels magic 0x00000801).
LabeledDataset load_idx(const std::filesystem::path &images,
        const std::filesystem::path &labels,
        std::size_t limit = SIZE_MAX);

// CIFAR-10 binary batch: 1 label byte + 3072 pixel bytes per record.
LabeledDataset load_cifar10(const std::filesystem::path &batch,
        std::size_t limit = SIZE_MAX);

// Directory of per-class subdirectories holding grayscale PGM or PNG
// images; classes are the sorted subdirectory names. Every image is
// area-resampled to side x side.
LabeledDataset load_image_directory(const std::filesystem::path &root,
        std::size_t side, std::size_t per_class_limit = SIZE_MAX);

// Nearest-area downsampling of a grayscale image.
std::vector<std::uint8_t> resample_area(std::span<const std::uint8_t> src,
        std::size_t width, std::size_t height, std::size_t out_w,
        std::size_t out_h);

// Procedurally rendered stroke glyphs with random affine jitter and noise.
// Used when the real corpora are not present on disk.
struct SyntheticGlyphOptions {
    std::size_t side = 28;
    double glyph_fraction = 0.72; // glyph box relative to the image side
    double max_rotation_deg = 20.0;
    double max_shear = 0.30;
    double min_scale = 0.85;
    double max_scale = 1.10;
    double max_shift_px = 3.0;
    double vertex_jitter = 0.08;
    double min_thickness_px = 1.0;
    double max_thickness_px = 2.0;
    double noise_sigma = 40.0;
};

LabeledDataset synthetic_digits(std::size_t count, std::uint64_t seed,
        const SyntheticGlyphOptions &opt = {});
LabeledDataset synthetic_letters(std::size_t count, std::uint64_t seed,
        SyntheticGlyphOptions opt = {.side = 50, .max_shift_px = 5.0,
                .min_thickness_px = 1.8, .max_thickness_px = 3.2});

// Locates MNIST under `root` (train-images-idx3-ubyte etc.) and loads
// `train_count` / `test_count` samples; std::nullopt if absent.
struct TrainTestSplit {
    LabeledDataset train;
    LabeledDataset test;
};
std::optional<TrainTestSplit> find_mnist(const std::filesystem::path &root,
        std::size_t train_count, std::size_t test_count);

} // namespace xbarsim
