#include "xbarsim/dataset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <png.h>
#include <sstream>

namespace xbarsim {

namespace fs = std::filesystem;

void LabeledDataset::add(std::span<const std::uint8_t> x, std::uint16_t label)
{
    if (input_size == 0 && labels.empty()) {
        input_size = x.size();
    }
    if (x.size() != input_size) {
        throw DatasetError("sample length differs from the dataset input size");
    }
    pixels.insert(pixels.end(), x.begin(), x.end());
    labels.push_back(label);
}

void LabeledDataset::validate() const
{
    if (pixels.size() != labels.size() * input_size) {
        throw DatasetError("pixel buffer does not match sample count * input size");
    }
    for (const auto label : labels) {
        if (label >= n_classes) {
            throw DatasetError("label " + std::to_string(label) + " outside [0, "
                    + std::to_string(n_classes) + ")");
        }
    }
}

LabeledDataset LabeledDataset::subset(std::size_t begin, std::size_t count) const
{
    LabeledDataset out;
    out.input_size = input_size;
    out.n_classes = n_classes;
    out.source = source;
    const std::size_t end = std::min(size(), begin + count);
    for (std::size_t i = begin; i < end; ++i) {
        out.add(sample(i), labels[i]);
    }
    return out;
}

namespace {

std::uint32_t read_be32(std::istream &in)
{
    std::array<unsigned char, 4> b{};
    in.read(reinterpret_cast<char *>(b.data()), 4);
    if (!in) {
        throw DatasetError("unexpected end of IDX header");
    }
    return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16)
            | (std::uint32_t{b[2]} << 8) | std::uint32_t{b[3]};
}

std::ifstream open_binary(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in) {
        throw DatasetError("cannot open " + p.string());
    }
    return in;
}

} // namespace

LabeledDataset load_idx(const fs::path &images, const fs::path &labels, std::size_t limit)
{
    auto img = open_binary(images);
    auto lab = open_binary(labels);
    if (read_be32(img) != 0x00000803) {
        throw DatasetError(images.string() + ": bad IDX image magic");
    }
    if (read_be32(lab) != 0x00000801) {
        throw DatasetError(labels.string() + ": bad IDX label magic");
    }
    const std::size_t n_img = read_be32(img);
    const std::size_t rows = read_be32(img);
    const std::size_t cols = read_be32(img);
    const std::size_t n_lab = read_be32(lab);
    if (n_img != n_lab) {
        throw DatasetError("IDX image and label counts differ");
    }
    const std::size_t n = std::min(n_img, limit);
    LabeledDataset ds;
    ds.input_size = rows * cols;
    ds.n_classes = 10;
    ds.source = "mnist-idx";
    ds.pixels.resize(n * ds.input_size);
    ds.labels.resize(n);
    img.read(reinterpret_cast<char *>(ds.pixels.data()), static_cast<std::streamsize>(ds.pixels.size()));
    std::vector<unsigned char> raw(n);
    lab.read(reinterpret_cast<char *>(raw.data()), static_cast<std::streamsize>(n));
    if (!img || !lab) {
        throw DatasetError("IDX file truncated");
    }
    std::copy(raw.begin(), raw.end(), ds.labels.begin());
    ds.validate();
    return ds;
}

LabeledDataset load_cifar10(const fs::path &batch, std::size_t limit)
{
    constexpr std::size_t record_pixels = 3072;
    auto in = open_binary(batch);
    LabeledDataset ds;
    ds.input_size = record_pixels;
    ds.n_classes = 10;
    ds.source = "cifar10-bin";
    std::vector<std::uint8_t> record(1 + record_pixels);
    while (ds.size() < limit
            && in.read(reinterpret_cast<char *>(record.data()), static_cast<std::streamsize>(record.size()))) {
        ds.add(std::span(record).subspan(1), record[0]);
    }
    if (in.gcount() != 0 && in.gcount() != static_cast<std::streamsize>(record.size())) {
        throw DatasetError(batch.string() + ": truncated CIFAR-10 record");
    }
    ds.validate();
    return ds;
}

std::vector<std::uint8_t> resample_area(std::span<const std::uint8_t> src,
        std::size_t width, std::size_t height, std::size_t out_w, std::size_t out_h)
{
    if (src.size() != width * height || out_w == 0 || out_h == 0) {
        throw DimensionError("resample_area: bad dimensions");
    }
    std::vector<std::uint8_t> out(out_w * out_h);
    const double sx = static_cast<double>(width) / out_w;
    const double sy = static_cast<double>(height) / out_h;
    for (std::size_t oy = 0; oy < out_h; ++oy) {
        const double y0 = oy * sy, y1 = (oy + 1) * sy;
        for (std::size_t ox = 0; ox < out_w; ++ox) {
            const double x0 = ox * sx, x1 = (ox + 1) * sx;
            double sum = 0.0, area = 0.0;
            for (auto y = static_cast<std::size_t>(y0); y < height && static_cast<double>(y) < y1; ++y) {
                const double wy = std::min<double>(y + 1, y1) - std::max<double>(y, y0);
                for (auto x = static_cast<std::size_t>(x0); x < width && static_cast<double>(x) < x1; ++x) {
                    const double wx = std::min<double>(x + 1, x1) - std::max<double>(x, x0);
                    sum += wx * wy * src[y * width + x];
                    area += wx * wy;
                }
            }
            out[oy * out_w + ox] = static_cast<std::uint8_t>(std::lround(area > 0 ? sum / area : 0.0));
        }
    }
    return out;
}

namespace {

struct GrayImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels;
};

GrayImage read_pgm(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::string magic;
    in >> magic;
    auto next_int = [&in]() {
        in >> std::ws;
        while (in.peek() == '#') {
            std::string comment;
            std::getline(in, comment);
            in >> std::ws;
        }
        long v = -1;
        in >> v;
        return v;
    };
    GrayImage img;
    const long w = next_int(), h = next_int(), maxval = next_int();
    if (!in || (magic != "P5" && magic != "P2") || w <= 0 || h <= 0 || maxval <= 0 || maxval > 255) {
        throw DatasetError(p.string() + ": unsupported PGM");
    }
    img.width = static_cast<std::size_t>(w);
    img.height = static_cast<std::size_t>(h);
    img.pixels.resize(img.width * img.height);
    if (magic == "P5") {
        in.get();
        in.read(reinterpret_cast<char *>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
    } else {
        for (auto &px : img.pixels) {
            px = static_cast<std::uint8_t>(next_int());
        }
    }
    if (!in) {
        throw DatasetError(p.string() + ": truncated PGM");
    }
    if (maxval != 255) {
        for (auto &px : img.pixels) {
            px = static_cast<std::uint8_t>(std::lround(px * 255.0 / maxval));
        }
    }
    return img;
}

GrayImage read_png(const fs::path &p)
{
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, p.c_str())) {
        throw DatasetError(p.string() + ": " + image.message);
    }
    image.format = PNG_FORMAT_GRAY;
    GrayImage img;
    img.width = image.width;
    img.height = image.height;
    img.pixels.resize(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, img.pixels.data(), 0, nullptr)) {
        png_image_free(&image);
        throw DatasetError(p.string() + ": " + image.message);
    }
    return img;
}

} // namespace

LabeledDataset load_image_directory(const fs::path &root, std::size_t side,
        std::size_t per_class_limit)
{
    if (!fs::is_directory(root)) {
        throw DatasetError(root.string() + " is not a directory");
    }
    std::vector<fs::path> classes;
    for (const auto &entry : fs::directory_iterator(root)) {
        if (entry.is_directory()) {
            classes.push_back(entry.path());
        }
    }
    std::sort(classes.begin(), classes.end());
    LabeledDataset ds;
    ds.input_size = side * side;
    ds.n_classes = classes.size();
    ds.source = "image-dir:" + root.filename().string();
    for (std::size_t c = 0; c < classes.size(); ++c) {
        std::vector<fs::path> files;
        for (const auto &entry : fs::directory_iterator(classes[c])) {
            const auto ext = entry.path().extension().string();
            if (entry.is_regular_file() && (ext == ".png" || ext == ".pgm" || ext == ".PNG")) {
                files.push_back(entry.path());
            }
        }
        std::sort(files.begin(), files.end());
        if (files.size() > per_class_limit) {
            files.resize(per_class_limit);
        }
        for (const auto &f : files) {
            const GrayImage img = (f.extension() == ".pgm") ? read_pgm(f) : read_png(f);
            const auto small = resample_area(img.pixels, img.width, img.height, side, side);
            ds.add(small, static_cast<std::uint16_t>(c));
        }
    }
    ds.validate();
    return ds;
}

std::optional<TrainTestSplit> find_mnist(const fs::path &root, std::size_t train_count,
        std::size_t test_count)
{
    const std::array<fs::path, 2> dirs{root, root / "mnist"};
    for (const auto &dir : dirs) {
        const auto ti = dir / "train-images-idx3-ubyte";
        const auto tl = dir / "train-labels-idx1-ubyte";
        const auto vi = dir / "t10k-images-idx3-ubyte";
        const auto vl = dir / "t10k-labels-idx1-ubyte";
        if (fs::exists(ti) && fs::exists(tl) && fs::exists(vi) && fs::exists(vl)) {
            return TrainTestSplit{load_idx(ti, tl, train_count), load_idx(vi, vl, test_count)};
        }
    }
    return std::nullopt;
}

} // namespace xbarsim
