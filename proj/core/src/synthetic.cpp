#include <algorithm>
#include <cmath>
#include <numbers>

#include "xbarsim/dataset.hpp"

namespace xbarsim {

namespace {

struct Point {
    double x;
    double y;
};
using Stroke = std::vector<Point>;
using Glyph = std::vector<Stroke>;

// Glyph coordinates live in the unit box, y pointing down.
Stroke arc(double cx, double cy, double rx, double ry, double deg0, double deg1, int n = 16)
{
    Stroke s;
    for (int i = 0; i <= n; ++i) {
        const double a = (deg0 + (deg1 - deg0) * i / n) * std::numbers::pi / 180.0;
        s.push_back({cx + rx * std::cos(a), cy - ry * std::sin(a)});
    }
    return s;
}

const std::vector<Glyph> &digit_font()
{
    static const std::vector<Glyph> font = {
        {arc(0.5, 0.5, 0.33, 0.48, 0, 360, 20)},
        {{{0.3, 0.2}, {0.55, 0.0}, {0.55, 1.0}}},
        {{{0.15, 0.22}, {0.3, 0.04}, {0.55, 0.0}, {0.78, 0.08}, {0.85, 0.28}, {0.75, 0.48},
                {0.15, 1.0}, {0.88, 1.0}}},
        {{{0.15, 0.1}, {0.45, 0.0}, {0.75, 0.06}, {0.82, 0.25}, {0.7, 0.42}, {0.45, 0.48},
                {0.75, 0.56}, {0.87, 0.76}, {0.75, 0.95}, {0.45, 1.0}, {0.12, 0.9}}},
        {{{0.68, 1.0}, {0.68, 0.0}, {0.1, 0.68}, {0.92, 0.68}}},
        {{{0.82, 0.0}, {0.25, 0.0}, {0.18, 0.45}, {0.5, 0.38}, {0.78, 0.5}, {0.85, 0.75},
                {0.7, 0.95}, {0.42, 1.0}, {0.15, 0.9}}},
        {{{0.75, 0.04}, {0.45, 0.05}, {0.22, 0.3}, {0.15, 0.65}, {0.25, 0.92}, {0.5, 1.0},
                {0.75, 0.92}, {0.83, 0.7}, {0.72, 0.5}, {0.48, 0.45}, {0.25, 0.55}}},
        {{{0.12, 0.0}, {0.88, 0.0}, {0.4, 1.0}}},
        {arc(0.5, 0.26, 0.26, 0.24, 0, 360), arc(0.5, 0.73, 0.31, 0.27, 0, 360)},
        {arc(0.48, 0.3, 0.28, 0.28, 0, 360), {{0.76, 0.3}, {0.72, 0.65}, {0.6, 1.0}}},
    };
    return font;
}

const std::vector<Glyph> &letter_font()
{
    static const Stroke p_bowl = {{0.15, 1.0}, {0.15, 0.0}, {0.7, 0.0}, {0.85, 0.13},
            {0.85, 0.37}, {0.7, 0.5}, {0.15, 0.5}};
    static const std::vector<Glyph> font = {
        {{{0.1, 1.0}, {0.5, 0.0}, {0.9, 1.0}}, {{0.27, 0.6}, {0.73, 0.6}}},
        {{{0.15, 0.0}, {0.15, 1.0}},
                {{0.15, 0.0}, {0.65, 0.0}, {0.8, 0.12}, {0.8, 0.36}, {0.65, 0.48}, {0.15, 0.48}},
                {{0.15, 0.48}, {0.7, 0.48}, {0.87, 0.62}, {0.87, 0.86}, {0.7, 1.0}, {0.15, 1.0}}},
        {arc(0.55, 0.5, 0.4, 0.5, 45, 315)},
        {{{0.15, 0.0}, {0.15, 1.0}},
                {{0.15, 0.0}, {0.55, 0.0}, {0.85, 0.25}, {0.85, 0.75}, {0.55, 1.0}, {0.15, 1.0}}},
        {{{0.85, 0.0}, {0.15, 0.0}, {0.15, 1.0}, {0.85, 1.0}}, {{0.15, 0.5}, {0.7, 0.5}}},
        {{{0.85, 0.0}, {0.15, 0.0}, {0.15, 1.0}}, {{0.15, 0.5}, {0.7, 0.5}}},
        {arc(0.52, 0.5, 0.4, 0.5, 40, 340), {{0.9, 0.67}, {0.92, 0.55}, {0.6, 0.55}}},
        {{{0.15, 0.0}, {0.15, 1.0}}, {{0.85, 0.0}, {0.85, 1.0}}, {{0.15, 0.5}, {0.85, 0.5}}},
        {{{0.5, 0.0}, {0.5, 1.0}}, {{0.3, 0.0}, {0.7, 0.0}}, {{0.3, 1.0}, {0.7, 1.0}}},
        {{{0.75, 0.0}, {0.75, 0.75}, {0.6, 0.97}, {0.35, 0.97}, {0.2, 0.78}}, {{0.5, 0.0}, {0.95, 0.0}}},
        {{{0.15, 0.0}, {0.15, 1.0}}, {{0.85, 0.0}, {0.15, 0.55}}, {{0.35, 0.4}, {0.85, 1.0}}},
        {{{0.15, 0.0}, {0.15, 1.0}, {0.85, 1.0}}},
        {{{0.1, 1.0}, {0.15, 0.0}, {0.5, 0.65}, {0.85, 0.0}, {0.9, 1.0}}},
        {{{0.15, 1.0}, {0.15, 0.0}, {0.85, 1.0}, {0.85, 0.0}}},
        {arc(0.5, 0.5, 0.38, 0.5, 0, 360, 20)},
        {p_bowl},
        {arc(0.5, 0.5, 0.38, 0.5, 0, 360, 20), {{0.6, 0.7}, {0.9, 1.0}}},
        {p_bowl, {{0.5, 0.5}, {0.85, 1.0}}},
        {{{0.85, 0.12}, {0.6, 0.0}, {0.35, 0.0}, {0.15, 0.15}, {0.2, 0.38}, {0.8, 0.6},
                {0.85, 0.85}, {0.65, 1.0}, {0.35, 1.0}, {0.12, 0.88}}},
        {{{0.1, 0.0}, {0.9, 0.0}}, {{0.5, 0.0}, {0.5, 1.0}}},
        {{{0.15, 0.0}, {0.15, 0.75}, {0.3, 0.97}, {0.7, 0.97}, {0.85, 0.75}, {0.85, 0.0}}},
        {{{0.1, 0.0}, {0.5, 1.0}, {0.9, 0.0}}},
        {{{0.05, 0.0}, {0.27, 1.0}, {0.5, 0.35}, {0.73, 1.0}, {0.95, 0.0}}},
        {{{0.15, 0.0}, {0.85, 1.0}}, {{0.85, 0.0}, {0.15, 1.0}}},
        {{{0.1, 0.0}, {0.5, 0.5}, {0.9, 0.0}}, {{0.5, 0.5}, {0.5, 1.0}}},
        {{{0.15, 0.0}, {0.85, 0.0}, {0.15, 1.0}, {0.85, 1.0}}},
    };
    return font;
}

double segment_distance(Point p, Point a, Point b)
{
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double ex = a.x + t * dx - p.x, ey = a.y + t * dy - p.y;
    return std::sqrt(ex * ex + ey * ey);
}

std::vector<std::uint8_t> render(const Glyph &glyph, const SyntheticGlyphOptions &opt, Rng &rng)
{
    const double side = static_cast<double>(opt.side);
    const double rot = rng.uniform(-opt.max_rotation_deg, opt.max_rotation_deg) * std::numbers::pi / 180.0;
    const double shear = rng.uniform(-opt.max_shear, opt.max_shear);
    const double scale = rng.uniform(opt.min_scale, opt.max_scale) * opt.glyph_fraction * side;
    const double tx = rng.uniform(-opt.max_shift_px, opt.max_shift_px);
    const double ty = rng.uniform(-opt.max_shift_px, opt.max_shift_px);
    const double thick = rng.uniform(opt.min_thickness_px, opt.max_thickness_px);
    const double c = std::cos(rot), s = std::sin(rot);

    std::vector<std::vector<Point>> strokes;
    for (const auto &stroke : glyph) {
        std::vector<Point> px;
        for (const auto &p : stroke) {
            const double gx = p.x - 0.5 + rng.uniform(-opt.vertex_jitter, opt.vertex_jitter);
            const double gy = p.y - 0.5 + rng.uniform(-opt.vertex_jitter, opt.vertex_jitter);
            const double sx = gx + shear * gy;
            const double x = (c * sx - s * gy) * scale + side / 2 + tx;
            const double y = (s * sx + c * gy) * scale + side / 2 + ty;
            px.push_back({x, y});
        }
        strokes.push_back(std::move(px));
    }

    std::vector<std::uint8_t> img(opt.side * opt.side);
    for (std::size_t y = 0; y < opt.side; ++y) {
        for (std::size_t x = 0; x < opt.side; ++x) {
            const Point p{x + 0.5, y + 0.5};
            double d = 1e9;
            for (const auto &stroke : strokes) {
                for (std::size_t k = 0; k + 1 < stroke.size(); ++k) {
                    d = std::min(d, segment_distance(p, stroke[k], stroke[k + 1]));
                }
            }
            const double ink = std::clamp(thick / 2 + 0.5 - d, 0.0, 1.0);
            const double v = 255.0 * ink + opt.noise_sigma * rng.normal();
            img[y * opt.side + x] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
        }
    }
    return img;
}

LabeledDataset render_set(const std::vector<Glyph> &font, std::size_t count, std::uint64_t seed,
        const SyntheticGlyphOptions &opt, const std::string &name)
{
    Rng rng(seed);
    LabeledDataset ds;
    ds.input_size = opt.side * opt.side;
    ds.n_classes = font.size();
    ds.source = name;
    for (std::size_t i = 0; i < count; ++i) {
        const auto label = static_cast<std::uint16_t>(rng.below(font.size()));
        ds.add(render(font[label], opt, rng), label);
    }
    return ds;
}

} // namespace

LabeledDataset synthetic_digits(std::size_t count, std::uint64_t seed,
        const SyntheticGlyphOptions &opt)
{
    return render_set(digit_font(), count, seed, opt, "synthetic-digits");
}

LabeledDataset synthetic_letters(std::size_t count, std::uint64_t seed,
        SyntheticGlyphOptions opt)
{
    return render_set(letter_font(), count, seed, opt, "synthetic-letters");
}

} // namespace xbarsim
