#pragma once

#include <array>
#include <string>
#include <vector>

#include "xbarsim/cores.hpp"
#include "xbarsim/mapper.hpp"

namespace xbarsim {

enum class AppId { edge, deep, motion, objrec, ocr };
inline constexpr std::array<AppId, 5> all_apps{AppId::edge, AppId::deep, AppId::motion,
        AppId::objrec, AppId::ocr};
inline constexpr std::array<CoreType, 3> all_archs{CoreType::risc, CoreType::digital, CoreType::itim};

std::string app_name(AppId id);
AppId parse_app(const std::string &name);

struct FrameGeometry {
    std::size_t width = 1280;
    std::size_t height = 1080;
    double fps = 60.0;
};

// Per-op RISC times for the two kernels run in algorithmic form, back-derived
// from the published RISC core counts (240 for edge, 7 for motion).
inline constexpr double edge_ops_per_pixel = 20.0;
inline constexpr double edge_seconds_per_op = 240.0 / (1280.0 * 1080.0 * 60.0 * edge_ops_per_pixel);
inline constexpr double motion_ops_per_grid = 192.0;
inline constexpr double motion_seconds_per_op = 7.0 / (160.0 * 135.0 * 60.0 * motion_ops_per_grid);

struct AppCatalogEntry {
    AppId id = AppId::deep;
    std::string name;
    std::vector<AppNetwork> digital;
    std::vector<AppNetwork> memristor;
    double pattern_rate = 0.0;          // patterns per second
    double input_bits_per_pattern = 0.0; // delivered over the TSVs
    RiscWorkload risc;
    std::string rate_basis;

    const std::vector<AppNetwork> &networks_for(CoreType t) const;
};

AppCatalogEntry catalog_entry(AppId id, const FrameGeometry &frame = {},
        double character_rate = 1e5);

// Published results: cores, area (mm2), power (mW), efficiency over RISC.
struct PublishedRow {
    double cores = 0.0;
    double area_mm2 = 0.0;
    double power_mw = 0.0;
    double efficiency = 0.0;
};
PublishedRow published_row(AppId app, CoreType arch);
std::string published_table_label(AppId app);

} // namespace xbarsim
