#include "xbarsim/catalog.hpp"

namespace xbarsim {

std::string app_name(AppId id)
{
    switch (id) {
    case AppId::edge:
        return "edge";
    case AppId::deep:
        return "deep";
    case AppId::motion:
        return "motion";
    case AppId::objrec:
        return "objrec";
    case AppId::ocr:
        return "ocr";
    }
    return "?";
}

AppId parse_app(const std::string &name)
{
    for (const AppId id : all_apps) {
        if (app_name(id) == name) {
            return id;
        }
    }
    throw ConfigError("unknown application '" + name + "' (edge, deep, motion, objrec, ocr)");
}

const std::vector<AppNetwork> &AppCatalogEntry::networks_for(CoreType t) const
{
    if (t == CoreType::digital) {
        return digital;
    }
    if (t == CoreType::itim) {
        return memristor;
    }
    throw ConfigError("RISC runs " + name + " without a neural network");
}

namespace {

AppNetwork memristor_net(const std::vector<std::size_t> &sizes, std::size_t copies = 1,
        std::size_t offset = 0)
{
    return {make_network(sizes, Threshold{}, Threshold{}), copies, offset};
}

AppNetwork digital_net(const std::vector<std::size_t> &sizes, std::size_t copies = 1,
        std::size_t offset = 0)
{
    const Lut8 lut = make_sigmoid_lut();
    return {make_network(sizes, lut, lut), copies, offset};
}

} // namespace

AppCatalogEntry catalog_entry(AppId id, const FrameGeometry &frame, double character_rate)
{
    AppCatalogEntry e;
    e.id = id;
    e.name = app_name(id);
    const double pixels = static_cast<double>(frame.width) * static_cast<double>(frame.height);
    switch (id) {
    case AppId::edge:
        e.memristor = {memristor_net({9, 20, 15}), memristor_net({24, 20, 15}),
                memristor_net({15, 10, 4}), memristor_net({15, 10, 4})};
        e.digital = {digital_net({9, 20, 1})};
        e.pattern_rate = pixels * frame.fps;
        e.input_bits_per_pattern = 8.0;
        e.risc = OpWorkload{edge_ops_per_pixel, edge_seconds_per_op};
        e.rate_basis = "one pattern per output pixel";
        break;
    case AppId::deep:
        e.memristor = {memristor_net({784, 200, 100, 10})};
        e.digital = {digital_net({784, 200, 100, 10})};
        e.pattern_rate = character_rate;
        e.input_bits_per_pattern = 784.0 * 8.0;
        break;
    case AppId::motion:
        e.memristor = {memristor_net({2, 1}, 64, 0), memristor_net({64, 10}, 1, 1),
                memristor_net({20, 10}, 1, 2)};
        e.digital = {digital_net({2, 1}, 64, 0), digital_net({64, 1}, 1, 1),
                digital_net({2, 1}, 1, 2)};
        e.pattern_rate = static_cast<double>(frame.width / 8) * static_cast<double>(frame.height / 8)
                * frame.fps;
        e.input_bits_per_pattern = 64.0 * 8.0;
        e.risc = OpWorkload{motion_ops_per_grid, motion_seconds_per_op};
        e.rate_basis = "one pattern per 8x8 grid";
        break;
    case AppId::objrec:
        e.memristor = {memristor_net({3072, 100, 10})};
        e.digital = {digital_net({3072, 100, 10})};
        e.pattern_rate = character_rate;
        e.input_bits_per_pattern = 3072.0 * 8.0;
        break;
    case AppId::ocr:
        e.memristor = {memristor_net({2500, 60, 26})};
        e.digital = {digital_net({2500, 60, 26})};
        e.pattern_rate = character_rate;
        e.input_bits_per_pattern = 2500.0 * 8.0;
        break;
    }
    if (id == AppId::deep || id == AppId::objrec || id == AppId::ocr) {
        e.risc = SynapseWorkload{static_cast<double>(e.digital.front().net.synapse_count())};
        e.rate_basis = "one pattern per image";
    }
    return e;
}

PublishedRow published_row(AppId app, CoreType arch)
{
    const int a = static_cast<int>(arch);
    switch (app) {
    case AppId::deep: {
        static const PublishedRow rows[] = {{902, 472.65, 78474.00, 1}, {9, 1.88, 82.40, 952},
                {31, 0.25, 0.42, 187064}};
        return rows[a];
    }
    case AppId::edge: {
        static const PublishedRow rows[] = {{240, 125.76, 20880.00, 1}, {18, 3.75, 433.16, 48},
                {16, 0.13, 1.41, 14813}};
        return rows[a];
    }
    case AppId::motion: {
        static const PublishedRow rows[] = {{7, 3.67, 609.00, 1}, {2, 0.42, 42.57, 14},
                {2, 0.02, 0.11, 5641}};
        return rows[a];
    }
    case AppId::objrec: {
        static const PublishedRow rows[] = {{1358, 711.59, 118146.00, 1}, {17, 3.54, 148.55, 795},
                {68, 0.56, 0.94, 125430}};
        return rows[a];
    }
    case AppId::ocr: {
        static const PublishedRow rows[] = {{825, 432.30, 71775.00, 1}, {13, 2.71, 119.08, 603},
                {31, 0.25, 0.49, 147012}};
        return rows[a];
    }
    }
    throw ConfigError("unknown application");
}

std::string published_table_label(AppId app)
{
    switch (app) {
    case AppId::deep:
        return "Table II";
    case AppId::edge:
        return "Table III";
    case AppId::motion:
        return "Table IV";
    case AppId::objrec:
        return "Table V";
    case AppId::ocr:
        return "Table VI";
    }
    return "?";
}

} // namespace xbarsim
