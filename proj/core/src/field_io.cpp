#include "relhartree/field_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

namespace relhartree {

namespace {
constexpr char kMagic[8] = {'R', 'H', 'F', 'L', 'D', '0', '1', '\n'};
}

void save_field(const std::string& path, const Field& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("save_field: cannot open '" + path + "'");
    out.write(kMagic, sizeof(kMagic));
    const std::int64_t n = f.grid().n();
    const double extent = f.grid().extent();
    const std::int32_t space = f.space() == Space::physical ? 0 : 1;
    out.write(reinterpret_cast<const char*>(&n), sizeof(n));
    out.write(reinterpret_cast<const char*>(&extent), sizeof(extent));
    out.write(reinterpret_cast<const char*>(&space), sizeof(space));
    out.write(reinterpret_cast<const char*>(f.values().data()),
              std::streamsize(f.size() * sizeof(cplx)));
    if (!out) throw ConfigError("save_field: write failed for '" + path + "'");
}

Field load_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("load_field: cannot open '" + path + "'");
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw ConfigError("load_field: '" + path + "' is not a field snapshot");
    std::int64_t n = 0;
    double extent = 0.0;
    std::int32_t space = 0;
    in.read(reinterpret_cast<char*>(&n), sizeof(n));
    in.read(reinterpret_cast<char*>(&extent), sizeof(extent));
    in.read(reinterpret_cast<char*>(&space), sizeof(space));
    if (!in) throw ConfigError("load_field: truncated header in '" + path + "'");
    auto grid = make_grid(int(n), extent);
    Field f(grid, space == 0 ? Space::physical : Space::spectral);
    in.read(reinterpret_cast<char*>(f.values().data()), std::streamsize(f.size() * sizeof(cplx)));
    if (!in) throw ConfigError("load_field: truncated data in '" + path + "'");
    return f;
}

} // namespace relhartree
