#include "kinet/distribution_io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

static_assert(std::endian::native == std::endian::little,
              "distribution binary format is little-endian");

namespace kinet {

namespace {
constexpr char kMagic[4] = {'K', 'D', 'F', '1'};

template <class T>
void put(std::ofstream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw io_error("distribution file truncated");
    return v;
}
} // namespace

void write_distribution_binary(const Distribution& f, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw io_error("cannot open " + path + " for writing");
    os.write(kMagic, 4);
    put(os, static_cast<std::int32_t>(f.grid.dim()));
    put(os, static_cast<std::int32_t>(f.grid.n_per_dim()));
    put(os, f.grid.half_width());
    put(os, f.grid.trunc_radius());
    os.write(reinterpret_cast<const char*>(f.values.data()),
             static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    if (!os) throw io_error("write failed: " + path);
}

Distribution read_distribution_binary(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw io_error("cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::string(magic, 4) != std::string(kMagic, 4))
        throw io_error(path + ": bad magic, not a distribution file");
    const int dim = get<std::int32_t>(is);
    const int n = get<std::int32_t>(is);
    const double L = get<double>(is);
    const double R = get<double>(is);
    Distribution f(VelocityGrid(dim, n, L, R));
    is.read(reinterpret_cast<char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    if (!is) throw io_error(path + ": truncated values");
    return f;
}

void write_distribution_csv(const Distribution& f, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw io_error("cannot open " + path + " for writing");
    os << "dim,n_per_dim,half_width,trunc_radius\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g\n", f.grid.dim(), f.grid.n_per_dim(),
                  f.grid.half_width(), f.grid.trunc_radius());
    os << buf;
    for (double v : f.values) {
        std::snprintf(buf, sizeof buf, "%.17g\n", v);
        os << buf;
    }
    if (!os) throw io_error("write failed: " + path);
}

Distribution read_distribution_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw io_error("cannot open " + path);
    std::string line;
    if (!std::getline(is, line)) throw io_error(path + ": empty file");
    if (!std::getline(is, line)) throw io_error(path + ": missing header values");
    std::istringstream hs(line);
    int dim, n;
    double L, R;
    char c;
    if (!(hs >> dim >> c >> n >> c >> L >> c >> R))
        throw io_error(path + ": malformed header line");
    Distribution f(VelocityGrid(dim, n, L, R));
    for (std::size_t j = 0; j < f.size(); ++j) {
        if (!std::getline(is, line)) throw io_error(path + ": truncated values");
        f.values[j] = std::stod(line);
    }
    return f;
}

} // namespace kinet
