#include "kinet/dvm.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <thread>

namespace kinet {

DvmLattice DvmLattice::integer_box(int dim, int m) {
    if (dim < 1 || dim > 3) throw invalid_parameter_error("DvmLattice: dim must be 1..3");
    if (m < 2) throw invalid_parameter_error("DvmLattice: need at least 2 points per axis");
    DvmLattice lat;
    lat.dim = dim;
    lat.m = m;
    lat.h = 1.0;
    return lat;
}

DvmLattice DvmLattice::from_grid(const VelocityGrid& g) {
    DvmLattice lat;
    lat.dim = g.dim();
    lat.m = g.n_per_dim();
    lat.h = g.spacing();
    for (int a = 0; a < g.dim(); ++a) lat.origin[a] = -g.half_width();
    // grid nodes are -L + j*h by construction; verify integer scalability anyway
    for (int a = 0; a < g.dim(); ++a) {
        const double r = lat.origin[a] / lat.h;
        if (std::abs(r - std::round(r)) > 1e-9)
            throw non_lattice_grid_error("DvmLattice: grid nodes are not integer-scalable");
    }
    return lat;
}

std::size_t DvmLattice::node_count() const {
    std::size_t c = 1;
    for (int a = 0; a < dim; ++a) c *= static_cast<std::size_t>(m);
    return c;
}

int DvmLattice::axis_index(std::size_t j, int axis) const {
    std::size_t stride = 1;
    for (int a = dim - 1; a > axis; --a) stride *= static_cast<std::size_t>(m);
    return static_cast<int>((j / stride) % static_cast<std::size_t>(m));
}

namespace {

int idot(const std::array<int, 3>& a, const std::array<int, 3>& b, int dim) {
    int s = 0;
    for (int x = 0; x < dim; ++x) s += a[x] * b[x];
    return s;
}

} // namespace

CollisionTable enumerate_collisions(const DvmLattice& lattice, double cross_section) {
    const int d = lattice.dim;
    const int m = lattice.m;
    const std::size_t nn = lattice.node_count();

    std::vector<std::array<int, 3>> z(nn, {0, 0, 0});
    std::vector<int> z2(nn);
    for (std::size_t j = 0; j < nn; ++j) {
        for (int a = 0; a < d; ++a) z[j][a] = lattice.axis_index(j, a);
        z2[j] = idot(z[j], z[j], d);
    }

    CollisionTable table;
    table.lattice = lattice;
    table.cross_section = cross_section;

    std::vector<std::pair<std::size_t, std::size_t>> outputs;
    for (std::size_t i = 0; i < nn; ++i) {
        for (std::size_t j = i + 1; j < nn; ++j) {
            outputs.clear();
            std::array<int, 3> s{0, 0, 0};
            for (int a = 0; a < d; ++a) s[a] = z[i][a] + z[j][a];
            const int e = z2[i] + z2[j];
            for (std::size_t k = 0; k < nn; ++k) {
                std::array<int, 3> zl{0, 0, 0};
                bool ok = true;
                std::size_t l = 0;
                for (int a = 0; a < d; ++a) {
                    zl[a] = s[a] - z[k][a];
                    if (zl[a] < 0 || zl[a] >= m) { ok = false; break; }
                    l = l * static_cast<std::size_t>(m) + static_cast<std::size_t>(zl[a]);
                }
                if (!ok || k >= l) continue;  // unordered output, k<l (k==l impossible for i<j)
                if (z2[k] + z2[l] != e) continue;
                outputs.emplace_back(k, l);
            }
            if (outputs.empty()) continue;

            const double weight = 2.0 / (2.0 * static_cast<double>(outputs.size()));
            double dv2 = 0.0;
            for (int a = 0; a < d; ++a) {
                const double dva = lattice.h * (z[i][a] - z[j][a]);
                dv2 += dva * dva;
            }
            const double rate = cross_section * std::sqrt(dv2) * weight;
            for (auto [k, l] : outputs) {
                table.quadruples.push_back({static_cast<std::int32_t>(i), static_cast<std::int32_t>(j),
                                            static_cast<std::int32_t>(k), static_cast<std::int32_t>(l),
                                            weight, rate});
                if (!(k == i && l == j)) ++table.nontrivial_count;
                table.max_rate = std::max(table.max_rate, rate);
            }
        }
    }
    return table;
}

CollisionTable enumerate_collisions(const VelocityGrid& lattice, double cross_section) {
    return enumerate_collisions(DvmLattice::from_grid(lattice), cross_section);
}

namespace {

void accumulate_range(const std::vector<double>& f, const CollisionTable& table, std::size_t lo,
                      std::size_t hi, std::vector<double>& q) {
    const double* fv = f.data();
    double* qv = q.data();
    for (std::size_t r = lo; r < hi; ++r) {
        const CollisionQuadruple& c = table.quadruples[r];
        const double t = c.rate * (fv[c.k] * fv[c.l] - fv[c.i] * fv[c.j]);
        qv[c.i] += t;
        qv[c.j] += t;
    }
}

} // namespace

std::vector<double> dvm_collision(const std::vector<double>& f, const CollisionTable& table,
                                  int n_threads) {
    if (f.size() != table.lattice.node_count())
        throw grid_mismatch_error("dvm_collision: value count differs from lattice size");
    std::vector<double> q(f.size(), 0.0);
    const std::size_t nq = table.quadruples.size();
    if (n_threads <= 1 || nq < 1024) {
        accumulate_range(f, table, 0, nq, q);
        return q;
    }
    // fixed chunk layout: partials merge in chunk order regardless of which
    // thread computed them
    constexpr std::size_t n_chunks = 64;
    std::vector<std::vector<double>> partial(n_chunks, std::vector<double>(f.size(), 0.0));
    std::vector<std::thread> workers;
    std::atomic<std::size_t> next{0};
    const std::size_t stride = (nq + n_chunks - 1) / n_chunks;
    for (int t = 0; t < n_threads; ++t) {
        workers.emplace_back([&] {
            for (std::size_t chunk = next.fetch_add(1); chunk < n_chunks;
                 chunk = next.fetch_add(1)) {
                const std::size_t lo = chunk * stride;
                const std::size_t hi = std::min(nq, lo + stride);
                if (lo < hi) accumulate_range(f, table, lo, hi, partial[chunk]);
            }
        });
    }
    for (auto& w : workers) w.join();
    for (std::size_t chunk = 0; chunk < n_chunks; ++chunk)
        for (std::size_t i = 0; i < q.size(); ++i) q[i] += partial[chunk][i];
    return q;
}

Distribution dvm_collision(const Distribution& f, const CollisionTable& table, int n_threads) {
    if (!(DvmLattice::from_grid(f.grid) == table.lattice))
        throw grid_mismatch_error("dvm_collision: distribution grid differs from table lattice");
    Distribution q(f.grid, 0.0);
    q.values = dvm_collision(f.values, table, n_threads);
    return q;
}

std::vector<double> dvm_row_weight_sums(const CollisionTable& table) {
    std::map<std::pair<std::int32_t, std::int32_t>, double> rows;
    for (const CollisionQuadruple& c : table.quadruples) rows[{c.i, c.j}] += c.weight;
    std::vector<double> sums;
    sums.reserve(rows.size());
    for (const auto& [key, s] : rows) sums.push_back(s);
    return sums;
}

void write_collision_table(const CollisionTable& table, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw io_error("cannot open " + path + " for writing");
    char buf[128];
    for (const CollisionQuadruple& c : table.quadruples) {
        std::snprintf(buf, sizeof buf, "%d %d %d %d %.17g\n", c.i, c.j, c.k, c.l, c.rate);
        os << buf;
    }
    if (!os) throw io_error("write failed: " + path);
}

} // namespace kinet
