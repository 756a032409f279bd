#ifndef KINET_DISTRIBUTION_IO_HPP
#define KINET_DISTRIBUTION_IO_HPP

#include <iosfwd>
#include <string>

#include "kinet/velocity_grid.hpp"

namespace kinet {

// Flat binary layout, little-endian throughout (x86-64 native; asserted at
// build time):
//   magic   "KDF1"            4 bytes
//   dim     int32
//   n       int32
//   L       float64 (half_width)
//   R       float64 (trunc_radius, mapped units)
//   values  n^dim float64, row-major (axis 0 slowest)
void write_distribution_binary(const Distribution& f, const std::string& path);
Distribution read_distribution_binary(const std::string& path);

// CSV: one header line "dim,n_per_dim,half_width,trunc_radius", one line of
// those values, then one value per line in row-major order (%.17g).
void write_distribution_csv(const Distribution& f, const std::string& path);
Distribution read_distribution_csv(const std::string& path);

} // namespace kinet

#endif
