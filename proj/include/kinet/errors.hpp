#ifndef KINET_ERRORS_HPP
#define KINET_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace kinet {

// All library errors derive from kinet::error so callers can catch one type.
struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

struct invalid_parameter_error : error {
    explicit invalid_parameter_error(const std::string& msg) : error(msg) {}
};

struct degenerate_density_error : error {
    explicit degenerate_density_error(const std::string& msg) : error(msg) {}
};

struct invalid_moments_error : error {
    explicit invalid_moments_error(const std::string& msg) : error(msg) {}
};

struct negative_value_error : error {
    explicit negative_value_error(const std::string& msg) : error(msg) {}
};

struct grid_mismatch_error : error {
    explicit grid_mismatch_error(const std::string& msg) : error(msg) {}
};

struct non_lattice_grid_error : error {
    explicit non_lattice_grid_error(const std::string& msg) : error(msg) {}
};

struct unsupported_dimension_error : error {
    explicit unsupported_dimension_error(const std::string& msg) : error(msg) {}
};

struct rank_exceeds_table_error : error {
    explicit rank_exceeds_table_error(const std::string& msg) : error(msg) {}
};

struct resource_guard_error : error {
    explicit resource_guard_error(const std::string& msg) : error(msg) {}
};

struct cfl_violation_error : error {
    explicit cfl_violation_error(const std::string& msg) : error(msg) {}
};

struct positivity_loss_error : error {
    explicit positivity_loss_error(const std::string& msg) : error(msg) {}
};

struct config_error : error {
    explicit config_error(const std::string& msg) : error(msg) {}
};

struct io_error : error {
    explicit io_error(const std::string& msg) : error(msg) {}
};

} // namespace kinet

#endif
