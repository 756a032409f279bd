#ifndef KINET_DVM_HPP
#define KINET_DVM_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "kinet/velocity_grid.hpp"

namespace kinet {

// Scaled integer velocity lattice for the discrete-velocity method:
// node(z) = origin + h*z, z in {0,...,m-1}^dim, row-major flattening.
// Collision admissibility only depends on the integer coordinates, so the
// origin is free; integer_box gives lattices like {0,...,4}^2 directly and
// from_grid adapts a VelocityGrid (whose nodes always sit on such a lattice).
struct DvmLattice {
    int dim = 0;
    int m = 0;       // points per axis
    double h = 1.0;  // spacing
    std::array<double, 3> origin{0.0, 0.0, 0.0};

    static DvmLattice integer_box(int dim, int m);
    static DvmLattice from_grid(const VelocityGrid& g);

    std::size_t node_count() const;
    int axis_index(std::size_t j, int axis) const;
    double node_component(std::size_t j, int axis) const {
        return origin[axis] + h * axis_index(j, axis);
    }
    bool operator==(const DvmLattice& o) const {
        return dim == o.dim && m == o.m && h == o.h && origin == o.origin;
    }
};

// One stored collision: unordered input pair {i,j} (i<j) with unordered
// output pair {k,l} (k<l) on the same momentum/energy circle.  weight is the
// ordered-pair weight a_ij^kl summed over the (k,l)/(l,k) symmetry, i.e.
// 2/|C_ij|; rate = S * |v_i - v_j| * weight.  The reverse collision
// {k,l} -> {i,j} is stored as its own record, so the evaluator only updates
// Q_i and Q_j per record.
struct CollisionQuadruple {
    std::int32_t i, j, k, l;
    double weight;
    double rate;
};

struct CollisionTable {
    DvmLattice lattice;
    double cross_section = 1.0;
    std::vector<CollisionQuadruple> quadruples;  // sorted by (i, j, k, l)
    std::size_t nontrivial_count = 0;            // records with {k,l} != {i,j}
    double max_rate = 0.0;
};

// Exhaustive admissible-collision search: for each input pair the outputs are
// the lattice points on the circle (sphere) with center (v_i+v_j)/2 and
// radius |v_i-v_j|/2, i.e. both conservation laws hold in exact integer
// arithmetic.  Weights are uniform over C_ij.  Pairs with v_i = v_j carry
// zero transition rate and are omitted.  Outputs falling off the lattice are
// discarded (finite-lattice truncation).
CollisionTable enumerate_collisions(const DvmLattice& lattice, double cross_section = 1.0);
CollisionTable enumerate_collisions(const VelocityGrid& lattice, double cross_section = 1.0);

// Q_i(f,f) = sum over admissible quadruples of A_ij^kl (f_k f_l - f_i f_j).
// Cost O(|quadruples|).  With n_threads > 1 the quadruple list is processed
// in a fixed number of chunks whose partial results merge in chunk order, so
// the output does not depend on the thread count.
std::vector<double> dvm_collision(const std::vector<double>& f, const CollisionTable& table,
                                  int n_threads = 1);
Distribution dvm_collision(const Distribution& f, const CollisionTable& table, int n_threads = 1);

// Row sum of the stored weights per input pair (i<j); 1 for every pair with
// at least one admissible output.
std::vector<double> dvm_row_weight_sums(const CollisionTable& table);

// Sorted text format for regression diffs: "i j k l rate" per line.
void write_collision_table(const CollisionTable& table, const std::string& path);

} // namespace kinet

#endif
