#pragma once

#include <cstdint>
#include <vector>

#include "wqc/types.hpp"

namespace wqc {

/// n equally spaced points covering [lo, hi] (endpoints included, n >= 2).
std::vector<Vector> grid_1d(double lo, double hi, int n);

/// First n points of the Halton sequence scaled to the box [lo, hi]^dim.
/// Deterministic low-discrepancy filling for dim > 1.
std::vector<Vector> halton_box(double lo, double hi, int dim, int n);

/// Deterministic box sampler: uniform grid in 1D, Halton otherwise.
std::vector<Vector> box_samples(double lo, double hi, int dim, int n);

/// n points from a seeded uniform draw over the box (std::mt19937_64).
std::vector<Vector> seeded_box_samples(double lo, double hi, int dim, int n,
                                       std::uint64_t seed);

}  // namespace wqc
