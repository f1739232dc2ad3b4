#include "wqc/sampling.hpp"

#include <random>

namespace wqc {

namespace {

constexpr int kHaltonPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

double halton(int index, int base) {
  double f = 1.0;
  double r = 0.0;
  int i = index;
  while (i > 0) {
    f /= base;
    r += f * (i % base);
    i /= base;
  }
  return r;
}

}  // namespace

std::vector<Vector> grid_1d(double lo, double hi, int n) {
  if (n < 2) throw InvalidInput("grid_1d needs at least 2 points");
  if (!(lo < hi)) throw InvalidInput("grid_1d needs lo < hi");
  std::vector<Vector> points;
  points.reserve(n);
  for (int i = 0; i < n; ++i) {
    Vector x(1);
    x[0] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    points.push_back(x);
  }
  return points;
}

std::vector<Vector> halton_box(double lo, double hi, int dim, int n) {
  if (dim < 1 || dim > static_cast<int>(std::size(kHaltonPrimes)))
    throw InvalidInput("halton_box supports 1..12 dimensions");
  if (n < 1) throw InvalidInput("halton_box needs at least 1 point");
  std::vector<Vector> points;
  points.reserve(n);
  for (int i = 0; i < n; ++i) {
    Vector x(dim);
    for (int d = 0; d < dim; ++d)
      x[d] = lo + (hi - lo) * halton(i + 1, kHaltonPrimes[d]);
    points.push_back(x);
  }
  return points;
}

std::vector<Vector> box_samples(double lo, double hi, int dim, int n) {
  return dim == 1 ? grid_1d(lo, hi, n) : halton_box(lo, hi, dim, n);
}

std::vector<Vector> seeded_box_samples(double lo, double hi, int dim, int n,
                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<Vector> points;
  points.reserve(n);
  for (int i = 0; i < n; ++i) {
    Vector x(dim);
    for (int d = 0; d < dim; ++d) x[d] = dist(rng);
    points.push_back(x);
  }
  return points;
}

}  // namespace wqc
