#include <cmath>
#include <limits>

#include "kernel_tables.hpp"

namespace rhostat::kernels {
namespace {

std::uint64_t count_hits_scalar(Predicate predicate, const double* v, std::size_t first,
                                std::size_t last, double eps, double level) {
  std::uint64_t hits = 0;
  switch (predicate) {
    case Predicate::Downward:
      for (std::size_t i = first; i < last; ++i) hits += (v[i + 1] - v[i]) >= eps;
      break;
    case Predicate::Absolute:
      for (std::size_t i = first; i < last; ++i) hits += std::fabs(v[i + 1] - v[i]) >= eps;
      break;
    case Predicate::Deviation:
      for (std::size_t i = first; i < last; ++i) hits += std::fabs(v[i] - level) >= eps;
      break;
    case Predicate::Reversed: {
      const double neg = -eps;
      for (std::size_t i = first; i < last; ++i) hits += (v[i + 1] - v[i]) <= neg;
      break;
    }
  }
  return hits;
}

double max_delta_scalar(const double* v, std::size_t first, std::size_t last) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = first; i < last; ++i) {
    const double d = v[i + 1] - v[i];
    if (d > best) best = d;
  }
  return best;
}

double max_abs_delta_scalar(const double* v, std::size_t first, std::size_t last) {
  double best = 0.0;
  for (std::size_t i = first; i < last; ++i) {
    const double d = std::fabs(v[i + 1] - v[i]);
    if (d > best) best = d;
  }
  return best;
}

void extent_scalar(const double* v, std::size_t n, double* lo, double* hi) {
  double mn = std::numeric_limits<double>::infinity();
  double mx = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (v[i] < mn) mn = v[i];
    if (v[i] > mx) mx = v[i];
  }
  *lo = mn;
  *hi = mx;
}

}  // namespace

const KernelTable& scalar_table() noexcept {
  static constexpr KernelTable table{Isa::Scalar, count_hits_scalar, max_delta_scalar,
                                     max_abs_delta_scalar, extent_scalar};
  return table;
}

}  // namespace rhostat::kernels
