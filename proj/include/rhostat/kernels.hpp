#pragma once

// Counting and extremum kernels behind every density and tail check.
//
// Each kernel exists as a scalar reference and (on x86-64) an AVX2 variant.
// The active variant is chosen once at runtime from CPUID; both produce
// identical results on finite input, which the kernel tests enforce. Set
// RHOSTAT_KERNEL=scalar in the environment, or call force_isa(), to pin the
// reference path.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

namespace rhostat::kernels {

/// Index predicates over a value array v (0-based, v[i] holds alpha_{i+1}).
enum class Predicate {
  Downward,   // v[i+1] - v[i] >= eps
  Absolute,   // |v[i+1] - v[i]| >= eps
  Deviation,  // |v[i] - level| >= eps
  Reversed,   // v[i+1] - v[i] <= -eps
};

const char* to_string(Predicate p) noexcept;

constexpr bool reads_successor(Predicate p) noexcept { return p != Predicate::Deviation; }

enum class Isa { Scalar, Avx2 };

const char* to_string(Isa isa) noexcept;

struct KernelTable {
  Isa isa;
  /// Hits for i in [first, last). Caller guarantees the range is readable.
  std::uint64_t (*count_hits)(Predicate predicate, const double* v, std::size_t first,
                              std::size_t last, double eps, double level);
  /// max over i in [first, last) of v[i+1] - v[i]; -inf on an empty range.
  double (*max_delta)(const double* v, std::size_t first, std::size_t last);
  /// max over i in [first, last) of |v[i+1] - v[i]|; 0 on an empty range.
  double (*max_abs_delta)(const double* v, std::size_t first, std::size_t last);
  /// min and max of v[0..n).
  void (*extent)(const double* v, std::size_t n, double* lo, double* hi);
};

bool isa_available(Isa isa) noexcept;

/// Kernel table for a specific ISA; throws invalid-config if unavailable.
const KernelTable& table(Isa isa);

/// Kernel table chosen for this process.
const KernelTable& active();

/// Pin (or with nullopt, unpin) the ISA used by active().
void force_isa(std::optional<Isa> isa);

// Bounds-checked entry points on the active table.

std::uint64_t count_hits(Predicate predicate, std::span<const double> values, std::size_t first,
                         std::size_t last, double eps, double level = 0.0);
double max_delta(std::span<const double> values, std::size_t first, std::size_t last);
double max_abs_delta(std::span<const double> values, std::size_t first, std::size_t last);

struct Extent {
  double min;
  double max;
};
Extent extent(std::span<const double> values);

}  // namespace rhostat::kernels
