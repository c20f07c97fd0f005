#include <atomic>
#include <cstdlib>
#include <string>
#include <string_view>

#include "kernel_tables.hpp"
#include "rhostat/error.hpp"

namespace rhostat::kernels {

const char* to_string(Predicate p) noexcept {
  switch (p) {
    case Predicate::Downward: return "downward";
    case Predicate::Absolute: return "absolute";
    case Predicate::Deviation: return "deviation";
    case Predicate::Reversed: return "reversed";
  }
  return "unknown";
}

const char* to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(RHOSTAT_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Isa isa) {
  if (!isa_available(isa))
    fail(ErrorCode::InvalidConfig, std::string("kernel ISA '") + to_string(isa) +
                                       "' is not available on this machine");
#if defined(RHOSTAT_HAVE_AVX2_TU)
  if (isa == Isa::Avx2) return avx2_table();
#endif
  return scalar_table();
}

namespace {

const KernelTable* detect() {
  if (const char* env = std::getenv("RHOSTAT_KERNEL")) {
    const std::string_view wanted(env);
    if (wanted == "scalar") return &scalar_table();
    if (wanted == "avx2" && isa_available(Isa::Avx2)) return &table(Isa::Avx2);
  }
  if (isa_available(Isa::Avx2)) return &table(Isa::Avx2);
  return &scalar_table();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> ptr{detect()};
  return ptr;
}

void check_difference_range(std::span<const double> values, std::size_t first, std::size_t last,
                            const char* what) {
  if (first > last || (last > first && last >= values.size())) {
    fail(ErrorCode::GridOutOfRange,
         std::string(what) + ": difference range [" + std::to_string(first) + ", " +
             std::to_string(last) + ") needs " + std::to_string(last + 1) + " values, have " +
             std::to_string(values.size()));
  }
}

}  // namespace

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

void force_isa(std::optional<Isa> isa) {
  current().store(isa ? &table(*isa) : detect(), std::memory_order_release);
}

std::uint64_t count_hits(Predicate predicate, std::span<const double> values, std::size_t first,
                         std::size_t last, double eps, double level) {
  if (first == last) return 0;
  if (reads_successor(predicate)) {
    check_difference_range(values, first, last, "count_hits");
  } else if (first > last || last > values.size()) {
    fail(ErrorCode::GridOutOfRange, "count_hits: range [" + std::to_string(first) + ", " +
                                        std::to_string(last) + ") exceeds " +
                                        std::to_string(values.size()) + " values");
  }
  return active().count_hits(predicate, values.data(), first, last, eps, level);
}

double max_delta(std::span<const double> values, std::size_t first, std::size_t last) {
  check_difference_range(values, first, last, "max_delta");
  return active().max_delta(values.data(), first, last);
}

double max_abs_delta(std::span<const double> values, std::size_t first, std::size_t last) {
  check_difference_range(values, first, last, "max_abs_delta");
  return active().max_abs_delta(values.data(), first, last);
}

Extent extent(std::span<const double> values) {
  Extent e{};
  active().extent(values.data(), values.size(), &e.min, &e.max);
  return e;
}

}  // namespace rhostat::kernels
