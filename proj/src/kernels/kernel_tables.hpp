#pragma once

#include "rhostat/kernels.hpp"

namespace rhostat::kernels {

const KernelTable& scalar_table() noexcept;

#if defined(RHOSTAT_HAVE_AVX2_TU)
const KernelTable& avx2_table() noexcept;
#endif

}  // namespace rhostat::kernels
