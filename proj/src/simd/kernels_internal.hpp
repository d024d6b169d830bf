#pragma once

#include "clothgrasp/simd.hpp"

namespace clothgrasp::simd {

const Kernels& ScalarKernels();
#if defined(CLOTHGRASP_HAVE_AVX2)
const Kernels& Avx2Kernels();
#endif
#if defined(CLOTHGRASP_HAVE_NEON)
const Kernels& NeonKernels();
#endif

}  // namespace clothgrasp::simd
