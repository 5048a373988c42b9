// Copyright 2026 The Duet Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <string_view>

#include "duet/kernels.h"

namespace duet::kernels {
namespace {

Isa Detect() {
  const char* env = std::getenv("DUET_SIMD");
  if (env && std::string_view(env) == "scalar") return Isa::kScalar;
  if (IsaAvailable(Isa::kAvx2)) return Isa::kAvx2;
  if (IsaAvailable(Isa::kNeon)) return Isa::kNeon;
  return Isa::kScalar;
}

}  // namespace

std::string_view ToString(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
    case Isa::kNeon: return "neon";
  }
  return "?";
}

bool IsaAvailable(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return true;
    case Isa::kAvx2:
#if defined(DUET_HAVE_AVX2_KERNELS)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::kNeon:
#if defined(DUET_HAVE_NEON_KERNELS)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa ActiveIsa() {
  static const Isa isa = Detect();
  return isa;
}

double DotF32(const float* a, const float* b, std::size_t n) {
  switch (ActiveIsa()) {
#if defined(DUET_HAVE_AVX2_KERNELS)
    case Isa::kAvx2: return avx2::DotF32(a, b, n);
#endif
#if defined(DUET_HAVE_NEON_KERNELS)
    case Isa::kNeon: return neon::DotF32(a, b, n);
#endif
    default: return scalar::DotF32(a, b, n);
  }
}

void ScaleF64(double* x, double alpha, std::size_t n) {
  switch (ActiveIsa()) {
#if defined(DUET_HAVE_AVX2_KERNELS)
    case Isa::kAvx2: return avx2::ScaleF64(x, alpha, n);
#endif
#if defined(DUET_HAVE_NEON_KERNELS)
    case Isa::kNeon: return neon::ScaleF64(x, alpha, n);
#endif
    default: return scalar::ScaleF64(x, alpha, n);
  }
}

void AxpyF64(double* y, double alpha, const double* x, std::size_t n) {
  switch (ActiveIsa()) {
#if defined(DUET_HAVE_AVX2_KERNELS)
    case Isa::kAvx2: return avx2::AxpyF64(y, alpha, x, n);
#endif
#if defined(DUET_HAVE_NEON_KERNELS)
    case Isa::kNeon: return neon::AxpyF64(y, alpha, x, n);
#endif
    default: return scalar::AxpyF64(y, alpha, x, n);
  }
}

}  // namespace duet::kernels
