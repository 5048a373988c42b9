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

#ifndef DUET_KERNELS_H_
#define DUET_KERNELS_H_

#include <cstddef>
#include <string_view>

namespace duet::kernels {

enum class Isa { kScalar, kAvx2, kNeon };
std::string_view ToString(Isa isa);

// Float inputs, double accumulation.
double DotF32(const float* a, const float* b, std::size_t n);
// x *= alpha
void ScaleF64(double* x, double alpha, std::size_t n);
// y += alpha * x
void AxpyF64(double* y, double alpha, const double* x, std::size_t n);

// The variant the dispatchers call. Chosen once from CPU features; the
// environment variable DUET_SIMD=scalar forces the reference path.
Isa ActiveIsa();
bool IsaAvailable(Isa isa);

namespace scalar {
double DotF32(const float* a, const float* b, std::size_t n);
void ScaleF64(double* x, double alpha, std::size_t n);
void AxpyF64(double* y, double alpha, const double* x, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define DUET_HAVE_AVX2_KERNELS 1
namespace avx2 {
double DotF32(const float* a, const float* b, std::size_t n);
void ScaleF64(double* x, double alpha, std::size_t n);
void AxpyF64(double* y, double alpha, const double* x, std::size_t n);
}  // namespace avx2
#endif

#if defined(__aarch64__)
#define DUET_HAVE_NEON_KERNELS 1
namespace neon {
double DotF32(const float* a, const float* b, std::size_t n);
void ScaleF64(double* x, double alpha, std::size_t n);
void AxpyF64(double* y, double alpha, const double* x, std::size_t n);
}  // namespace neon
#endif

}  // namespace duet::kernels

#endif  // DUET_KERNELS_H_
