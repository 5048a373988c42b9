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

#include "duet/kernels.h"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "duet/rng.h"

namespace duet::kernels {
namespace {

struct Variant {
  Isa isa;
  double (*dot)(const float*, const float*, std::size_t);
  void (*scale)(double*, double, std::size_t);
  void (*axpy)(double*, double, const double*, std::size_t);
};

std::vector<Variant> AvailableVariants() {
  std::vector<Variant> v;
#ifdef DUET_HAVE_AVX2_KERNELS
  if (IsaAvailable(Isa::kAvx2)) v.push_back({Isa::kAvx2, avx2::DotF32, avx2::ScaleF64, avx2::AxpyF64});
#endif
#ifdef DUET_HAVE_NEON_KERNELS
  if (IsaAvailable(Isa::kNeon)) v.push_back({Isa::kNeon, neon::DotF32, neon::ScaleF64, neon::AxpyF64});
#endif
  v.push_back({Isa::kScalar, DotF32, ScaleF64, AxpyF64});  // the dispatcher
  return v;
}

TEST(KernelsTest, ScalarIsAlwaysAvailable) {
  EXPECT_TRUE(IsaAvailable(Isa::kScalar));
  EXPECT_TRUE(IsaAvailable(ActiveIsa()));
}

TEST(KernelsTest, DotMatchesScalarReference) {
  Rng rng(1);
  for (const Variant& var : AvailableVariants()) {
    for (std::size_t n : {0u, 1u, 3u, 7u, 8u, 9u, 15u, 16u, 31u, 100u, 300u, 1001u}) {
      std::vector<float> a(n), b(n);
      for (std::size_t i = 0; i < n; ++i) {
        a[i] = static_cast<float>(rng.Uniform01() * 2 - 1);
        b[i] = static_cast<float>(rng.Uniform01() * 2 - 1);
      }
      double ref = scalar::DotF32(a.data(), b.data(), n);
      double abs_sum = 0;
      for (std::size_t i = 0; i < n; ++i) abs_sum += std::fabs(double(a[i]) * b[i]);
      // Products are exact in double; only the summation order differs.
      EXPECT_NEAR(var.dot(a.data(), b.data(), n), ref, 1e-15 * (abs_sum + 1))
          << ToString(var.isa) << " n=" << n;
    }
  }
}

TEST(KernelsTest, ScaleAndAxpyAreBitExact) {
  Rng rng(2);
  for (const Variant& var : AvailableVariants()) {
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 64u, 1000u}) {
      std::vector<double> x(n), y(n);
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = rng.Uniform01() * 10 - 5;
        y[i] = rng.Uniform01() * 10 - 5;
      }
      auto xs = x, ys = y, xv = x, yv = y;
      scalar::ScaleF64(xs.data(), 0.999, n);
      var.scale(xv.data(), 0.999, n);
      EXPECT_EQ(xs, xv) << ToString(var.isa);
      scalar::AxpyF64(ys.data(), -0.37, x.data(), n);
      var.axpy(yv.data(), -0.37, x.data(), n);
      EXPECT_EQ(ys, yv) << ToString(var.isa);
    }
  }
}

TEST(KernelsTest, HandValues) {
  float a[] = {1, 2, 3}, b[] = {4, 5, 6};
  EXPECT_DOUBLE_EQ(DotF32(a, b, 3), 32.0);
  double x[] = {1, 2};
  ScaleF64(x, 0.5, 2);
  EXPECT_DOUBLE_EQ(x[1], 1.0);
  double y[] = {1, 1};
  AxpyF64(y, 2.0, x, 2);
  EXPECT_DOUBLE_EQ(y[0], 2.0);
  EXPECT_DOUBLE_EQ(y[1], 3.0);
}

}  // namespace
}  // namespace duet::kernels
