#pragma once

#include <cstddef>
#include <cstdint>

namespace aubry::kern {

// Hot inner loops of the graph solvers and the plane builder, provided as a
// scalar reference implementation and an AVX2 variant selected at runtime.
// Both variants perform the same floating-point operations in the same order,
// so their results are bit-identical; the equivalence suite asserts exactly
// that. Set AUBRY_KERNELS=scalar|avx2 to force a variant.

struct Kernels {
  // dst[i] = min(dst[i], src[i] + add[i] + off), recording `tag` in pred[i]
  // on improvement. Returns true if some improvement exceeded eps.
  bool (*minplus_pred)(double* dst, const double* src, const double* add,
                       double off, int32_t* pred, int32_t tag, double eps,
                       std::size_t len);
  // Same without predecessor tracking.
  bool (*minplus)(double* dst, const double* src, const double* add, double off,
                  double eps, std::size_t len);
  // out[i] += p*ca[i] + q*sa[i]  (fused multiply-adds, fixed order).
  void (*axpby2)(double* out, const double* ca, const double* sa, double p,
                 double q, std::size_t len);
  const char* name;
};

/// The variant chosen at first use (env override, else best supported).
const Kernels& active();

const Kernels& scalar_kernels();

/// AVX2 variant, or nullptr when unsupported by the build or the CPU.
const Kernels* avx2_kernels();

}  // namespace aubry::kern
