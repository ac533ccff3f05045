#include <cmath>

#include "aubry/kernels.hpp"

namespace aubry::kern {

// Reference implementations. The AVX2 variants replicate these operations
// with the same ordering, so results must match bit for bit.

namespace {

bool minplus_pred_scalar(double* dst, const double* src, const double* add,
                         double off, int32_t* pred, int32_t tag, double eps,
                         std::size_t len) {
  bool big = false;
  for (std::size_t i = 0; i < len; ++i) {
    double cand = (src[i] + add[i]) + off;
    if (cand < dst[i]) {
      if (dst[i] - cand > eps) big = true;
      dst[i] = cand;
      pred[i] = tag;
    }
  }
  return big;
}

bool minplus_scalar(double* dst, const double* src, const double* add, double off,
                    double eps, std::size_t len) {
  bool big = false;
  for (std::size_t i = 0; i < len; ++i) {
    double cand = (src[i] + add[i]) + off;
    if (cand < dst[i]) {
      if (dst[i] - cand > eps) big = true;
      dst[i] = cand;
    }
  }
  return big;
}

void axpby2_scalar(double* out, const double* ca, const double* sa, double p,
                   double q, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i)
    out[i] = std::fma(p, ca[i], std::fma(q, sa[i], out[i]));
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{minplus_pred_scalar, minplus_scalar, axpby2_scalar,
                         "scalar"};
  return k;
}

}  // namespace aubry::kern
