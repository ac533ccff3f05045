#include "aubry/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string_view>

namespace aubry::kern {

#if !defined(AUBRY_HAVE_AVX2_TU)
const Kernels* avx2_kernels() { return nullptr; }
#endif

const Kernels& active() {
  static const Kernels& chosen = []() -> const Kernels& {
    const char* env = std::getenv("AUBRY_KERNELS");
    if (env) {
      std::string_view want(env);
      if (want == "scalar") return scalar_kernels();
      if (want == "avx2") {
        const Kernels* k = avx2_kernels();
        if (!k) throw std::runtime_error("AUBRY_KERNELS=avx2 but AVX2 is unavailable");
        return *k;
      }
      if (!want.empty()) throw std::runtime_error("unknown AUBRY_KERNELS value");
    }
    const Kernels* k = avx2_kernels();
    return k ? *k : scalar_kernels();
  }();
  return chosen;
}

}  // namespace aubry::kern
