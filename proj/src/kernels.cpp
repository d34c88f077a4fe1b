#include "prodlaw/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string_view>

namespace prodlaw::kernels {

const Ops& active() {
  static const Ops& chosen = []() -> const Ops& {
    const char* env = std::getenv("PRODLAW_KERNELS");
    if (env != nullptr) {
      std::string_view want(env);
      if (want == "scalar") return scalar_ops();
      if (want == "avx2") {
        const Ops* v = avx2_ops();
        if (v == nullptr) {
          throw std::runtime_error("PRODLAW_KERNELS=avx2 requested but AVX2/FMA unavailable");
        }
        return *v;
      }
      throw std::runtime_error("PRODLAW_KERNELS must be 'scalar' or 'avx2'");
    }
    const Ops* v = avx2_ops();
    return v != nullptr ? *v : scalar_ops();
  }();
  return chosen;
}

}  // namespace prodlaw::kernels
