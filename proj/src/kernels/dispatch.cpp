#include <cstdlib>
#include <string_view>

#include "msdarcy/kernels.hpp"

namespace msdarcy::kernels {

#if defined(MSDARCY_HAVE_AVX2)
const KernelTable& avx2_table_impl();
#endif

const KernelTable* avx2_table() {
#if defined(MSDARCY_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  if (supported) return &avx2_table_impl();
#endif
  return nullptr;
}

const KernelTable& active() {
  static const KernelTable& chosen = [] () -> const KernelTable& {
    const char* env = std::getenv("MSDARCY_ISA");
    if (env != nullptr && std::string_view(env) == "scalar") return scalar_table();
    if (const KernelTable* t = avx2_table()) return *t;
    return scalar_table();
  }();
  return chosen;
}

}  // namespace msdarcy::kernels
