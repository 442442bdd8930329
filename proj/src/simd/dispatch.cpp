#include <atomic>
#include <cstdlib>
#include <string>

#include "ansflow/grid.hpp"
#include "ansflow/simd.hpp"

namespace ansflow::simd {

#if defined(ANSFLOW_BUILD_AVX2)
const KernelTable* avx2_table_impl();
#endif

const KernelTable* avx2_table() {
#if defined(ANSFLOW_BUILD_AVX2)
  return avx2_table_impl();
#else
  return nullptr;
#endif
}

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

const KernelTable* select_default() {
  if (const char* env = std::getenv("ANSFLOW_SIMD"); env != nullptr && std::string(env) == "scalar") {
    return &scalar_table();
  }
  if (avx2_table() != nullptr && cpu_has_avx2()) return avx2_table();
  return &scalar_table();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{select_default()};
  return table;
}

}  // namespace

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

void force(Backend b) {
  if (b == Backend::Scalar) {
    current().store(&scalar_table(), std::memory_order_release);
    return;
  }
  if (avx2_table() == nullptr || !cpu_has_avx2()) throw Error("simd: AVX2 backend unavailable");
  current().store(avx2_table(), std::memory_order_release);
}

std::string_view name(Backend b) { return b == Backend::Scalar ? "scalar" : "avx2"; }

}  // namespace ansflow::simd
