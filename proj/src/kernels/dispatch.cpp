// SPDX-License-Identifier: Apache-2.0
#include <atomic>

#include "filab/error.hpp"
#include "filab/kernels.hpp"

namespace filab::kernels {

#if !defined(FILAB_HAVE_AVX2)
const KernelTable* avx2_table() { return nullptr; }
#endif
#if !defined(FILAB_HAVE_NEON)
const KernelTable* neon_table() { return nullptr; }
#endif

namespace {

std::atomic<const KernelTable*> g_forced{nullptr};

bool cpu_has_avx2() {
#if defined(FILAB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& detect() {
  if (cpu_has_avx2()) return *avx2_table();
  // Advanced SIMD is mandatory on AArch64.
  if (neon_table() != nullptr) return *neon_table();
  return scalar_table();
}

}  // namespace

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
      return avx2_table() != nullptr && cpu_has_avx2();
    case Isa::neon:
      return neon_table() != nullptr;
  }
  return false;
}

const KernelTable& active() {
  if (const KernelTable* f = g_forced.load(std::memory_order_acquire)) return *f;
  static const KernelTable& best = detect();
  return best;
}

void force_isa(Isa isa) {
  if (!isa_available(isa))
    throw InvalidParameter("kernel variant not available: " + to_string(isa));
  const KernelTable* t = isa == Isa::scalar ? &scalar_table()
                         : isa == Isa::avx2 ? avx2_table()
                                            : neon_table();
  g_forced.store(t, std::memory_order_release);
}

void reset_isa() { g_forced.store(nullptr, std::memory_order_release); }

Isa parse_isa(const std::string& s) {
  if (s == "scalar") return Isa::scalar;
  if (s == "avx2") return Isa::avx2;
  if (s == "neon") return Isa::neon;
  throw InvalidParameter("unknown kernel variant: " + s);
}

std::string to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "unknown";
}

}  // namespace filab::kernels
