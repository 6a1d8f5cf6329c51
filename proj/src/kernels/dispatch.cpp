// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "tcrcg/kernels.hpp"

namespace tcrcg::kernels {

bool avx2_compiled();

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* choose_default() {
  if (const char* env = std::getenv("TCRCG_ISA")) {
    if (std::string(env) == "scalar") return &scalar_table();
  }
  if (isa_available(Isa::Avx2)) return &avx2_table();
  return &scalar_table();
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> table{choose_default()};
  return table;
}

}  // namespace

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
      return avx2_compiled() && cpu_has_avx2();
  }
  return false;
}

const KernelTable& active() { return *slot().load(std::memory_order_acquire); }

void set_active_isa(Isa isa) {
  if (!isa_available(isa)) {
    throw std::runtime_error("requested ISA is not available: " + std::string(isa_name(isa)));
  }
  slot().store(isa == Isa::Avx2 ? &avx2_table() : &scalar_table(), std::memory_order_release);
}

std::string_view isa_name(Isa isa) {
  return isa == Isa::Avx2 ? "avx2" : "scalar";
}

}  // namespace tcrcg::kernels
