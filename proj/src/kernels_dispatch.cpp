#include <atomic>
#include <stdexcept>
#include <string>

#include "orbsim/kernels.hpp"

namespace orbsim::kernels {
namespace {

const KernelTable& table_for(Isa isa) {
  return isa == Isa::kAvx2 ? avx2_table() : scalar_table();
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{&table_for(best_supported_isa())};
  return slot;
}

}  // namespace

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(__x86_64__) || defined(__i386__)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

Isa best_supported_isa() { return cpu_supports(Isa::kAvx2) ? Isa::kAvx2 : Isa::kScalar; }

const KernelTable& active() { return *active_slot().load(std::memory_order_acquire); }

void select(Isa isa) {
  if (!cpu_supports(isa)) {
    throw std::runtime_error("CPU does not support kernel ISA " + std::string(isa_name(isa)));
  }
  active_slot().store(&table_for(isa), std::memory_order_release);
}

std::string_view isa_name(Isa isa) { return isa == Isa::kAvx2 ? "avx2" : "scalar"; }

Isa parse_isa(std::string_view name) {
  if (name == "scalar") return Isa::kScalar;
  if (name == "avx2") return Isa::kAvx2;
  if (name == "auto") return best_supported_isa();
  throw std::invalid_argument("unknown kernel ISA '" + std::string(name) + "'");
}

}  // namespace orbsim::kernels
