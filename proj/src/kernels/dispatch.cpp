#include <atomic>
#include <cstdlib>
#include <string_view>

#include "beg/kernels.hpp"

namespace beg::kernels {

#ifndef BEG_HAVE_AVX2_KERNELS
namespace detail {
const KernelTable* avx2_table_impl() noexcept { return nullptr; }
}  // namespace detail
#endif

namespace {

bool cpu_has_avx2() noexcept {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* initial_table() noexcept {
  if (const char* env = std::getenv("BEG_KERNELS"); env != nullptr && std::string_view(env) == "scalar")
    return &scalar_table();
  if (const auto* t = avx2_table()) return t;
  return &scalar_table();
}

std::atomic<const KernelTable*>& current() noexcept {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

const KernelTable* avx2_table() noexcept {
  static const KernelTable* table = cpu_has_avx2() ? detail::avx2_table_impl() : nullptr;
  return table;
}

const KernelTable& active_table() noexcept { return *current().load(std::memory_order_acquire); }

bool select_backend(Backend backend) noexcept {
  const KernelTable* t = nullptr;
  switch (backend) {
    case Backend::automatic:
      t = avx2_table() ? avx2_table() : &scalar_table();
      break;
    case Backend::scalar:
      t = &scalar_table();
      break;
    case Backend::avx2:
      t = avx2_table();
      break;
  }
  if (t == nullptr) return false;
  current().store(t, std::memory_order_release);
  return true;
}

}  // namespace beg::kernels
