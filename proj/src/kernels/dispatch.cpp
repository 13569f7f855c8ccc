#include <atomic>
#include <cstdlib>
#include <string>

#include "dynphase/error.hpp"
#include "kernels_impl.hpp"

namespace dynphase::kernels {

namespace {

constexpr KernelTable kScalarTable{Backend::kScalar, &scalar::dotc,
                                   &scalar::dotu, &scalar::axpy,
                                   &scalar::norm_sq};

#if defined(DYNPHASE_HAVE_AVX2)
constexpr KernelTable kAvx2Table{Backend::kAvx2, &avx2::dotc, &avx2::dotu,
                                 &avx2::axpy, &avx2::norm_sq};
#endif

bool cpu_has_avx2() noexcept {
#if defined(DYNPHASE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* initial_table() noexcept {
  if (const char* forced = std::getenv("DYNPHASE_KERNELS")) {
    if (std::string(forced) == "scalar") return &kScalarTable;
  }
#if defined(DYNPHASE_HAVE_AVX2)
  if (cpu_has_avx2()) return &kAvx2Table;
#endif
  return &kScalarTable;
}

std::atomic<const KernelTable*>& current() noexcept {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

bool available(Backend backend) noexcept {
  switch (backend) {
    case Backend::kScalar:
      return true;
    case Backend::kAvx2:
      return cpu_has_avx2();
  }
  return false;
}

const KernelTable& table(Backend backend) {
  if (!available(backend)) {
    fail(Errc::kInvalidArgument,
         "kernel backend '" + std::string(name(backend)) +
             "' is not available on this CPU");
  }
#if defined(DYNPHASE_HAVE_AVX2)
  if (backend == Backend::kAvx2) return kAvx2Table;
#endif
  return kScalarTable;
}

const KernelTable& active() noexcept {
  return *current().load(std::memory_order_relaxed);
}

Backend active_backend() noexcept { return active().backend; }

void select(Backend backend) {
  current().store(&table(backend), std::memory_order_relaxed);
}

std::string_view name(Backend backend) noexcept {
  switch (backend) {
    case Backend::kScalar:
      return "scalar";
    case Backend::kAvx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace dynphase::kernels
