#include "gtrs/simd.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "gtrs/error.hpp"

namespace gtrs::simd {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Level detect() {
  // GTRS_SIMD=scalar forces the reference kernels.
  if (const char* env = std::getenv("GTRS_SIMD"); env && std::string(env) == "scalar") {
    return Level::Scalar;
  }
  return cpu_has_avx2() ? Level::Avx2 : Level::Scalar;
}

std::atomic<Level>& current() {
  static std::atomic<Level> level{detect()};
  return level;
}

}  // namespace

std::string_view to_string(Level level) {
  return level == Level::Avx2 ? "avx2" : "scalar";
}

bool supported(Level level) { return level == Level::Scalar || cpu_has_avx2(); }

Level active_level() { return current().load(std::memory_order_relaxed); }

void set_level(Level level) {
  require(supported(level), ErrorKind::InvalidInput,
          "SIMD level " + std::string(to_string(level)) + " is not supported on this CPU");
  current().store(level, std::memory_order_relaxed);
}

ScopedLevel::ScopedLevel(Level level) : previous_(active_level()) { set_level(level); }
ScopedLevel::~ScopedLevel() { current().store(previous_, std::memory_order_relaxed); }

double dot(std::span<const double> x, std::span<const double> y) {
  return active_level() == Level::Avx2 ? avx2::dot(x.data(), y.data(), x.size())
                                       : scalar::dot(x.data(), y.data(), x.size());
}

double nrm2sq(std::span<const double> x) {
  return active_level() == Level::Avx2 ? avx2::nrm2sq(x.data(), x.size())
                                       : scalar::nrm2sq(x.data(), x.size());
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  if (active_level() == Level::Avx2) {
    avx2::axpy(a, x.data(), y.data(), x.size());
  } else {
    scalar::axpy(a, x.data(), y.data(), x.size());
  }
}

void xpby(std::span<const double> x, double b, std::span<double> y) {
  if (active_level() == Level::Avx2) {
    avx2::xpby(x.data(), b, y.data(), x.size());
  } else {
    scalar::xpby(x.data(), b, y.data(), x.size());
  }
}

void scal(double a, std::span<double> x) {
  if (active_level() == Level::Avx2) {
    avx2::scal(a, x.data(), x.size());
  } else {
    scalar::scal(a, x.data(), x.size());
  }
}

void csr_matvec(const CsrView& a, std::span<const double> x, std::span<double> y) {
  if (active_level() == Level::Avx2) {
    avx2::csr_matvec(a, x.data(), y.data());
  } else {
    scalar::csr_matvec(a, x.data(), y.data());
  }
}

}  // namespace gtrs::simd
