#pragma once

// Vector kernels used by every iterative method in the library. Each kernel
// has a portable scalar reference implementation and an AVX2+FMA variant; the
// variant is chosen once at load time from the CPU features and can be
// overridden (tests pin both levels and compare them).

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace gtrs::simd {

enum class Level { Scalar, Avx2 };

std::string_view to_string(Level level);

/// True when the running CPU (and this build) can execute `level`.
bool supported(Level level);

/// Level currently used by the dispatching kernels below.
Level active_level();

/// Pin the dispatch level. Throws gtrs::Error if the level is unsupported.
void set_level(Level level);

/// Restores the level detected at start-up when it goes out of scope.
class ScopedLevel {
public:
  explicit ScopedLevel(Level level);
  ~ScopedLevel();
  ScopedLevel(const ScopedLevel&) = delete;
  ScopedLevel& operator=(const ScopedLevel&) = delete;

private:
  Level previous_;
};

/// Row-compressed view of a square matrix (both triangles stored).
struct CsrView {
  std::size_t n = 0;
  const std::int64_t* row_ptr = nullptr;
  const std::int32_t* col = nullptr;
  const double* val = nullptr;
};

double dot(std::span<const double> x, std::span<const double> y);
double nrm2sq(std::span<const double> x);
/// y += a*x
void axpy(double a, std::span<const double> x, std::span<double> y);
/// y = x + b*y
void xpby(std::span<const double> x, double b, std::span<double> y);
/// x *= a
void scal(double a, std::span<double> x);
/// y = A*x
void csr_matvec(const CsrView& a, std::span<const double> x, std::span<double> y);

// Per-level entry points, exposed for equivalence testing.
namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
double nrm2sq(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void xpby(const double* x, double b, double* y, std::size_t n);
void scal(double a, double* x, std::size_t n);
void csr_matvec(const CsrView& a, const double* x, double* y);
}  // namespace scalar

namespace avx2 {
double dot(const double* x, const double* y, std::size_t n);
double nrm2sq(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void xpby(const double* x, double b, double* y, std::size_t n);
void scal(double a, double* x, std::size_t n);
void csr_matvec(const CsrView& a, const double* x, double* y);
}  // namespace avx2

}  // namespace gtrs::simd
