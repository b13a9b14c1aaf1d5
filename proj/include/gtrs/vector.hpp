#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "gtrs/simd.hpp"

namespace gtrs {

using Vec = std::vector<double>;

inline double dot(std::span<const double> x, std::span<const double> y) { return simd::dot(x, y); }
inline double norm2(std::span<const double> x) { return std::sqrt(simd::nrm2sq(x)); }
inline void axpy(double a, std::span<const double> x, std::span<double> y) { simd::axpy(a, x, y); }

/// a*x + b*y as a new vector.
inline Vec lincomb(double a, std::span<const double> x, double b, std::span<const double> y) {
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + b * y[i];
  return out;
}

inline double norm_inf(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::fmax(m, std::fabs(v));
  return m;
}

/// Normalises x in place; returns the original norm.
inline double normalize(std::span<double> x) {
  const double nrm = norm2(x);
  if (nrm > 0.0) simd::scal(1.0 / nrm, x);
  return nrm;
}

}  // namespace gtrs
