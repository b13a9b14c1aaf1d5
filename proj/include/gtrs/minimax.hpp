#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gtrs/cqr.hpp"

namespace gtrs {

struct SolverConfig {
  double eps1 = 1e-8;   // relative equal-value band
  double eps2 = 1e-11;  // stop when H decreases by less than this
  double eps3 = 1e-8;   // stop when the steepest-descent norm falls below this
  double sigma = 1e-4;  // Armijo slope
  double xi = 1.0;      // Armijo initial step
  double s = 0.5;       // Armijo backtracking factor
  double rho = 0.0;     // value band for criticality; 0 means "use eps1"
  double delta = 1e-8;  // criticality norm
  std::size_t max_iter = 100000;
  std::size_t max_backtracks = 100;
  std::size_t refresh_every = 50;  // exact Hessian-product refresh period

  /// Relaxed tolerances (1e-5 / 1e-8 / 1e-5).
  static SolverConfig fast();
  /// Throws InvalidInput when a field is out of range.
  void validate() const;
};

enum class Algorithm { Alg1, Alg2 };
const char* to_string(Algorithm a);

enum class Termination {
  SmallDecrease,     // H(x_{k-1}) - H(x_k) < eps2
  BandStationary,    // values within the band and ||d|| <= eps3
  ActiveStationary,  // one function active and its gradient <= eps3
  IterLimit,
  ProjectedGradient,  // constrained path converged
  Construction,       // solved without iterating (interior, hard case 2)
};
const char* to_string(Termination t);

/// True when |h1 - h2| <= eps1 (|h1| + |h2|), with an absolute floor 1e-14.
bool values_equal(double h1, double h2, double eps1);

struct Direction {
  Vec d;
  double alpha = 0.0;    // weight on g1
  bool interior = false; // alpha strictly inside (0, 1) from the closed form
  bool optimal = false;  // the current point is certified critical
};

/// Negative minimum-norm element of conv{g1, g2} (or -g of the active
/// function when the values differ; alpha = 1 selects h1).
Direction steepest_direction(std::span<const double> g1, std::span<const double> g2, bool equal,
                             bool h1_active, double delta);

struct ArmijoTrial {
  double beta = 0.0;
  double h_trial = 0.0;  // H(x + beta d)
  double bound = 0.0;    // H(x) - sigma beta ||d||^2
  bool accepted = false;
};

enum class Branch { Band, LeftActive, RightActive };
const char* to_string(Branch b);

struct IterationRecord {
  std::size_t iter = 0;
  double h_before = 0.0, h_after = 0.0;
  double h_left = 0.0, h_right = 0.0;  // at the start of the iteration
  double d_norm = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double step_norm = 0.0;  // ||x_{k+1} - x_k||
  Branch branch = Branch::Band;
  bool crossing_step = false;  // Alg1 stopped at the h_left = h_right curve
  std::vector<ArmijoTrial> trials;
  // Iterate at the start of the step and the direction; valid only inside
  // the observer call.
  std::span<const double> x, d;
};

using IterationObserver = std::function<void(const IterationRecord&)>;

struct MinimizeResult {
  Vec x;
  std::vector<double> h_trace;  // H(x_0), H(x_1), ...
  Termination termination = Termination::IterLimit;
  std::size_t iterations = 0;
  double h_left = 0.0, h_right = 0.0;
  double alpha = 0.0;
  double d_norm = 0.0;
};

/// Alg1 crossing step: smallest positive root of
///   1/2 g^2 c2 - g c1 + c0 = 0, or 1/L when none is below 1/L.
double crossing_step(double c2, double c1, double c0, double inv_L);

/// Steepest descent on H = max(h_left, h_right) for a TwoConvex reformulation.
MinimizeResult minimize(const Reformulation& reform, std::span<const double> x0, const SolverConfig& config,
                        Algorithm algorithm, const IterationObserver& observer = {});

/// Writes iteration, H, gap, ||d||, beta, branch as CSV lines.
class TraceWriter {
public:
  explicit TraceWriter(std::ostream& out);
  void operator()(const IterationRecord& r);

private:
  std::ostream* out_;
};

struct ProjectionResult {
  Vec y;
  double multiplier = 0.0;
};

/// Euclidean projection onto {f2 <= 0}, f2 convex with nonempty interior.
ProjectionResult project_onto_sublevel(const QuadraticForm& f2, std::span<const double> z, double tol = 1e-12);

struct P2Result {
  Vec x;
  std::size_t iterations = 0;
  Termination termination = Termination::IterLimit;
  double multiplier = 0.0;  // of the constraint at the solution
};

/// Accelerated projected gradient for min h_left subject to f2 <= 0.
P2Result solve_p2(const Reformulation& reform, std::span<const double> x0, const SolverConfig& config);

}  // namespace gtrs
