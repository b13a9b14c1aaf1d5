#include "gtrs/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "gtrs/error.hpp"
#include "gtrs/linalg.hpp"

namespace gtrs {

SolverConfig SolverConfig::fast() {
  SolverConfig c;
  c.eps1 = 1e-5;
  c.eps2 = 1e-8;
  c.eps3 = 1e-5;
  c.delta = c.eps3;
  return c;
}

void SolverConfig::validate() const {
  auto positive = [](double v, const char* name) {
    require(v > 0.0 && std::isfinite(v), ErrorKind::InvalidInput, std::string(name) + " must be positive");
  };
  positive(eps1, "eps1");
  positive(eps2, "eps2");
  positive(eps3, "eps3");
  positive(delta, "delta");
  require(rho >= 0.0, ErrorKind::InvalidInput, "rho must be nonnegative");
  require(sigma > 0.0 && sigma <= 0.5, ErrorKind::InvalidInput, "sigma must lie in (0, 0.5]");
  require(s > 0.0 && s < 1.0, ErrorKind::InvalidInput, "s must lie in (0, 1)");
  require(xi > 0.0 && xi <= 1.0, ErrorKind::InvalidInput, "xi must lie in (0, 1]");
  require(max_iter >= 1, ErrorKind::InvalidInput, "max_iter must be at least 1");
  require(refresh_every >= 1, ErrorKind::InvalidInput, "refresh_every must be at least 1");
}

const char* to_string(Algorithm a) { return a == Algorithm::Alg1 ? "alg1" : "alg2"; }

const char* to_string(Termination t) {
  switch (t) {
    case Termination::SmallDecrease: return "small-decrease";
    case Termination::BandStationary: return "band-stationary";
    case Termination::ActiveStationary: return "active-stationary";
    case Termination::IterLimit: return "iter-limit";
    case Termination::ProjectedGradient: return "projected-gradient";
    case Termination::Construction: return "construction";
  }
  return "unknown";
}

const char* to_string(Branch b) {
  switch (b) {
    case Branch::Band: return "band";
    case Branch::LeftActive: return "left";
    case Branch::RightActive: return "right";
  }
  return "unknown";
}

bool values_equal(double h1, double h2, double eps1) {
  const double gap = std::fabs(h1 - h2);
  return gap <= eps1 * (std::fabs(h1) + std::fabs(h2)) || gap <= 1e-14;
}

Direction steepest_direction(std::span<const double> g1, std::span<const double> g2, bool equal,
                             bool h1_active, double delta) {
  Direction out;
  const std::size_t n = g1.size();
  out.d.resize(n);
  if (!equal) {
    const auto g = h1_active ? g1 : g2;
    out.alpha = h1_active ? 1.0 : 0.0;
    for (std::size_t i = 0; i < n; ++i) out.d[i] = -g[i];
    out.optimal = norm2(out.d) <= delta;
    return out;
  }
  const double g11 = dot(g1, g1), g12 = dot(g1, g2), g22 = dot(g2, g2);
  double alpha;
  if (g11 >= g12 && g12 >= g22) {
    alpha = 0.0;
  } else if (g11 <= g12 && g12 <= g22) {
    alpha = 1.0;
  } else {
    const double denom = g11 + g22 - 2.0 * g12;
    if (denom > 1e-16 * std::max(g11 + g22, 1e-300)) {
      alpha = std::clamp((g22 - g12) / denom, 0.0, 1.0);
      out.interior = true;
    } else {
      // Nearly parallel gradients: pick the best of a coarse grid.
      alpha = 0.0;
      double best = g22;
      const double half = 0.25 * (g11 + 2.0 * g12 + g22);
      if (half < best) {
        best = half;
        alpha = 0.5;
      }
      if (g11 < best) alpha = 1.0;
    }
  }
  out.alpha = alpha;
  for (std::size_t i = 0; i < n; ++i) out.d[i] = -(alpha * g1[i] + (1.0 - alpha) * g2[i]);
  out.optimal = norm2(out.d) <= delta;
  return out;
}

double crossing_step(double c2, double c1, double c0, double inv_L) {
  // 1/2 c2 g^2 - c1 g + c0 = 0
  const double a = 0.5 * c2, b = -c1, c = c0;
  double root = std::numeric_limits<double>::infinity();
  auto consider = [&](double r) {
    if (std::isfinite(r) && r > 0.0) root = std::min(root, r);
  };
  if (a == 0.0 || std::fabs(a) * inv_L * inv_L < 1e-16 * (std::fabs(b) * inv_L + std::fabs(c))) {
    if (b != 0.0) consider(-c / b);
  } else {
    const double disc = b * b - 4.0 * a * c;
    if (std::isfinite(disc) && disc >= 0.0) {
      const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
      if (q != 0.0) {
        consider(q / a);
        consider(c / q);
      } else {
        consider(0.0);
      }
    }
  }
  return root < inv_L ? root : inv_L;
}

namespace {

struct Side {
  const QuadraticForm* h;
  Vec ax;  // A x
  Vec g;   // A x + a
  double value = 0.0;
  Vec ad;  // A d
};

// A_left v and A_right v, through Q1 and Q2 when that is cheaper.
class HessianPair {
public:
  explicit HessianPair(const Reformulation& r)
      : r_(r),
        split_(r.q1.n() == r.n() && r.q2.n() == r.n() &&
               r.q1.nnz() + r.q2.nnz() < r.h_left.Q.nnz() + r.h_right.Q.nnz()),
        t1_(split_ ? r.n() : 0), t2_(split_ ? r.n() : 0) {}

  void apply(std::span<const double> v, std::span<double> left, std::span<double> right) {
    if (!split_) {
      r_.h_left.Q.multiply(v, left);
      r_.h_right.Q.multiply(v, right);
      return;
    }
    r_.q1.multiply(v, t1_);
    r_.q2.multiply(v, t2_);
    for (std::size_t i = 0; i < t1_.size(); ++i) {
      left[i] = t1_[i] + r_.lambda_left * t2_[i];
      right[i] = t1_[i] + r_.lambda_right * t2_[i];
    }
  }

private:
  const Reformulation& r_;
  bool split_;
  Vec t1_, t2_;
};

void refresh(Side& s, std::span<const double> x) {
  s.value = s.h->evaluate(x, s.ax);
  for (std::size_t i = 0; i < x.size(); ++i) s.g[i] = s.ax[i] + s.h->b[i];
}

}  // namespace

MinimizeResult minimize(const Reformulation& reform, std::span<const double> x0, const SolverConfig& config,
                        Algorithm algorithm, const IterationObserver& observer) {
  require(reform.variant == ReformVariant::TwoConvex, ErrorKind::Precondition,
          "minimize needs a two-convex reformulation");
  config.validate();
  const std::size_t n = reform.n();
  require(x0.size() == n, ErrorKind::Precondition, "minimize: starting point has the wrong dimension");
  for (double v : x0) require(std::isfinite(v), ErrorKind::Precondition, "minimize: starting point is not finite");
  require(reform.L > 0.0, ErrorKind::Precondition, "minimize: L must be positive");

  MinimizeResult out;
  Vec x(x0.begin(), x0.end());
  Side s1{&reform.h_left, Vec(n), Vec(n), 0.0, Vec(n)};
  Side s2{&reform.h_right, Vec(n), Vec(n), 0.0, Vec(n)};
  HessianPair hess(reform);
  hess.apply(x, s1.ax, s2.ax);
  refresh(s1, x);
  refresh(s2, x);
  double H = std::max(s1.value, s2.value);
  out.h_trace.push_back(H);
  const double inv_L = 1.0 / reform.L;

  std::size_t iter = 0;
  for (;; ++iter) {
    const bool equal = values_equal(s1.value, s2.value, config.eps1);
    const bool left_active = s1.value >= s2.value;
    const Direction dir = steepest_direction(s1.g, s2.g, equal, left_active, config.delta);
    const double dnorm = norm2(dir.d);
    out.alpha = dir.alpha;
    out.d_norm = dnorm;
    if (dnorm <= config.eps3 || dir.optimal) {
      out.termination = equal ? Termination::BandStationary : Termination::ActiveStationary;
      break;
    }
    if (iter >= config.max_iter) {
      out.termination = Termination::IterLimit;
      break;
    }

    IterationRecord rec;
    rec.iter = iter;
    rec.h_before = H;
    rec.h_left = s1.value;
    rec.h_right = s2.value;
    rec.d_norm = dnorm;
    rec.alpha = dir.alpha;
    rec.branch = equal ? Branch::Band : (left_active ? Branch::LeftActive : Branch::RightActive);

    hess.apply(dir.d, s1.ad, s2.ad);
    const double dad1 = dot(dir.d, s1.ad), dad2 = dot(dir.d, s2.ad);

    double beta;
    if (algorithm == Algorithm::Alg1) {
      if (equal) {
        beta = inv_L;
      } else {
        const Side& act = left_active ? s1 : s2;
        const Side& oth = left_active ? s2 : s1;
        const double c2 = left_active ? dad1 - dad2 : dad2 - dad1;
        double c1 = 0.0;
        for (std::size_t i = 0; i < n; ++i) c1 += (act.g[i] - oth.g[i]) * act.g[i];
        beta = crossing_step(c2, c1, act.value - oth.value, inv_L);
        rec.crossing_step = beta < inv_L;
      }
    } else {
      // Trial values in closed form, measured relative to H so the test is
      // not swamped by rounding in H itself.
      const double gd1 = dot(s1.g, dir.d), gd2 = dot(s2.g, dir.d);
      const double dd = dnorm * dnorm;
      beta = config.xi;
      bool accepted = false;
      for (std::size_t k = 0; k <= config.max_backtracks; ++k) {
        const double delta1 = (s1.value - H) + beta * gd1 + 0.5 * beta * beta * dad1;
        const double delta2 = (s2.value - H) + beta * gd2 + 0.5 * beta * beta * dad2;
        const double change = std::max(delta1, delta2);
        ArmijoTrial t{beta, H + change, H - config.sigma * beta * dd, change <= -config.sigma * beta * dd};
        rec.trials.push_back(t);
        if (t.accepted) {
          accepted = true;
          break;
        }
        beta *= config.s;
      }
      if (!accepted) {
        throw Error(ErrorKind::StalledLineSearch,
                    "Armijo backtracking exceeded " + std::to_string(config.max_backtracks) +
                        " reductions at iteration " + std::to_string(iter) + " (||d|| = " +
                        std::to_string(dnorm) + ", H = " + std::to_string(H) + ")");
      }
    }

    Vec x_start;
    if (observer) x_start = x;
    axpy(beta, dir.d, x);
    axpy(beta, s1.ad, s1.ax);
    axpy(beta, s2.ad, s2.ax);
    const bool exact = (iter + 1) % config.refresh_every == 0;
    if (exact) hess.apply(x, s1.ax, s2.ax);
    refresh(s1, x);
    refresh(s2, x);
    const double H_new = std::max(s1.value, s2.value);

    rec.beta = beta;
    rec.step_norm = beta * dnorm;
    rec.h_after = H_new;
    if (observer) {
      rec.x = x_start;
      rec.d = dir.d;
      observer(rec);
    }
    out.h_trace.push_back(H_new);
    const double decrease = H - H_new;
    H = H_new;
    if (decrease < config.eps2) {
      ++iter;
      out.termination = Termination::SmallDecrease;
      break;
    }
  }
  out.iterations = iter;
  out.x = std::move(x);
  out.h_left = s1.value;
  out.h_right = s2.value;
  return out;
}

TraceWriter::TraceWriter(std::ostream& out) : out_(&out) {
  *out_ << "iteration,H,gap,d_norm,beta,branch\n";
}

void TraceWriter::operator()(const IterationRecord& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%s\n", r.iter, r.h_after,
                std::fabs(r.h_left - r.h_right), r.d_norm, r.beta, to_string(r.branch));
  *out_ << buf;
}

namespace {

// y(mu) = (I + mu Q2)^{-1} (z - mu b2)
Vec shifted_solve(const QuadraticForm& f2, double mu, std::span<const double> rhs, std::span<const double> x0) {
  const std::size_t n = rhs.size();
  Operator op = [&](std::span<const double> x, std::span<double> y) {
    f2.Q.multiply(x, y);
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + mu * y[i];
  };
  return pcg_solve(op, rhs, 1e-14, 20 * n + 200, nullptr, x0);
}

Vec projection_point(const QuadraticForm& f2, std::span<const double> z, double mu, std::span<const double> x0) {
  return shifted_solve(f2, mu, lincomb(1.0, z, -mu, f2.b), x0);
}

}  // namespace

ProjectionResult project_onto_sublevel(const QuadraticForm& f2, std::span<const double> z, double tol) {
  require(z.size() == f2.n(), ErrorKind::Precondition, "projection: dimension mismatch");
  ProjectionResult out;
  const double f0 = f2.evaluate(z);
  if (f0 <= 0.0) {
    out.y.assign(z.begin(), z.end());
    return out;
  }
  // f2(y(mu)) is decreasing in mu; bracket the root, then safeguarded Newton.
  double lo = 0.0, hi = 1.0;
  Vec y = projection_point(f2, z, hi, {});
  double fy = f2.evaluate(y);
  while (fy > 0.0) {
    lo = hi;
    hi *= 4.0;
    require(hi < 1e30, ErrorKind::Numerical, "projection: constraint set appears empty");
    y = projection_point(f2, z, hi, y);
    fy = f2.evaluate(y);
  }
  const double scale = 1.0 + std::fabs(f2.c);
  double mu = hi;
  for (int it = 0; it < 200 && std::fabs(fy) > tol * scale && hi - lo > 1e-16 * hi; ++it) {
    const Vec g = f2.gradient(y);
    const Vec w = shifted_solve(f2, mu, g, {});
    const double deriv = -dot(g, w);
    double next = deriv < 0.0 ? mu - fy / deriv : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    mu = next;
    y = projection_point(f2, z, mu, y);
    fy = f2.evaluate(y);
    (fy > 0.0 ? lo : hi) = mu;
  }
  if (fy > tol * scale) {
    // Not converged: land on the feasible side.
    mu = hi;
    y = projection_point(f2, z, mu, y);
  }
  out.y = std::move(y);
  out.multiplier = mu;
  return out;
}

P2Result solve_p2(const Reformulation& reform, std::span<const double> x0, const SolverConfig& config) {
  require(reform.variant == ReformVariant::ConvexConstraint, ErrorKind::Precondition,
          "solve_p2 needs a convex-constraint reformulation");
  config.validate();
  const std::size_t n = reform.n();
  require(x0.size() == n, ErrorKind::Precondition, "solve_p2: starting point has the wrong dimension");
  const QuadraticForm& obj = reform.h_left;
  const QuadraticForm& con = reform.h_right;
  const double inv_L = 1.0 / reform.L;

  P2Result out;
  Vec x = project_onto_sublevel(con, x0).y;
  Vec y = x;
  double t = 1.0;
  double mult = 0.0;
  std::size_t k = 0;
  for (; k < config.max_iter; ++k) {
    const Vec g = obj.gradient(y);
    const Vec z = lincomb(1.0, y, -inv_L, g);
    auto proj = project_onto_sublevel(con, z);
    Vec diff = lincomb(1.0, proj.y, -1.0, y);
    const double gap = reform.L * norm2(diff);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    Vec y_next = lincomb(1.0 + (t - 1.0) / t_next, proj.y, -(t - 1.0) / t_next, x);
    // Restart the momentum when the objective goes up.
    if (obj.evaluate(proj.y) > obj.evaluate(x)) {
      y_next = proj.y;
      t = 1.0;
    } else {
      t = t_next;
    }
    x = std::move(proj.y);
    mult = proj.multiplier * reform.L;
    y = std::move(y_next);
    if (gap <= config.eps3) {
      ++k;
      out.termination = Termination::ProjectedGradient;
      break;
    }
  }
  out.iterations = k;
  out.x = std::move(x);
  out.multiplier = mult;
  return out;
}

}  // namespace gtrs
