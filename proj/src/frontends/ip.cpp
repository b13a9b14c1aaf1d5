#include <cmath>

#include "gtrs/error.hpp"
#include "gtrs/frontends.hpp"
#include "gtrs/linalg.hpp"

namespace gtrs {

const char* to_string(IpSide s) {
  switch (s) {
    case IpSide::LowerActive: return "lower-active";
    case IpSide::Interior: return "interior";
    case IpSide::UpperActive: return "upper-active";
  }
  return "unknown";
}

IpClassification classify_ip(const IntervalProblem& ip) {
  const std::size_t n = ip.n();
  require(ip.a.size() == n && ip.B.n() == n, ErrorKind::InvalidInput, "interval problem: dimension mismatch");
  require(ip.c1 <= ip.c2, ErrorKind::InvalidInput, "interval problem: c1 must not exceed c2");
  IpClassification out;
  // Unconstrained minimiser of x^T A x - 2 a^T x. The decision value is
  // even in x0, so the sign convention does not matter here.
  auto pre = n > kDenseLimit ? Preconditioner::build(ip.A) : nullptr;
  Operator op = as_operator(ip.A);
  Operator pop;
  if (pre) pop = pre->as_operator();
  out.x0 = pcg_solve(op, ip.a, 1e-13, 20 * n + 200, pre ? &pop : nullptr);
  out.value = ip.B.quad(out.x0);
  if (out.value < ip.c1) {
    out.side = IpSide::LowerActive;
  } else if (out.value > ip.c2) {
    out.side = IpSide::UpperActive;
  } else {
    out.side = IpSide::Interior;
  }
  return out;
}

GtrsProblem ip_to_problem(const IntervalProblem& ip, IpSide side) {
  require(side != IpSide::Interior, ErrorKind::Precondition, "ip_to_problem: interior side has no active constraint");
  const std::size_t n = ip.n();
  GtrsProblem p;
  p.f1.Q = combine(2.0, ip.A, 0.0, ip.A);
  p.f1.b = lincomb(-2.0, ip.a, 0.0, ip.a);
  if (side == IpSide::UpperActive) {
    // x^T B x - c2 <= 0
    p.f2.Q = combine(2.0, ip.B, 0.0, ip.B);
    p.f2.c = -ip.c2;
  } else {
    // c1 - x^T B x <= 0
    p.f2.Q = combine(-2.0, ip.B, 0.0, ip.B);
    p.f2.c = ip.c1;
  }
  p.f2.b.assign(n, 0.0);
  return p;
}

}  // namespace gtrs
