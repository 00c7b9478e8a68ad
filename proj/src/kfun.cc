#include "synet/kfun.hh"

#include <cmath>
#include <cstdio>
#include <string>

#include "synet/errors.hh"
#include "synet/util.hh"

namespace synet {

namespace {

using NodePtr = std::shared_ptr<const KFn::Node>;

double eval_node(const KFn::Node& n, double r) {
  switch (n.kind) {
    case KFn::Kind::kLinear:
      return n.c * r;
    case KFn::Kind::kPower:
      return n.c * std::pow(r, n.p);
    case KFn::Kind::kSum:
      return eval_node(*n.a, r) + eval_node(*n.b, r);
    case KFn::Kind::kCompose:
      return eval_node(*n.a, eval_node(*n.b, r));
  }
  return 0.0;
}

bool strict_node(const KFn::Node& n) {
  switch (n.kind) {
    case KFn::Kind::kLinear:
      return n.c > 0.0;
    case KFn::Kind::kPower:
      return n.c > 0.0;
    case KFn::Kind::kSum:
    case KFn::Kind::kCompose:
      return strict_node(*n.a) && strict_node(*n.b);
  }
  return false;
}

std::string describe_node(const KFn::Node& n) {
  char buf[64];
  switch (n.kind) {
    case KFn::Kind::kLinear:
      std::snprintf(buf, sizeof buf, "linear(%g)", n.c);
      return buf;
    case KFn::Kind::kPower:
      std::snprintf(buf, sizeof buf, "power(%g,%g)", n.c, n.p);
      return buf;
    case KFn::Kind::kSum:
      return "sum(" + describe_node(*n.a) + "," + describe_node(*n.b) + ")";
    case KFn::Kind::kCompose:
      return "compose(" + describe_node(*n.a) + "," + describe_node(*n.b) + ")";
  }
  return "?";
}

}  // namespace

KFn KFn::from_node(std::shared_ptr<const Node> n) { return KFn(std::move(n)); }

KFn KFn::linear(double slope) {
  if (!(slope >= 0.0))
    throw DomainError("linear comparison function needs slope >= 0");
  auto n = std::make_shared<Node>();
  n->kind = Kind::kLinear;
  n->c = slope;
  return KFn(n);
}

KFn KFn::power(double scale, double exponent) {
  if (!(scale > 0.0) || !(exponent > 0.0))
    throw DomainError("power comparison function needs scale > 0 and exponent > 0");
  auto n = std::make_shared<Node>();
  n->kind = Kind::kPower;
  n->c = scale;
  n->p = exponent;
  return KFn(n);
}

KFn KFn::sum(const KFn& lhs, const KFn& rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kSum;
  n->a = lhs.root_;
  n->b = rhs.root_;
  return KFn(n);
}

KFn KFn::compose(const KFn& outer, const KFn& inner) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kCompose;
  n->a = outer.root_;
  n->b = inner.root_;
  return KFn(n);
}

double KFn::eval(double r) const {
  if (!(r >= 0.0)) throw DomainError("comparison functions are defined on r >= 0");
  return eval_node(*root_, r);
}

bool KFn::strictly_increasing() const { return strict_node(*root_); }

std::optional<double> KFn::linear_slope() const {
  const Node& n = *root_;
  switch (n.kind) {
    case Kind::kLinear:
      return n.c;
    case Kind::kPower:
      if (n.p == 1.0) return n.c;
      return std::nullopt;
    case Kind::kSum: {
      auto sa = KFn(n.a).linear_slope();
      auto sb = KFn(n.b).linear_slope();
      if (sa && sb) return *sa + *sb;
      return std::nullopt;
    }
    case Kind::kCompose: {
      auto sa = KFn(n.a).linear_slope();
      auto sb = KFn(n.b).linear_slope();
      if (sa && sb) return *sa * *sb;
      return std::nullopt;
    }
  }
  return std::nullopt;
}

double KFn::inverse(double y, double tol) const {
  if (!(y >= 0.0)) throw DomainError("inverse only defined for y >= 0");
  if (y == 0.0) return 0.0;
  const Node& n = *root_;
  if (n.kind == Kind::kLinear) {
    if (n.c == 0.0)
      throw DomainError("zero-slope map has no positive preimage");
    return y / n.c;
  }
  if (n.kind == Kind::kPower) return std::pow(y / n.c, 1.0 / n.p);
  if (!strictly_increasing())
    throw DomainError("inverse of a non-strict comparison function: " + describe());
  // bracket doubling, then bisection on the residual
  double hi = std::max(1.0, y);
  int guard = 0;
  while (eval(hi) < y) {
    hi *= 2.0;
    if (++guard > 200)
      throw NumericError("inverse bracket search failed for " + describe(),
                         y - eval(hi));
  }
  double lo = 0.0;
  double scale = std::max(1.0, y);
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double v = eval(mid);
    if (std::abs(v - y) <= tol * scale) return mid;
    if (v < y)
      lo = mid;
    else
      hi = mid;
  }
  double mid = 0.5 * (lo + hi);
  double res = std::abs(eval(mid) - y);
  if (res <= tol * scale) return mid;
  throw NumericError("inverse bisection did not converge for " + describe(), res);
}

std::string KFn::describe() const { return describe_node(*root_); }

double one_minus(const KFn& kappa, double r) {
  double v = kappa.eval(r);
  if (!(v < r))
    throw CertificateError("contraction violated: " + kappa.describe() +
                           " at r=" + std::to_string(r) + " is not below r");
  return r - v;
}

std::string format_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace synet
