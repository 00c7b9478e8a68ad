#pragma once

#include <memory>
#include <optional>
#include <string>

namespace synet {

/* Monotone comparison-function algebra backing all certificate arithmetic.
   Trees are built from Linear and Power leaves combined by Sum and
   Composition.  Leaves with positive coefficients are strictly increasing
   and unbounded on [0, inf) with f(0) = 0; a zero Linear slope is admitted
   so memoryless terms can be written uniformly. */
class KFn {
 public:
  enum class Kind { kLinear, kPower, kSum, kCompose };

  struct Node {
    Kind kind;
    double c = 0.0;  // slope or scale
    double p = 1.0;  // exponent (kPower only)
    std::shared_ptr<const Node> a, b;
  };

  static KFn linear(double slope);
  static KFn power(double scale, double exponent);
  static KFn identity() { return linear(1.0); }
  static KFn sum(const KFn& lhs, const KFn& rhs);
  static KFn compose(const KFn& outer, const KFn& inner);

  double eval(double r) const;

  /* Solves eval(r) = y for r >= 0.  Closed form for leaves; monotone
     bisection with bracket doubling otherwise.  Post:
     |eval(result) - y| <= tol * max(1, y). */
  double inverse(double y, double tol = 1e-12) const;

  /* True when every leaf coefficient is strictly positive, making the whole
     tree strictly increasing and unbounded. */
  bool strictly_increasing() const;

  /* Slope when the tree collapses to a single linear map, else nullopt. */
  std::optional<double> linear_slope() const;

  std::string describe() const;

  const Node& root() const { return *root_; }
  std::shared_ptr<const Node> share() const { return root_; }
  static KFn from_node(std::shared_ptr<const Node> n);

 private:
  explicit KFn(std::shared_ptr<const Node> n) : root_(std::move(n)) {}
  std::shared_ptr<const Node> root_;
};

/* r - kappa(r); requires kappa(r) < r. */
double one_minus(const KFn& kappa, double r);

}  // namespace synet
