#pragma once

#include <limits>

namespace sfc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Convex, increasing cost of a link flow or CPU workload.
//
//   Linear: D(x) = slope * x
//   Queue:  D(x) = x / (capacity - x), the M/M/1 occupancy, defined on [0, capacity)
class CostFunction {
 public:
  enum class Kind { Linear, Queue };

  static CostFunction linear(double slope);
  static CostFunction queue(double capacity);

  Kind kind() const { return kind_; }
  // Slope for Linear, capacity for Queue.
  double parameter() const { return param_; }
  // +inf for Linear.
  double capacity() const;
  bool in_domain(double x) const;

  // Both throw CapacityExceeded outside the domain.
  double eval(double x) const;
  double prime(double x) const;

  bool operator==(const CostFunction&) const = default;

 private:
  CostFunction(Kind kind, double param) : kind_(kind), param_(param) {}

  Kind kind_;
  double param_;
};

double eval_cost(const CostFunction& c, double x);
double eval_cost_prime(const CostFunction& c, double x);

}  // namespace sfc
