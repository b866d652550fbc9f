#include "sfc/cost.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sfc/errors.hpp"

namespace sfc {

CostFunction CostFunction::linear(double slope) {
  if (!(slope >= 0.0) || !std::isfinite(slope)) {
    throw std::invalid_argument("linear cost slope must be finite and >= 0");
  }
  return CostFunction(Kind::Linear, slope);
}

CostFunction CostFunction::queue(double capacity) {
  if (!(capacity > 0.0) || !std::isfinite(capacity)) {
    throw std::invalid_argument("queue capacity must be finite and > 0");
  }
  return CostFunction(Kind::Queue, capacity);
}

double CostFunction::capacity() const {
  return kind_ == Kind::Queue ? param_ : kInf;
}

bool CostFunction::in_domain(double x) const {
  return x >= 0.0 && x < capacity();
}

double CostFunction::eval(double x) const {
  if (kind_ == Kind::Linear) return param_ * x;
  if (!(x < param_)) {
    throw CapacityExceeded("queue cost evaluated at " + std::to_string(x) +
                           " >= capacity " + std::to_string(param_));
  }
  return x / (param_ - x);
}

double CostFunction::prime(double x) const {
  if (kind_ == Kind::Linear) return param_;
  if (!(x < param_)) {
    throw CapacityExceeded("queue marginal evaluated at " + std::to_string(x) +
                           " >= capacity " + std::to_string(param_));
  }
  const double gap = param_ - x;
  return param_ / (gap * gap);
}

double eval_cost(const CostFunction& c, double x) { return c.eval(x); }
double eval_cost_prime(const CostFunction& c, double x) { return c.prime(x); }

}  // namespace sfc
