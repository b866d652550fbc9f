#pragma once

#include <stdexcept>
#include <string>

namespace sfc {

// Base for every recoverable failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A link flow or CPU workload reached the domain limit of its cost function.
class CapacityExceeded : public Error {
 public:
  using Error::Error;
};

// A stage's positive-fraction support contains a directed cycle.
class LoopDetected : public Error {
 public:
  using Error::Error;
};

class NoFeasibleStrategy : public Error {
 public:
  using Error::Error;
};

class NotConverged : public Error {
 public:
  using Error::Error;
};

class ZeroTrafficNode : public Error {
 public:
  using Error::Error;
};

class TooLarge : public Error {
 public:
  using Error::Error;
};

class LocalComputationInfeasible : public Error {
 public:
  using Error::Error;
};

class TopologyError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace sfc
