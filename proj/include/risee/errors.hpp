// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace risee {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// H^H H is rank-deficient or its condition estimate exceeds the cap.
class SingularChannel : public Error {
 public:
  using Error::Error;
};

// sum_k t_k p_min > Pmax: no allocation satisfies both floors and budget.
class Infeasible : public Error {
 public:
  using Error::Error;
};

class NoFeasibleStart : public Error {
 public:
  using Error::Error;
};

class NoFeasibleRounding : public Error {
 public:
  using Error::Error;
};

class SolverFailure : public Error {
 public:
  using Error::Error;
};

class RelaxationInfeasible : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public Error {
 public:
  using Error::Error;
};

class AllInfeasible : public Error {
 public:
  using Error::Error;
};

}  // namespace risee
