#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace synet {

/* Base type for everything this library throws on purpose. */
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/* Argument outside the mathematical domain of an operation. */
class DomainError : public Error {
 public:
  using Error::Error;
};

/* Iterative solver failed to converge; carries the final residual. */
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/* A contraction or bound required by a certificate does not hold. */
class CertificateError : public Error {
 public:
  using Error::Error;
};

/* Internal-gain estimate reached 1; carries the offending cycle. */
class SmallGainError : public Error {
 public:
  SmallGainError(const std::string& what, std::vector<int> cycle)
      : Error(what), cycle_(std::move(cycle)) {}
  const std::vector<int>& cycle() const { return cycle_; }

 private:
  std::vector<int> cycle_;
};

/* Requested accuracy cannot be met; message names the binding inequality. */
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/* Malformed or inconsistent configuration input. */
class ConfigError : public Error {
 public:
  using Error::Error;
};

/* Network structure violates a declared property. */
class TopologyError : public Error {
 public:
  using Error::Error;
};

/* Construct not representable in this release. */
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/* Abstraction would exceed the configured size cap. */
class SizeError : public Error {
 public:
  using Error::Error;
};

/* Concrete state has no controllable abstract image; carries the node. */
class RefinementError : public Error {
 public:
  RefinementError(const std::string& what, int node) : Error(what), node_(node) {}
  int node() const { return node_; }

 private:
  int node_;
};

/* Per-class controllers cannot be assembled into a network controller. */
class CompositionError : public Error {
 public:
  using Error::Error;
};

}  // namespace synet
