#pragma once

#include <stdexcept>
#include <string>

namespace sensorlift {

// CG did not reach the requested residual within the iteration cap.
class SolverError : public std::runtime_error {
public:
  SolverError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

private:
  double residual_;
};

// Non-positive diffusion value handed to the stiffness assembly.
class DegenerateCoefficient : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Riesz-lift Gram matrix numerically singular.
class DependentSensors : public std::runtime_error {
public:
  DependentSensors(const std::string& what, int index)
      : std::runtime_error(what), index_(index) {}
  int index() const { return index_; }

private:
  int index_;
};

// Circulant embedding produced negative eigenvalues beyond tolerance.
class NonpositiveEmbedding : public std::runtime_error {
public:
  NonpositiveEmbedding(const std::string& what, int suggested_padding)
      : std::runtime_error(what), suggested_padding_(suggested_padding) {}
  int suggested_padding() const { return suggested_padding_; }

private:
  int suggested_padding_;
};

// Serialized artifact (cache/model) malformed or truncated.
class FormatError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sensorlift
