#pragma once

#include <stdexcept>
#include <string>

namespace susypiv {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Series evaluation ran into the term cap (argument outside the working range).
class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// A Wronskian vanished relative to its entry scale; the transformation is singular at `x`.
class SingularWronskian : public Error {
 public:
  SingularWronskian(double x, int order)
      : Error("singular Wronskian of order " + std::to_string(order) +
              " at x=" + std::to_string(x)),
        x_(x),
        order_(order) {}
  double x() const noexcept { return x_; }
  int order() const noexcept { return order_; }

 private:
  double x_;
  int order_;
};

/// Seed or seed set that cannot drive a transformation (vanishing chain
/// element, identically zero solution, rejected classification).
class DegenerateSeed : public Error {
 public:
  using Error::Error;
};

/// A Crum image that vanishes identically (input proportional to a seed).
class AnnihilatedState : public Error {
 public:
  using Error::Error;
};

/// Too many grid points where the distinguished extremal state vanishes.
class ExtremalStateZero : public Error {
 public:
  using Error::Error;
};

}  // namespace susypiv
