#pragma once

#include <stdexcept>
#include <string>

namespace natline {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Envelope table is empty, unsorted, or fails the pi-pulse area condition.
class InvalidEnvelope : public Error {
 public:
  using Error::Error;
};

/// Adaptive ODE integration could not continue (step size underflow).
class IntegrationFailure : public Error {
 public:
  IntegrationFailure(const std::string& what, double time_reached)
      : Error(what), time_reached_(time_reached) {}

  double time_reached() const noexcept { return time_reached_; }

 private:
  double time_reached_;
};

/// Quadrature did not reach the requested tolerance.
class QuadratureFailure : public Error {
 public:
  QuadratureFailure(const std::string& what, double achieved_error)
      : Error(what), achieved_error_(achieved_error) {}

  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

/// A requested spectral moment does not exist (non-integrable tail).
class DivergentMoment : public Error {
 public:
  DivergentMoment(const std::string& what, int order)
      : Error(what), order_(order) {}

  int order() const noexcept { return order_; }

 private:
  int order_;
};

}  // namespace natline
