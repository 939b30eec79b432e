#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cazackit {

template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
using ComplexMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

using VectorXcd = ComplexVector<double>;
using MatrixXcd = ComplexMatrix<double>;

/// Raised when an argument violates a documented precondition
/// (non-prime length, bad split, cap exceeded, malformed file, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <typename Scalar>
constexpr Scalar kPi = Scalar(3.141592653589793238462643383279502884L);

}  // namespace cazackit
