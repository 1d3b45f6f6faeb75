#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace ellkurt {

/// A sample of n observations (rows) on p variables (columns).
///
/// Construction rejects empty shapes and non-finite entries, so every
/// DataMatrix in the program is a valid input for the estimators.
class DataMatrix {
 public:
  explicit DataMatrix(Eigen::MatrixXd values);

  std::size_t n() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  std::size_t p() const noexcept { return static_cast<std::size_t>(values_.cols()); }

  const Eigen::MatrixXd& values() const noexcept { return values_; }
  double operator()(std::size_t i, std::size_t j) const {
    return values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  auto row(std::size_t i) const { return values_.row(static_cast<Eigen::Index>(i)); }

 private:
  Eigen::MatrixXd values_;
};

}  // namespace ellkurt
