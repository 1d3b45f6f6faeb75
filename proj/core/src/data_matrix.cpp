#include "ellkurt/data_matrix.hpp"

#include "ellkurt/error.hpp"

#include <utility>

namespace ellkurt {

DataMatrix::DataMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw Error(ErrorCode::InvalidParameter, "data matrix must have n >= 1 and p >= 1");
  }
  if (!values_.allFinite()) {
    throw Error(ErrorCode::InvalidParameter, "data matrix contains non-finite entries");
  }
}

}  // namespace ellkurt
