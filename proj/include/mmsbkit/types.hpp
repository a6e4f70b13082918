#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace mmsb {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;
using IndexList = std::vector<Index>;

}  // namespace mmsb
