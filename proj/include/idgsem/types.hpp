#pragma once

#include <Eigen/Core>

namespace idgsem {

template <class Scalar>
using mat_t = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
using vec_t = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using mat = mat_t<double>;
using vec = vec_t<double>;

/// Nodal DG solution: one row per cell, one column per Gauss-Lobatto node.
using Field = mat;

}  // namespace idgsem
