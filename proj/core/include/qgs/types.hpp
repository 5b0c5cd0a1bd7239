#pragma once

#include <Eigen/Dense>
#include <complex>

namespace qgs {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

} // namespace qgs
