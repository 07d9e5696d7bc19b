// linalg.hpp: dense Hermitian eigensolvers backed by LAPACK (divide and conquer).

#pragma once

#include <Eigen/Dense>

#include <stdexcept>

namespace wgf::linalg {

class EigenError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RealEigensystem {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // orthonormal columns
};

struct ComplexEigensystem {
    Eigen::VectorXd values;
    Eigen::MatrixXcd vectors;
};

// Consumes the matrix: its storage becomes the eigenvector matrix.
RealEigensystem eigh(Eigen::MatrixXd&& symmetric);
ComplexEigensystem eigh(Eigen::MatrixXcd&& hermitian);

Eigen::VectorXd eigvalsh(Eigen::MatrixXcd hermitian);

}  // namespace wgf::linalg
