#include "wgf/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

namespace wgf::linalg {

namespace {

void check(lapack_int info, const char* routine) {
    if (info != 0) {
        throw EigenError(std::string(routine) + " failed with info = " + std::to_string(info));
    }
}

// Some OpenBLAS builds pick kernels that return wrong results on newer CPUs
// (observed: 0.3.20 selecting its Cooperlake kernels on Sapphire Rapids). The
// failure only shows for n >= ~100, so solve one deterministic matrix of that
// size and check it with Eigen's own (BLAS-free) arithmetic.
void self_check_once() {
    static std::once_flag flag;
    std::call_once(flag, [] {
        const int n = 160;
        Eigen::MatrixXd a(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j <= i; ++j) {
                a(i, j) = a(j, i) = std::sin(0.37 * (i + 1) * (j + 2)) + (i == j ? 0.01 * i : 0.0);
            }
        }
        Eigen::MatrixXd v = a;
        Eigen::VectorXd w(n);
        check(LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, v.data(), n, w.data()), "dsyevd");
        const double res = (a.lazyProduct(v) - v * w.asDiagonal()).norm() / a.norm();
        if (!(res < 1e-10)) {
            throw EigenError("LAPACK self-check failed (relative residual " + std::to_string(res) +
                             "); the BLAS library returns wrong results on this CPU. With OpenBLAS, "
                             "set OPENBLAS_CORETYPE=Haswell (or another supported core type).");
        }
    });
}

// Cheap per-solve guard: a few columns must stay orthonormal.
template <class Matrix>
void check_columns(const Matrix& v, const char* routine) {
    const auto n = v.cols();
    if (n < 2) {
        return;
    }
    const Eigen::Index picks[] = {0, n / 3, n / 2, n - 1};
    double worst = 0.0;
    for (auto i : picks) {
        worst = std::max(worst, std::abs(v.col(i).squaredNorm() - 1.0));
        for (auto j : picks) {
            if (j != i) {
                worst = std::max(worst, std::abs(v.col(i).dot(v.col(j))));
            }
        }
    }
    if (!(worst < 1e-8)) {
        throw EigenError(std::string(routine) + " returned non-orthonormal eigenvectors (error " +
                         std::to_string(worst) + ")");
    }
}

}  // namespace

RealEigensystem eigh(Eigen::MatrixXd&& a) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("eigh: matrix must be square");
    }
    self_check_once();
    const auto n = static_cast<lapack_int>(a.rows());
    RealEigensystem out;
    out.values.resize(n);
    if (n > 0) {
        check(LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, a.data(), n, out.values.data()),
              "dsyevd");
    }
    check_columns(a, "dsyevd");
    out.vectors = std::move(a);
    return out;
}

ComplexEigensystem eigh(Eigen::MatrixXcd&& a) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("eigh: matrix must be square");
    }
    self_check_once();
    const auto n = static_cast<lapack_int>(a.rows());
    ComplexEigensystem out;
    out.values.resize(n);
    if (n > 0) {
        check(LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                             reinterpret_cast<lapack_complex_double*>(a.data()), n,
                             out.values.data()),
              "zheevd");
    }
    check_columns(a, "zheevd");
    out.vectors = std::move(a);
    return out;
}

Eigen::VectorXd eigvalsh(Eigen::MatrixXcd a) {
    self_check_once();
    const auto n = static_cast<lapack_int>(a.rows());
    Eigen::VectorXd w(n);
    if (n > 0) {
        check(LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n,
                             reinterpret_cast<lapack_complex_double*>(a.data()), n, w.data()),
              "zheevd");
    }
    return w;
}

}  // namespace wgf::linalg
