// Independent reference computations used only by the tests: adaptive
// Gauss-Kronrod quadrature of the defining integrals and small dense helpers.

#pragma once

#include "wgf/model.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

inline double integrate(const std::function<double(double)>& f, double a, double b) {
    using boost::math::quadrature::gauss_kronrod;
    double err = 0.0;
    return gauss_kronrod<double, 61>::integrate(f, a, b, 12, 1e-13, &err);
}

// Splits [a, b] at the given points so that every piece is smooth.
inline cplx integrate_c(const std::function<cplx(double)>& f, double a, double b,
                        std::vector<double> breaks = {}) {
    breaks.push_back(a);
    breaks.push_back(b);
    std::sort(breaks.begin(), breaks.end());
    cplx total{0.0, 0.0};
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double lo = std::max(a, breaks[i]);
        const double hi = std::min(b, breaks[i + 1]);
        if (hi <= lo) continue;
        const double re = integrate([&](double t) { return f(t).real(); }, lo, hi);
        const double im = integrate([&](double t) { return f(t).imag(); }, lo, hi);
        total += cplx(re, im);
    }
    return total;
}

// beta1(z) of a step profile, straight from the definition.
inline double step_beta(const wgf::StepIndex& s, double z) {
    const double t = z - s.period * std::floor(z / s.period);
    return t < s.duty ? s.beta0 : s.beta0 + s.delta;
}

inline double step_mean(const wgf::StepIndex& s) {
    return integrate([&](double z) { return step_beta(s, z); }, 0.0, s.duty) / s.period +
           integrate([&](double z) { return step_beta(s, z); }, s.duty, s.period) / s.period;
}

// \int_0^z (beta1 - mean) by quadrature.
inline double step_phase(const wgf::StepIndex& s, double z) {
    const double mean = step_mean(s);
    auto f = [&](double t) { return step_beta(s, t) - mean; };
    double acc = 0.0;
    double lo = 0.0;
    while (lo < z) {
        const double cell = s.period * std::floor(lo / s.period + 1e-12);
        double hi = std::min(z, lo < cell + s.duty ? cell + s.duty : cell + s.period);
        if (hi <= lo) hi = std::min(z, cell + s.period);
        acc += integrate(f, lo, hi);
        lo = hi;
    }
    return acc;
}

// Dense exp(-i M z / lambdabar) through Eigen's matrix exponential.
inline Eigen::MatrixXcd expm(const Eigen::MatrixXcd& m, double z, double lambdabar = 1.0) {
    Eigen::MatrixXcd a = cplx(0.0, -z / lambdabar) * m;
    return a.exp();
}

}  // namespace oracle
