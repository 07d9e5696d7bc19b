#pragma once

#include "wgf/model.hpp"

#include <numbers>

namespace fixture {

inline wgf::SystemConfig harmonic(double a, int L, double omega = 8.0) {
    wgf::SystemConfig c;
    c.array_size = L;
    c.beta = 0.2;
    c.beta1_static = 6.5;
    c.modulation = wgf::HarmonicCoupling{a, omega, 0.6};
    return c;
}

inline wgf::SystemConfig gap_family(double omega, int L) {
    wgf::SystemConfig c;
    c.array_size = L;
    c.beta = 0.1;
    c.beta1_static = 3.0;
    c.modulation = wgf::HarmonicCoupling{1.0, omega, 0.5};
    return c;
}

inline wgf::SystemConfig step(double delta, int L, double Z = 0.25 * std::numbers::pi,
                              double Zp = 0.1 * std::numbers::pi) {
    wgf::SystemConfig c;
    c.array_size = L;
    c.beta = 0.5;
    c.kappa12_static = 0.5;
    c.modulation = wgf::StepIndex{0.5, delta, Z, Zp};
    return c;
}

inline wgf::SystemConfig two_level() {
    wgf::SystemConfig c;
    c.array_size = 1;
    c.beta = 0.3;
    c.beta1_static = 0.3;
    c.kappa12_static = 0.5;
    return c;
}

}  // namespace fixture
