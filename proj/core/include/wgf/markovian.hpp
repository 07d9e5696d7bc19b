// markovian.hpp: weak-coupling (spectral filtering) estimate of the principal-
// waveguide intensity for a harmonically modulated coupling,
//
//     |alpha(z)|^2 = exp(-R(z) Q(z)),   R Q = 2 pi sum_k |g_k|^2 |D_z(beta_k - beta1)|^2.

#pragma once

#include "wgf/model.hpp"

#include <vector>

namespace wgf {

// Discrete noise spectrum of the open array: beta_k = beta + 2 kappa cos(k)/lb with
// k_j = pi j/(L+1), j = 1..L, and equal weights |g_k|^2 = 1/(lb^2 L).
struct NoiseSpectrum {
    std::vector<double> beta_k;
    std::vector<double> weight;

    double total_weight() const;
};

NoiseSpectrum array_noise_spectrum(const SystemConfig& config);

// D_z(beta) = (2 pi)^{-1/2} \int_0^z e^{i beta t} kappa12(t) dt, closed form.
cplx filter_function(const HarmonicCoupling& profile, double beta, double z);

// Q(z) = \int_0^z kappa12(t)^2 dt
double accumulated_coupling(const HarmonicCoupling& profile, double z);

// R(z) Q(z)
double damping_exponent(const NoiseSpectrum& noise, const HarmonicCoupling& profile, double beta1,
                        double z);

// R(z); zero where Q(z) vanishes.
double damping_rate(const NoiseSpectrum& noise, const HarmonicCoupling& profile, double beta1, double z);

// exp(-R(z) Q(z))
double markov_intensity(const NoiseSpectrum& noise, const HarmonicCoupling& profile, double beta1,
                        double z);

struct MarkovComparison {
    std::vector<double> z;
    std::vector<double> markov;
    std::vector<double> exact;
};

// Markovian estimate next to the propagated |A_1(z)|^2 on the propagator's grid.
MarkovComparison compare_with_exact(const SystemConfig& config, double z_max, double dz = 0.0,
                                    std::size_t stride = 1);

}  // namespace wgf
