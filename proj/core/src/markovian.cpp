#include "wgf/markovian.hpp"

#include "wgf/propagator.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <variant>

namespace wgf {

double NoiseSpectrum::total_weight() const {
    return std::accumulate(weight.begin(), weight.end(), 0.0);
}

NoiseSpectrum array_noise_spectrum(const SystemConfig& config) {
    const int n = config.array_size;
    if (n < 1) {
        throw ConfigError("array_noise_spectrum: L must be >= 1");
    }
    const double lb = config.lambdabar;
    NoiseSpectrum s;
    s.beta_k.reserve(static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j) {
        const double k = std::numbers::pi * j / (n + 1);
        s.beta_k.push_back(config.beta + 2.0 * config.kappa * std::cos(k) / lb);
    }
    s.weight.assign(static_cast<std::size_t>(n), 1.0 / (lb * lb * n));
    return s;
}

cplx filter_function(const HarmonicCoupling& p, double beta, double z) {
    if (z < 0.0) {
        throw std::invalid_argument("filter_function: z must be >= 0");
    }
    const cplx sum = 0.5 * p.a * oscillatory_integral(beta + p.omega, z) +
                     0.5 * p.a * oscillatory_integral(beta - p.omega, z) +
                     p.b * oscillatory_integral(beta, z);
    return sum / std::sqrt(2.0 * std::numbers::pi);
}

double accumulated_coupling(const HarmonicCoupling& p, double z) {
    const double w = p.omega;
    return (0.5 * p.a * p.a + p.b * p.b) * z + 2.0 * p.a * p.b / w * std::sin(w * z) +
           p.a * p.a / (4.0 * w) * std::sin(2.0 * w * z);
}

double damping_exponent(const NoiseSpectrum& noise, const HarmonicCoupling& p, double beta1, double z) {
    double sum = 0.0;
    for (std::size_t k = 0; k < noise.beta_k.size(); ++k) {
        sum += noise.weight[k] * std::norm(filter_function(p, noise.beta_k[k] - beta1, z));
    }
    return 2.0 * std::numbers::pi * sum;
}

double damping_rate(const NoiseSpectrum& noise, const HarmonicCoupling& p, double beta1, double z) {
    const double q = accumulated_coupling(p, z);
    return q > 0.0 ? damping_exponent(noise, p, beta1, z) / q : 0.0;
}

double markov_intensity(const NoiseSpectrum& noise, const HarmonicCoupling& p, double beta1, double z) {
    return std::exp(-damping_exponent(noise, p, beta1, z));
}

MarkovComparison compare_with_exact(const SystemConfig& config, double z_max, double dz,
                                    std::size_t stride) {
    const auto* p = std::get_if<HarmonicCoupling>(&config.modulation);
    if (!p) {
        throw ConfigError("the Markovian estimate needs a harmonic coupling modulation");
    }
    PropagationOptions opt;
    opt.dz = dz;
    opt.stride = stride;
    const AmplitudeTrace trace = propagate(config, z_max, opt);
    const NoiseSpectrum noise = array_noise_spectrum(config);

    MarkovComparison out;
    out.z = trace.z;
    out.exact = trace.principal_intensities();
    out.markov.reserve(trace.size());
    for (double z : trace.z) {
        out.markov.push_back(markov_intensity(noise, *p, config.beta1_static, z));
    }
    return out;
}

}  // namespace wgf
