#include "wgf/dynloc.hpp"

#include "wgf/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <variant>

namespace wgf {

double rotating_phase(const StepIndex& step, double z) {
    return comoving_phase(step, z);
}

cplx fourier_factor(const StepIndex& step, int q) {
    return comoving_fourier(step, q, -1.0, 0.0);
}

RotatingFrameFactors rotating_frame_factors(const StepIndex& step, int q_max) {
    RotatingFrameFactors f;
    SystemConfig probe;
    probe.modulation = step;
    f.beta1_mean = mean_principal_beta(probe);
    for (int q = -q_max; q <= q_max; ++q) {
        f.F[q] = fourier_factor(step, q);
    }
    return f;
}

SystemConfig effective_model(const SystemConfig& config, const RotatingFrameFactors& factors,
                             EffectiveDiagonal diagonal) {
    const auto* step = std::get_if<StepIndex>(&config.modulation);
    if (!step) {
        throw ConfigError("effective_model: a step-index modulation is required");
    }
    SystemConfig eff = config;
    eff.modulation = NoModulation{};
    eff.beta1_static = factors.beta1_mean;
    if (diagonal == EffectiveDiagonal::MeanPlusBeta0) {
        eff.beta1_static += step->beta0;
    }
    eff.kappa12_static = config.kappa12_static * std::abs(factors.f0());
    return eff;
}

namespace {

double f0_real(const StepFamily& family, double period) {
    const StepIndex s = family.at(period);
    const double theta = comoving_phase(s, s.duty);
    return std::real(fourier_factor(s, 0) * std::exp(cplx(0.0, 0.5 * theta)));
}

}  // namespace

std::vector<double> find_f0_zeros(const StepFamily& family, double z_lo, double z_hi, int samples,
                                  double tol) {
    if (!(z_lo > 0.0) || !(z_hi > z_lo) || samples < 1) {
        throw std::invalid_argument("find_f0_zeros: need 0 < z_lo < z_hi and samples >= 1");
    }
    std::vector<double> zeros;
    const double h = (z_hi - z_lo) / samples;
    double a = z_lo;
    double fa = f0_real(family, a);
    for (int i = 1; i <= samples; ++i) {
        double b = z_lo + i * h;
        double fb = f0_real(family, b);
        if (fa == 0.0) {
            zeros.push_back(a);
        } else if (fa * fb < 0.0) {
            double lo = a, hi = b, flo = fa;
            while (hi - lo > tol) {
                const double mid = 0.5 * (lo + hi);
                const double fm = f0_real(family, mid);
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            zeros.push_back(0.5 * (lo + hi));
        }
        a = b;
        fa = fb;
    }
    if (fa == 0.0) {
        zeros.push_back(a);
    }
    return zeros;
}

double tail_mean(const std::vector<double>& values, double fraction) {
    if (values.empty()) {
        return 0.0;
    }
    const auto n = values.size();
    const auto first = std::min(n - 1, static_cast<std::size_t>(std::floor((1.0 - fraction) * (n - 1))));
    double sum = 0.0;
    for (auto i = first; i < n; ++i) {
        sum += values[i];
    }
    return sum / static_cast<double>(n - first);
}

MethodComparison compare_methods(const SystemConfig& config, double z_max, const FloquetOptions& floquet,
                                 const FbmOptions& fbm) {
    const auto* step = std::get_if<StepIndex>(&config.modulation);
    if (!step) {
        throw ConfigError("compare_methods: a step-index modulation is required");
    }
    MethodComparison out;
    out.period = step->period;
    const auto factors = rotating_frame_factors(*step);
    out.abs_f0_sq = std::norm(factors.f0());

    const PropagationOptions opt;
    const auto exact = propagate(config, z_max, opt).principal_intensities();
    const auto eff = propagate(effective_model(config, factors), z_max, opt).principal_intensities();
    out.exact_longz = tail_mean(exact);
    out.exact_final = exact.back();
    out.effective_longz = tail_mean(eff);
    out.effective_min = *std::min_element(eff.begin(), eff.end());

    const FbmReport report = find_fbm(config, floquet, fbm);
    out.fbm_count = report.count;
    out.gap_absent = report.gap_absent;
    return out;
}

}  // namespace wgf
