#include "wgf/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace wgf {

GapInfo gap_exists(const SystemConfig& config) {
    const auto w = modulation_frequency(config);
    if (!w) {
        throw ConfigError("gap_exists: configuration is not periodic");
    }
    return gap_exists(config, *w);
}

GapInfo gap_exists(const SystemConfig& config, double omega) {
    const double width = omega - 4.0 * config.kappa / config.lambdabar;
    if (width > 0.0) {
        return {true, width};
    }
    return {false, 0.0};
}

std::vector<Interval> folded_band(const SystemConfig& config, double omega) {
    const auto [lo, hi] = band_edges(config);
    const double half = 0.5 * omega;
    if (hi - lo >= omega) {
        return {{-half, half}};
    }
    const double a = fold_into_zone(lo, omega);
    const double b = a + (hi - lo);
    if (b <= half) {
        return {{a, b}};
    }
    return {{-half, b - omega}, {a, half}};
}

double distance_to_band(const std::vector<Interval>& band, double eps, double omega) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& iv : band) {
        if (iv.contains(eps)) {
            return 0.0;
        }
        best = std::min({best, zone_distance(eps, iv.lo, omega), zone_distance(eps, iv.hi, omega)});
    }
    return best;
}

FbmReport gap_absent_report(const SystemConfig& config) {
    FbmReport r;
    r.omega = modulation_frequency(config).value_or(0.0);
    r.band = folded_band(config, r.omega);
    r.gap_absent = true;
    return r;
}

FbmReport detect_fbm(const FloquetSpectrum& spectrum, const SystemConfig& config,
                     const FbmOptions& options) {
    const double omega = spectrum.omega;
    const GapInfo gap = gap_exists(config, omega);
    if (!gap.exists) {
        FbmReport r = gap_absent_report(config);
        r.omega = omega;
        r.band = folded_band(config, omega);
        return r;
    }
    FbmReport r;
    r.omega = omega;
    r.gap_width = gap.width;
    r.band = folded_band(config, omega);
    const double tol = options.tol_gap_factor * omega;

    for (std::size_t i = 0; i < spectrum.modes.size(); ++i) {
        const auto& mode = spectrum.modes[i];
        const double eps = fold_into_zone(mode.quasienergy, omega);
        if (distance_to_band(r.band, eps, omega) <= tol) {
            continue;
        }
        const double w1 = mode.principal_weight();
        if (w1 <= options.w_min) {
            continue;
        }
        const Eigen::VectorXcd u0 = mode_profile(spectrum, static_cast<int>(i), 0.0);
        r.quasienergies.push_back(eps);
        r.overlaps.push_back(std::conj(u0(0)));
        r.mode_indices.push_back(static_cast<int>(i));
        r.principal_weights.push_back(w1);
    }
    r.count = static_cast<int>(r.mode_indices.size());
    if (r.count > 2) {
        std::ostringstream msg;
        msg << r.count << " bound-mode candidates in the gap; at most two are expected"
            << " (check the truncation or the detection thresholds)";
        throw FbmCountError(msg.str());
    }
    return r;
}

FbmReport find_fbm(const SystemConfig& config, const FloquetOptions& floquet,
                   const FbmOptions& options) {
    if (!gap_exists(config).exists) {
        return gap_absent_report(config);
    }
    return detect_fbm(solve_spectrum(config, floquet), config, options);
}

namespace {

cplx term(const FbmReport& report, const FloquetSpectrum& spectrum, std::size_t l, double z) {
    const int alpha = report.mode_indices[l];
    const double eps = spectrum.modes[static_cast<std::size_t>(alpha)].quasienergy;
    return report.overlaps[l] * std::exp(cplx(0.0, -eps * z)) * mode_profile(spectrum, alpha, z)(0);
}

}  // namespace

cplx asymptotic_amplitude(const FbmReport& report, const FloquetSpectrum& spectrum, double z) {
    cplx sum{0.0, 0.0};
    for (std::size_t l = 0; l < report.mode_indices.size(); ++l) {
        sum += term(report, spectrum, l, z);
    }
    return sum;
}

double asymptotic_intensity(const FbmReport& report, const FloquetSpectrum& spectrum, double z) {
    return std::norm(asymptotic_amplitude(report, spectrum, z));
}

IntensityTerms asymptotic_terms(const FbmReport& report, const FloquetSpectrum& spectrum, double z) {
    IntensityTerms out;
    std::vector<cplx> t;
    for (std::size_t l = 0; l < report.mode_indices.size(); ++l) {
        t.push_back(term(report, spectrum, l, z));
        out.diagonal += std::norm(t.back());
    }
    for (std::size_t i = 0; i < t.size(); ++i) {
        for (std::size_t j = i + 1; j < t.size(); ++j) {
            out.interference += 2.0 * std::real(t[i] * std::conj(t[j]));
        }
    }
    return out;
}

}  // namespace wgf
