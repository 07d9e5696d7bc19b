// analysis.hpp: Floquet bound modes (FBMs) in the quasienergy gap and the
// asymptotic principal-waveguide intensity they sustain.

#pragma once

#include "wgf/floquet.hpp"
#include "wgf/model.hpp"

#include <stdexcept>
#include <vector>

namespace wgf {

class FbmCountError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GapInfo {
    bool exists{false};
    double width{0.0};  // max(0, omega - 4 kappa / lambdabar)
};

// Gap of the folded single-band spectrum; exists iff omega > 4 kappa / lambdabar.
GapInfo gap_exists(const SystemConfig& config);
GapInfo gap_exists(const SystemConfig& config, double omega);

struct Interval {
    double lo{0.0};
    double hi{0.0};
    bool contains(double x) const noexcept { return x >= lo && x <= hi; }
};

// Image of [beta - 2 kappa/lb, beta + 2 kappa/lb] folded into (-omega/2, omega/2];
// one interval, or two when the band straddles the zone edge, or the whole zone.
std::vector<Interval> folded_band(const SystemConfig& config, double omega);

// Circular distance from eps to the nearest point of the intervals (0 inside).
double distance_to_band(const std::vector<Interval>& band, double eps, double omega);

struct FbmOptions {
    double tol_gap_factor{1e-3};  // tol_gap = factor * omega
    double w_min{0.05};
};

struct FbmReport {
    int count{0};
    std::vector<double> quasienergies;  // folded
    std::vector<cplx> overlaps;         // d = u(0)^dagger A(0)
    std::vector<int> mode_indices;      // into FloquetSpectrum::modes
    std::vector<double> principal_weights;
    std::vector<Interval> band;
    double omega{0.0};
    double gap_width{0.0};
    bool gap_absent{false};
};

// Throws FbmCountError for more than two candidates.
FbmReport detect_fbm(const FloquetSpectrum& spectrum, const SystemConfig& config,
                     const FbmOptions& options = {});

// Report for a configuration without a gap; no spectrum needed.
FbmReport gap_absent_report(const SystemConfig& config);

// Solves the spectrum only when a gap exists.
FbmReport find_fbm(const SystemConfig& config, const FloquetOptions& floquet = {},
                   const FbmOptions& options = {});

// sum_l d_l e^{-i eps_l z} u_l(z)[waveguide 1]
cplx asymptotic_amplitude(const FbmReport& report, const FloquetSpectrum& spectrum, double z);
double asymptotic_intensity(const FbmReport& report, const FloquetSpectrum& spectrum, double z);

struct IntensityTerms {
    double diagonal{0.0};      // sum_l |d_l u_l(z)[1]|^2
    double interference{0.0};  // 2 Re(t_1 conj(t_2)), oscillating at eps_1 - eps_2
    double total() const noexcept { return diagonal + interference; }
};
IntensityTerms asymptotic_terms(const FbmReport& report, const FloquetSpectrum& spectrum, double z);

}  // namespace wgf
