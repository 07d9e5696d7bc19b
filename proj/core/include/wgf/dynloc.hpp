// dynloc.hpp: conventional dynamic-localization treatment of the step profile.
// In the frame rotating with the principal-waveguide phase the coupling carries
// the factors F_q; keeping only F_0 leaves a static model with kappa12 -> kappa12 F_0,
// which decouples the principal waveguide wherever F_0 = 0.

#pragma once

#include "wgf/analysis.hpp"
#include "wgf/floquet.hpp"
#include "wgf/model.hpp"

#include <map>
#include <vector>

namespace wgf {

// phi(z) = \int_0^z (beta1 - mean beta1); continuous, Z-periodic, phi(0) = phi(Z) = 0.
double rotating_phase(const StepIndex& step, double z);

// F_q = Z^{-1} \int_0^Z exp(-i phi(z) - i q omega z) dz, closed form.
cplx fourier_factor(const StepIndex& step, int q);

struct RotatingFrameFactors {
    double beta1_mean{0.0};
    std::map<int, cplx> F;  // q in [-q_max, q_max]

    cplx f0() const { return F.at(0); }
};

RotatingFrameFactors rotating_frame_factors(const StepIndex& step, int q_max = 0);

// Diagonal entry of the principal waveguide in the effective model.
enum class EffectiveDiagonal {
    Mean,              // lambdabar * mean beta1 (exact rotating-frame result)
    MeanPlusBeta0,     // lambdabar * (mean beta1 + beta0), the displayed block matrix
};

// Static model: kappa12 -> kappa12 |F_0| (the phase of F_0 is a gauge on waveguide 1).
SystemConfig effective_model(const SystemConfig& config, const RotatingFrameFactors& factors,
                             EffectiveDiagonal diagonal = EffectiveDiagonal::Mean);

// Family of step profiles swept in Z with a fixed duty ratio Z'/Z.
struct StepFamily {
    double beta0{0.5};
    double delta{1.0};
    double duty_ratio{0.4};

    StepIndex at(double period) const { return {beta0, delta, period, duty_ratio * period}; }
};

// Zeros of F_0 in [z_lo, z_hi]: sign changes of the real function
// F_0 e^{i phi(Z')/2} on `samples` grid intervals, refined by bisection to tol.
std::vector<double> find_f0_zeros(const StepFamily& family, double z_lo, double z_hi, int samples,
                                  double tol = 1e-8);

struct MethodComparison {
    double period{0.0};
    double abs_f0_sq{0.0};
    double effective_longz{0.0};  // mean |A_1|^2 over the last 20 % of [0, z_max]
    double exact_longz{0.0};
    double exact_final{0.0};      // |A_1(z_max)|^2
    double effective_min{0.0};    // min |A_1|^2 of the effective model over [0, z_max]
    int fbm_count{0};
    bool gap_absent{false};
};

MethodComparison compare_methods(const SystemConfig& config, double z_max,
                                 const FloquetOptions& floquet = {}, const FbmOptions& fbm = {});

// Long-z mean of the last `fraction` of a sampled intensity.
double tail_mean(const std::vector<double>& values, double fraction = 0.2);

}  // namespace wgf
