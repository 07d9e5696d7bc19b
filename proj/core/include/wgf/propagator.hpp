// propagator.hpp: integration of i lambdabar dA/dz = M(z) A(z).
//
// The generic path is a fixed-step classical Runge-Kutta scheme. Steps are split
// at every discontinuity of M(z), so a step never straddles a jump of a step
// profile. Piecewise-constant configurations additionally admit an exact path
// built from matrix exponentials of the constant segments.

#pragma once

#include "wgf/model.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace wgf {

class StepSizeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AmplitudeTrace {
    std::vector<double> z;
    std::vector<Eigen::VectorXcd> amplitudes;
    std::string config_hash;

    std::size_t size() const noexcept { return z.size(); }

    // |A(0)^T A(z_i)|^2, which is |A_1(z_i)|^2 for light injected into waveguide 1.
    double principal_intensity(std::size_t i) const;
    std::vector<double> principal_intensities() const;
    double intensity(std::size_t i, int waveguide) const;

    // max_i | sum_j |A_j(z_i)|^2 - sum_j |A_j(0)|^2 |
    double max_norm_drift() const;
};

struct PropagationOptions {
    double dz{0.0};               // 0 selects default_step()
    std::size_t stride{1};        // keep every stride-th sample
    double drift_limit{1e-6};     // StepSizeError beyond this norm drift
};

// min(Z / 400, 0.005 lambdabar); 0.005 lambdabar for static configurations.
double default_step(const SystemConfig& config);

Eigen::VectorXcd injected_state(const SystemConfig& config);

AmplitudeTrace propagate(const SystemConfig& config, double z_max, double dz, std::size_t stride = 1);
AmplitudeTrace propagate(const SystemConfig& config, double z_max, const PropagationOptions& options);
AmplitudeTrace propagate(const SystemConfig& config, const Eigen::VectorXcd& initial, double z_max,
                         const PropagationOptions& options);

// Product of exact segment propagators; StepIndex and static configurations only.
AmplitudeTrace propagate_exact(const SystemConfig& config, double z_max, double dz,
                               std::size_t stride = 1);

// One-period propagator U(Z), integrated column by column with the same scheme.
Eigen::MatrixXcd monodromy(const SystemConfig& config, double dz = 0.0);

// U(Z) from matrix exponentials of the two constant segments of a step profile.
Eigen::MatrixXcd exact_monodromy(const SystemConfig& config);

// exp(-i M length / lambdabar) for a constant Hermitian M.
Eigen::MatrixXcd segment_propagator(const CouplingMatrix& m, double length, double lambdabar);

// Quasienergies -arg(lambda)/Z of the monodromy eigenvalues, folded and sorted.
std::vector<double> monodromy_quasienergies(const Eigen::MatrixXcd& u, double period);

}  // namespace wgf
