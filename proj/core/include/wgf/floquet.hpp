// floquet.hpp: quasienergy spectrum of the z-periodic coupled-mode equations.
//
// The quasistationary modes u(z) = sum_m e^{i m omega z} u~(m) solve the truncated
// Fourier-block eigenproblem
//
//     sum_m [M~_{n-m} + m lambdabar omega delta_{mn}] u~(m) = lambdabar eps u~(n),
//
// harmonics m in [-N, N]. Every eigenvalue appears with replicas eps + n omega;
// one physical representative per replica family is kept and folded into the
// first Brillouin zone (-omega/2, omega/2].
//
// Harmonic coupling modulation is solved directly in this lab-frame basis, where
// the extended matrix is real symmetric. A step profile is solved in the frame
// co-moving with the principal-waveguide phase, u(z) = P(z) v(z),
// P(z) = diag(e^{-i phi(z)}, 1, ..., 1), phi = comoving_phase: this is an exact
// unitary change of basis that removes the jump from the diagonal, so the Fourier
// blocks decay as 1/q^2 instead of 1/q. With the time origin placed at Z'/2 the
// blocks are real as well. Mode components stored in FloquetSpectrum are then
// those of v(z); mode_profile() applies P(z).

#pragma once

#include "wgf/model.hpp"

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <vector>

namespace wgf {

class ConvergenceFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class FloquetFrame { Lab, CoMoving };

struct FloquetMode {
    double quasienergy{0.0};  // folded, units 1/lambdabar
    int first_harmonic{0};    // harmonic index of components.front()
    std::vector<Eigen::VectorXcd> components;
    double central_weight{0.0};  // ||u~(0)||^2 of the selected replica

    int last_harmonic() const noexcept {
        return first_harmonic + static_cast<int>(components.size()) - 1;
    }
    // Zero vector outside the stored range.
    Eigen::VectorXcd component(int m) const;
    // sum_m |u~(m)[waveguide 1]|^2, the period-averaged principal intensity.
    double principal_weight() const;
    double norm_squared() const;
};

struct FloquetSpectrum {
    double omega{0.0};
    double lambdabar{1.0};
    int n_harmonics{0};
    int dimension{0};  // L + 1
    FloquetFrame frame{FloquetFrame::Lab};
    std::optional<StepIndex> comoving;  // set for FloquetFrame::CoMoving
    std::vector<FloquetMode> modes;     // ascending quasienergy
    std::vector<double> raw_eigenvalues;  // all eigenvalues of the extended matrix / lambdabar

    std::vector<double> quasienergies() const;
    std::size_t size() const noexcept { return modes.size(); }
};

struct FloquetOptions {
    int n_harmonics{0};               // 0 selects default_harmonics()
    bool verify_convergence{false};   // compare against doubled truncation
    double convergence_tol{1e-8};
    int max_doublings{2};
    bool force_lab_frame{false};      // solve the complex lab-frame matrix as written
    double family_tol{1e-9};          // replica-family identification
};

// ceil((|lb beta1|_max + |a| + |b| + |lb delta| + 4 kappa) / (lb omega)) + 8; for a
// step profile kappa12 takes the place of b.
int default_harmonics(const SystemConfig& config);

// Lab-frame extended matrix of size (2N+1)(L+1), harmonic-major ordering
// (block index m + N). omega_static supplies a frequency for an unmodulated config.
Eigen::MatrixXcd build_extended_matrix(const SystemConfig& config, int n_harmonics,
                                       double omega_static = 0.0);

// Real symmetric matrix actually diagonalised by solve_spectrum for the chosen frame.
Eigen::MatrixXd build_solver_matrix(const SystemConfig& config, int n_harmonics,
                                    double omega_static = 0.0);

FloquetSpectrum solve_spectrum(const SystemConfig& config, int n_harmonics);
FloquetSpectrum solve_spectrum(const SystemConfig& config, const FloquetOptions& options);
// Unmodulated configuration embedded in a Floquet basis of frequency omega.
FloquetSpectrum solve_static_spectrum(const SystemConfig& config, double omega, int n_harmonics);

// u_alpha(z); exactly Z-periodic.
Eigen::VectorXcd mode_profile(const FloquetSpectrum& spectrum, int alpha, double z);
// d u_alpha / dz from the harmonic series (and the co-moving phase, away from jumps).
Eigen::VectorXcd mode_profile_derivative(const FloquetSpectrum& spectrum, int alpha, double z);

// Largest displacement (mod omega) between matched quasienergies of two spectra.
double max_quasienergy_shift(const std::vector<double>& a, const std::vector<double>& b,
                             double omega);

}  // namespace wgf
