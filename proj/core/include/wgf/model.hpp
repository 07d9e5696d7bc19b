// model.hpp: physical configuration of a waveguide array with one modulated
// principal waveguide, and the coefficient matrix of the coupled-mode equations.
//
// Indexing: waveguide 1 (the principal one) is row/column 0; the array occupies
// rows 1..L. All lengths are in units of the reduced wavelength lambdabar, all
// couplings in units of the array coupling kappa (natural units lambdabar = kappa = 1).

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace wgf {

using cplx = std::complex<double>;

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct NoModulation {
    friend bool operator==(const NoModulation&, const NoModulation&) = default;
};

// kappa12(z) = a cos(omega z) + b
struct HarmonicCoupling {
    double a{0.0};
    double omega{1.0};
    double b{0.0};
    friend bool operator==(const HarmonicCoupling&, const HarmonicCoupling&) = default;
};

// beta1(z) = beta0          on [nZ, nZ + Z')
//          = beta0 + delta  on [nZ + Z', (n+1)Z)
struct StepIndex {
    double beta0{0.0};
    double delta{0.0};
    double period{1.0};  // Z
    double duty{0.5};    // Z'
    friend bool operator==(const StepIndex&, const StepIndex&) = default;
};

using ModulationProfile = std::variant<NoModulation, HarmonicCoupling, StepIndex>;

struct SystemConfig {
    int array_size{200};           // L
    double beta{0.0};              // array propagation constant
    double beta1_static{0.0};      // principal propagation constant (unless StepIndex)
    double kappa{1.0};             // array nearest-neighbour coupling
    double kappa12_static{0.5};    // principal-array coupling (unless HarmonicCoupling)
    ModulationProfile modulation{NoModulation{}};
    double lambdabar{1.0};

    int dimension() const noexcept { return array_size + 1; }

    friend bool operator==(const SystemConfig&, const SystemConfig&) = default;
};

// Throws ConfigError describing the first violated invariant.
void validate(const SystemConfig& config);

bool is_periodic(const SystemConfig& config) noexcept;
std::optional<double> period(const SystemConfig& config) noexcept;
std::optional<double> modulation_frequency(const SystemConfig& config) noexcept;

// StepIndex with Z' in {0, Z} carries no modulation; it is reported as static.
bool is_degenerate_step(const StepIndex& step) noexcept;

double principal_beta(const SystemConfig& config, double z);
double principal_coupling(const SystemConfig& config, double z);

// Locations of discontinuities of M(z) within one period, ascending, in [0, Z).
std::vector<double> discontinuities(const SystemConfig& config);

// Stable hex digest of every field; used to tag generated data.
std::string config_hash(const SystemConfig& config);

// Complex tridiagonal (L+1)x(L+1) matrix. M(z) is Hermitian; a Fourier block of
// a step profile carries a complex diagonal entry and is not.
class TridiagonalMatrix {
public:
    TridiagonalMatrix() = default;
    explicit TridiagonalMatrix(int n);

    int size() const noexcept { return static_cast<int>(diag_.size()); }

    cplx& diag(int i) { return diag_(i); }
    cplx diag(int i) const { return diag_(i); }
    // (i, i+1)
    cplx& upper(int i) { return upper_(i); }
    cplx upper(int i) const { return upper_(i); }
    // (i+1, i)
    cplx& lower(int i) { return lower_(i); }
    cplx lower(int i) const { return lower_(i); }

    cplx operator()(int row, int col) const;

    // y = scale * this * x
    void apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y, cplx scale = 1.0) const;
    // Y = scale * this * X, column by column
    void apply(const Eigen::MatrixXcd& x, Eigen::MatrixXcd& y, cplx scale = 1.0) const;

    Eigen::MatrixXcd dense() const;
    bool is_hermitian(double tol = 0.0) const;
    bool is_zero() const;
    TridiagonalMatrix adjoint() const;

private:
    Eigen::VectorXcd diag_;
    Eigen::VectorXcd upper_;
    Eigen::VectorXcd lower_;
};

using CouplingMatrix = TridiagonalMatrix;

// Static coefficient matrix with the given principal entries.
CouplingMatrix static_coupling(const SystemConfig& config, double beta1, double kappa12);

CouplingMatrix coupling_at(const SystemConfig& config, double z);

// Z^{-1} \int_0^Z M(z) e^{-i q omega z} dz, in closed form.
// Throws ConfigError for q != 0 on a static configuration.
CouplingMatrix fourier_block(const SystemConfig& config, int q);

// (beta - 2 kappa / lambdabar, beta + 2 kappa / lambdabar)
std::pair<double, double> band_edges(const SystemConfig& config) noexcept;

// Time average of beta1(z) over one period.
double mean_principal_beta(const SystemConfig& config);

// \int_0^z (beta1(z') - mean beta1) dz'. Piecewise linear, Z-periodic, zero at
// every multiple of Z, minimum -delta Z'(Z - Z')/Z at z = Z' (for delta > 0).
double comoving_phase(const StepIndex& step, double z) noexcept;

// Z^{-1} \int_0^Z exp(i sign [phi(origin + s) - phi(origin)] - i q omega s) ds with
// phi = comoving_phase, evaluated segment by segment in closed form.
cplx comoving_fourier(const StepIndex& step, int q, double sign, double origin);

// Maps a quasienergy into the first Brillouin zone (-omega/2, omega/2]; the
// zone edge folds to +omega/2.
double fold_into_zone(double eps, double omega) noexcept;

// Circular distance between two quasienergies modulo omega.
double zone_distance(double a, double b, double omega) noexcept;

// \int_0^len e^{i k t} dt, with the k -> 0 limit handled.
cplx oscillatory_integral(double k, double len) noexcept;

}  // namespace wgf
