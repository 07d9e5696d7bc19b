#include "wgf/floquet.hpp"

#include "wgf/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <variant>

namespace wgf {

namespace {

double require_omega(const SystemConfig& c, double omega_static) {
    if (auto w = modulation_frequency(c)) {
        return *w;
    }
    if (omega_static > 0.0) {
        return omega_static;
    }
    throw ConfigError("Floquet analysis needs a periodic configuration or an explicit omega");
}

void check_harmonics(int n_harmonics) {
    if (n_harmonics < 1) {
        throw std::invalid_argument("n_harmonics must be >= 1");
    }
}

bool uses_comoving_frame(const SystemConfig& c, bool force_lab) {
    return !force_lab && std::holds_alternative<StepIndex>(c.modulation);
}

// Fourier blocks of the co-moving, origin-shifted step problem; all entries real.
std::vector<CouplingMatrix> comoving_blocks(const SystemConfig& c, int max_q) {
    const auto& st = std::get<StepIndex>(c.modulation);
    const double origin = 0.5 * st.duty;
    std::vector<double> h(static_cast<std::size_t>(2 * max_q + 1));
    for (int q = -max_q; q <= max_q; ++q) {
        const cplx v = comoving_fourier(st, q, +1.0, origin);
        if (std::abs(v.imag()) > 1e-12 * std::max(1.0, std::abs(v))) {
            throw std::logic_error("co-moving Fourier coefficient is not real");
        }
        h[static_cast<std::size_t>(q + max_q)] = v.real();
    }
    auto coef = [&](int q) { return h[static_cast<std::size_t>(q + max_q)]; };

    std::vector<CouplingMatrix> blocks;
    blocks.reserve(h.size());
    for (int q = -max_q; q <= max_q; ++q) {
        CouplingMatrix m = q == 0 ? static_coupling(c, mean_principal_beta(c), 0.0)
                                  : CouplingMatrix(c.dimension());
        if (c.dimension() > 1) {
            m.upper(0) = c.kappa12_static * coef(q);
            m.lower(0) = c.kappa12_static * coef(-q);
        }
        blocks.push_back(std::move(m));
    }
    return blocks;
}

std::vector<CouplingMatrix> lab_blocks(const SystemConfig& c, int max_q) {
    std::vector<CouplingMatrix> blocks;
    blocks.reserve(static_cast<std::size_t>(2 * max_q + 1));
    const bool periodic = is_periodic(c);
    for (int q = -max_q; q <= max_q; ++q) {
        if (!periodic && q != 0) {
            blocks.emplace_back(c.dimension());
        } else {
            blocks.push_back(fourier_block(c, q));
        }
    }
    return blocks;
}

template <class Matrix, class Convert>
Matrix assemble(const std::vector<CouplingMatrix>& blocks, int n_harmonics, int dim,
                double lambdabar_omega, Convert convert) {
    const int harmonics = 2 * n_harmonics + 1;
    const int max_q = 2 * n_harmonics;
    Matrix h = Matrix::Zero(harmonics * dim, harmonics * dim);
    for (int bn = 0; bn < harmonics; ++bn) {
        for (int bm = 0; bm < harmonics; ++bm) {
            const auto& blk = blocks[static_cast<std::size_t>(bn - bm + max_q)];
            if (blk.is_zero()) {
                continue;
            }
            const int r0 = bn * dim;
            const int c0 = bm * dim;
            for (int i = 0; i < dim; ++i) {
                h(r0 + i, c0 + i) = convert(blk.diag(i));
                if (i + 1 < dim) {
                    h(r0 + i, c0 + i + 1) = convert(blk.upper(i));
                    h(r0 + i + 1, c0 + i) = convert(blk.lower(i));
                }
            }
        }
        const double shift = (bn - n_harmonics) * lambdabar_omega;
        for (int i = 0; i < dim; ++i) {
            h(bn * dim + i, bn * dim + i) += shift;
        }
    }
    return h;
}

double real_entry(cplx v) {
    if (std::abs(v.imag()) > 1e-12 * std::max(1.0, std::abs(v.real()))) {
        throw std::logic_error("solver matrix entry is not real");
    }
    return v.real();
}

struct Candidate {
    Eigen::Index index;
    double folded;
    double central;
};

// One physical eigenpair per replica family: largest central-harmonic weight wins.
std::vector<Candidate> select_physical(const Eigen::VectorXd& eps_raw,
                                       const std::vector<double>& central, int dim,
                                       double omega, double tol) {
    std::vector<Candidate> all;
    all.reserve(static_cast<std::size_t>(eps_raw.size()));
    for (Eigen::Index i = 0; i < eps_raw.size(); ++i) {
        all.push_back({i, fold_into_zone(eps_raw(i), omega), central[static_cast<std::size_t>(i)]});
    }
    std::stable_sort(all.begin(), all.end(), [](const Candidate& a, const Candidate& b) {
        return a.central > b.central;
    });

    std::vector<Candidate> kept;
    std::vector<double> taken;  // sorted folded values of kept candidates
    auto clashes = [&](double x) {
        auto it = std::lower_bound(taken.begin(), taken.end(), x);
        if (it != taken.end() && zone_distance(*it, x, omega) <= tol) return true;
        if (it != taken.begin() && zone_distance(*std::prev(it), x, omega) <= tol) return true;
        if (!taken.empty() && (zone_distance(taken.front(), x, omega) <= tol ||
                               zone_distance(taken.back(), x, omega) <= tol)) {
            return true;
        }
        return false;
    };
    std::vector<bool> used(all.size(), false);
    for (std::size_t k = 0; k < all.size() && static_cast<int>(kept.size()) < dim; ++k) {
        if (clashes(all[k].folded)) {
            continue;
        }
        kept.push_back(all[k]);
        used[k] = true;
        taken.insert(std::upper_bound(taken.begin(), taken.end(), all[k].folded), all[k].folded);
    }
    // Accidental degeneracy modulo omega between distinct families: fill up by weight.
    for (std::size_t k = 0; k < all.size() && static_cast<int>(kept.size()) < dim; ++k) {
        if (!used[k]) {
            kept.push_back(all[k]);
            used[k] = true;
        }
    }
    return kept;
}

template <class Vectors>
FloquetSpectrum extract(const Eigen::VectorXd& values, const Vectors& vectors,
                        const SystemConfig& c, int n_harmonics, double omega, bool comoving,
                        double family_tol) {
    const int dim = c.dimension();
    const int harmonics = 2 * n_harmonics + 1;
    const double lb = c.lambdabar;

    FloquetSpectrum spec;
    spec.omega = omega;
    spec.lambdabar = lb;
    spec.n_harmonics = n_harmonics;
    spec.dimension = dim;
    spec.frame = comoving ? FloquetFrame::CoMoving : FloquetFrame::Lab;
    if (comoving) {
        spec.comoving = std::get<StepIndex>(c.modulation);
    }

    Eigen::VectorXd eps_raw = values / lb;
    spec.raw_eigenvalues.assign(eps_raw.data(), eps_raw.data() + eps_raw.size());

    std::vector<double> central(static_cast<std::size_t>(values.size()));
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        central[static_cast<std::size_t>(i)] =
            vectors.col(i).segment(static_cast<Eigen::Index>(n_harmonics) * dim, dim).squaredNorm();
    }
    const auto kept = select_physical(eps_raw, central, dim, omega, family_tol);

    // Co-moving solution w(s) lives on the time axis shifted by z0 = Z'/2 with a
    // constant phase on waveguide 1; map back to v(z) = D^dag w(z - z0).
    double z0 = 0.0;
    cplx site0_phase{1.0, 0.0};
    if (comoving) {
        z0 = 0.5 * spec.comoving->duty;
        site0_phase = std::exp(cplx(0.0, comoving_phase(*spec.comoving, z0)));
    }

    spec.modes.reserve(kept.size());
    for (const auto& cand : kept) {
        FloquetMode mode;
        mode.quasienergy = cand.folded;
        mode.central_weight = cand.central;
        const int shift = static_cast<int>(std::lround((eps_raw(cand.index) - cand.folded) / omega));
        mode.first_harmonic = -n_harmonics - shift;
        mode.components.reserve(static_cast<std::size_t>(harmonics));
        for (int b = 0; b < harmonics; ++b) {
            Eigen::VectorXcd comp =
                vectors.col(cand.index).segment(static_cast<Eigen::Index>(b) * dim, dim).template cast<cplx>();
            if (comoving) {
                const int m = b - n_harmonics;
                comp *= std::exp(cplx(0.0, -m * omega * z0));
                comp(0) *= site0_phase;
            }
            mode.components.push_back(std::move(comp));
        }
        spec.modes.push_back(std::move(mode));
    }
    std::stable_sort(spec.modes.begin(), spec.modes.end(),
                     [](const FloquetMode& a, const FloquetMode& b) { return a.quasienergy < b.quasienergy; });
    return spec;
}

FloquetSpectrum solve_at(const SystemConfig& c, int n_harmonics, double omega_static, bool force_lab,
                         double family_tol) {
    check_harmonics(n_harmonics);
    validate(c);
    const double omega = require_omega(c, omega_static);
    if (force_lab && std::holds_alternative<StepIndex>(c.modulation)) {
        auto es = linalg::eigh(build_extended_matrix(c, n_harmonics, omega_static));
        return extract(es.values, es.vectors, c, n_harmonics, omega, false, family_tol);
    }
    const bool comoving = uses_comoving_frame(c, force_lab);
    auto es = linalg::eigh(build_solver_matrix(c, n_harmonics, omega_static));
    return extract(es.values, es.vectors, c, n_harmonics, omega, comoving, family_tol);
}

}  // namespace

// ---------------------------------------------------------------------------

Eigen::VectorXcd FloquetMode::component(int m) const {
    if (m < first_harmonic || m > last_harmonic()) {
        const auto n = components.empty() ? 0 : components.front().size();
        return Eigen::VectorXcd::Zero(n);
    }
    return components[static_cast<std::size_t>(m - first_harmonic)];
}

double FloquetMode::principal_weight() const {
    double w = 0.0;
    for (const auto& c : components) {
        w += std::norm(c(0));
    }
    return w;
}

double FloquetMode::norm_squared() const {
    double w = 0.0;
    for (const auto& c : components) {
        w += c.squaredNorm();
    }
    return w;
}

std::vector<double> FloquetSpectrum::quasienergies() const {
    std::vector<double> out;
    out.reserve(modes.size());
    for (const auto& m : modes) {
        out.push_back(m.quasienergy);
    }
    return out;
}

int default_harmonics(const SystemConfig& c) {
    const double lb = c.lambdabar;
    double support = 4.0 * c.kappa;
    double omega = 0.0;
    if (const auto* h = std::get_if<HarmonicCoupling>(&c.modulation)) {
        support += std::abs(lb * c.beta1_static) + std::abs(h->a) + std::abs(h->b);
        omega = h->omega;
    } else if (const auto* s = std::get_if<StepIndex>(&c.modulation)) {
        support += std::max(std::abs(lb * s->beta0), std::abs(lb * (s->beta0 + s->delta))) +
                   std::abs(c.kappa12_static) + std::abs(lb * s->delta);
        omega = 2.0 * std::numbers::pi / s->period;
    } else {
        return 8;
    }
    return static_cast<int>(std::ceil(support / (lb * omega))) + 8;
}

Eigen::MatrixXcd build_extended_matrix(const SystemConfig& c, int n_harmonics, double omega_static) {
    check_harmonics(n_harmonics);
    validate(c);
    const double omega = require_omega(c, omega_static);
    const auto blocks = lab_blocks(c, 2 * n_harmonics);
    return assemble<Eigen::MatrixXcd>(blocks, n_harmonics, c.dimension(), c.lambdabar * omega,
                                      [](cplx v) { return v; });
}

Eigen::MatrixXd build_solver_matrix(const SystemConfig& c, int n_harmonics, double omega_static) {
    check_harmonics(n_harmonics);
    validate(c);
    const double omega = require_omega(c, omega_static);
    const auto blocks = uses_comoving_frame(c, false) ? comoving_blocks(c, 2 * n_harmonics)
                                                      : lab_blocks(c, 2 * n_harmonics);
    return assemble<Eigen::MatrixXd>(blocks, n_harmonics, c.dimension(), c.lambdabar * omega,
                                     real_entry);
}

FloquetSpectrum solve_spectrum(const SystemConfig& c, int n_harmonics) {
    FloquetOptions opt;
    opt.n_harmonics = n_harmonics;
    return solve_spectrum(c, opt);
}

FloquetSpectrum solve_spectrum(const SystemConfig& c, const FloquetOptions& opt) {
    if (!is_periodic(c)) {
        throw ConfigError("solve_spectrum: configuration is not periodic");
    }
    int n = opt.n_harmonics > 0 ? opt.n_harmonics : default_harmonics(c);
    FloquetSpectrum spec = solve_at(c, n, 0.0, opt.force_lab_frame, opt.family_tol);
    if (!opt.verify_convergence) {
        return spec;
    }
    double shift = 0.0;
    for (int d = 0; d < std::max(1, opt.max_doublings); ++d) {
        n *= 2;
        FloquetSpectrum finer = solve_at(c, n, 0.0, opt.force_lab_frame, opt.family_tol);
        shift = max_quasienergy_shift(spec.quasienergies(), finer.quasienergies(), spec.omega);
        spec = std::move(finer);
        if (shift <= opt.convergence_tol) {
            return spec;
        }
    }
    std::ostringstream msg;
    msg << "quasienergies moved by " << shift << " after doubling to N = " << n
        << " harmonics (tolerance " << opt.convergence_tol << ")";
    throw ConvergenceFailure(msg.str());
}

FloquetSpectrum solve_static_spectrum(const SystemConfig& c, double omega, int n_harmonics) {
    if (is_periodic(c)) {
        throw ConfigError("solve_static_spectrum: configuration is modulated");
    }
    if (!(omega > 0.0)) {
        throw std::invalid_argument("solve_static_spectrum: omega must be > 0");
    }
    return solve_at(c, n_harmonics, omega, false, 1e-9);
}

Eigen::VectorXcd mode_profile(const FloquetSpectrum& spec, int alpha, double z) {
    const auto& mode = spec.modes.at(static_cast<std::size_t>(alpha));
    Eigen::VectorXcd u = Eigen::VectorXcd::Zero(spec.dimension);
    for (std::size_t k = 0; k < mode.components.size(); ++k) {
        const int m = mode.first_harmonic + static_cast<int>(k);
        u += std::exp(cplx(0.0, m * spec.omega * z)) * mode.components[k];
    }
    if (spec.comoving) {
        u(0) *= std::exp(cplx(0.0, -comoving_phase(*spec.comoving, z)));
    }
    return u;
}

Eigen::VectorXcd mode_profile_derivative(const FloquetSpectrum& spec, int alpha, double z) {
    const auto& mode = spec.modes.at(static_cast<std::size_t>(alpha));
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(spec.dimension);
    Eigen::VectorXcd dv = Eigen::VectorXcd::Zero(spec.dimension);
    for (std::size_t k = 0; k < mode.components.size(); ++k) {
        const int m = mode.first_harmonic + static_cast<int>(k);
        const cplx e = std::exp(cplx(0.0, m * spec.omega * z));
        v += e * mode.components[k];
        dv += cplx(0.0, m * spec.omega) * e * mode.components[k];
    }
    if (spec.comoving) {
        const auto& st = *spec.comoving;
        SystemConfig probe;
        probe.modulation = st;
        const double rate = principal_beta(probe, z) - mean_principal_beta(probe);
        const cplx p = std::exp(cplx(0.0, -comoving_phase(st, z)));
        dv(0) = p * (dv(0) - cplx(0.0, rate) * v(0));
    }
    return dv;
}

double max_quasienergy_shift(const std::vector<double>& a, const std::vector<double>& b, double omega) {
    if (a.empty() || b.empty()) {
        return a.size() == b.size() ? 0.0 : std::numeric_limits<double>::infinity();
    }
    auto one_way = [omega](const std::vector<double>& from, std::vector<double> to) {
        std::sort(to.begin(), to.end());
        double worst = 0.0;
        for (double x : from) {
            auto it = std::lower_bound(to.begin(), to.end(), x);
            double best = std::min(zone_distance(x, to.front(), omega), zone_distance(x, to.back(), omega));
            if (it != to.end()) best = std::min(best, zone_distance(x, *it, omega));
            if (it != to.begin()) best = std::min(best, zone_distance(x, *std::prev(it), omega));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(one_way(a, b), one_way(b, a));
}

}  // namespace wgf
