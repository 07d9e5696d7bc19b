#include "wgf/propagator.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <variant>

namespace wgf {

namespace {

constexpr double kJumpEps = 1e-12;

// Spectral centre of the diagonal of M(z). Integrating in a frame rotated by this
// constant keeps |h * eig| small; the phase is restored exactly afterwards.
double frame_shift(const SystemConfig& c) {
    double lo = std::min(c.beta, c.beta1_static);
    double hi = std::max(c.beta, c.beta1_static);
    if (const auto* s = std::get_if<StepIndex>(&c.modulation)) {
        lo = std::min({c.beta, s->beta0, s->beta0 + s->delta});
        hi = std::max({c.beta, s->beta0, s->beta0 + s->delta});
    }
    return 0.5 * c.lambdabar * (lo + hi);
}

// -i (M(z) - shift) / lambdabar with only the principal entries refreshed per call.
class Generator {
public:
    explicit Generator(const SystemConfig& c)
        : config_(c),
          shift_(frame_shift(c)),
          piecewise_constant_(!discontinuities(c).empty()),
          m_(static_coupling(c, c.beta1_static, c.kappa12_static)),
          scale_(0.0, -1.0 / c.lambdabar) {
        for (int j = 1; j < m_.size(); ++j) {
            m_.diag(j) -= shift_;
        }
    }

    double shift() const noexcept { return shift_; }

    void set(double z) {
        m_.diag(0) = config_.lambdabar * principal_beta(config_, z) - shift_;
        const double k12 = principal_coupling(config_, z);
        if (m_.size() > 1) {
            m_.upper(0) = k12;
            m_.lower(0) = k12;
        }
    }

    template <class V>
    void apply(const V& x, V& y) const {
        m_.apply(x, y, scale_);
    }

    // One classical RK4 step of length h starting at z. Inside a constant segment
    // of a step profile the generator is evaluated once at the midpoint so that
    // a step ending on a jump never samples the next segment.
    template <class V>
    void rk4(double z, double h, V& x) {
        if (piecewise_constant_) {
            set(z + 0.5 * h);
            apply(x, k1_(x));
            tmp_(x) = x + 0.5 * h * k1_(x);
            apply(tmp_(x), k2_(x));
            tmp_(x) = x + 0.5 * h * k2_(x);
            apply(tmp_(x), k3_(x));
            tmp_(x) = x + h * k3_(x);
            apply(tmp_(x), k4_(x));
        } else {
            set(z);
            apply(x, k1_(x));
            set(z + 0.5 * h);
            tmp_(x) = x + 0.5 * h * k1_(x);
            apply(tmp_(x), k2_(x));
            tmp_(x) = x + 0.5 * h * k2_(x);
            apply(tmp_(x), k3_(x));
            set(z + h);
            tmp_(x) = x + h * k3_(x);
            apply(tmp_(x), k4_(x));
        }
        x += (h / 6.0) * (k1_(x) + 2.0 * k2_(x) + 2.0 * k3_(x) + k4_(x));
    }

private:
    // Stage buffers, one set per operand type.
    Eigen::VectorXcd& k1_(const Eigen::VectorXcd&) { return vk_[0]; }
    Eigen::VectorXcd& k2_(const Eigen::VectorXcd&) { return vk_[1]; }
    Eigen::VectorXcd& k3_(const Eigen::VectorXcd&) { return vk_[2]; }
    Eigen::VectorXcd& k4_(const Eigen::VectorXcd&) { return vk_[3]; }
    Eigen::VectorXcd& tmp_(const Eigen::VectorXcd&) { return vk_[4]; }
    Eigen::MatrixXcd& k1_(const Eigen::MatrixXcd&) { return mk_[0]; }
    Eigen::MatrixXcd& k2_(const Eigen::MatrixXcd&) { return mk_[1]; }
    Eigen::MatrixXcd& k3_(const Eigen::MatrixXcd&) { return mk_[2]; }
    Eigen::MatrixXcd& k4_(const Eigen::MatrixXcd&) { return mk_[3]; }
    Eigen::MatrixXcd& tmp_(const Eigen::MatrixXcd&) { return mk_[4]; }

    const SystemConfig& config_;
    double shift_;
    bool piecewise_constant_;
    CouplingMatrix m_;
    cplx scale_;
    Eigen::VectorXcd vk_[5];
    Eigen::MatrixXcd mk_[5];
};

// Smallest discontinuity strictly after z (infinity when there is none).
double next_jump(const SystemConfig& c, double z) {
    const auto* s = std::get_if<StepIndex>(&c.modulation);
    if (s == nullptr || is_degenerate_step(*s)) {
        return std::numeric_limits<double>::infinity();
    }
    const double tol = kJumpEps * std::max(1.0, std::abs(z));
    const double base = std::floor(z / s->period) * s->period;
    for (double cand : {base + s->duty, base + s->period, base + s->period + s->duty}) {
        if (cand > z + tol) {
            return cand;
        }
    }
    return base + 2.0 * s->period;
}

void check_step(const SystemConfig& c, double z_max, double dz) {
    if (!(z_max > 0.0)) {
        throw std::invalid_argument("propagate: z_max must be > 0");
    }
    if (!(dz > 0.0) || dz > z_max) {
        throw std::invalid_argument("propagate: need 0 < dz <= z_max");
    }
    if (auto p = period(c); p && dz > *p / 200.0 * (1.0 + 1e-12)) {
        throw std::invalid_argument("propagate: dz must not exceed Z/200");
    }
}

std::size_t step_count(double z_max, double dz) {
    return static_cast<std::size_t>(std::floor(z_max / dz * (1.0 + 1e-12)));
}

cplx frame_phase(double shift, double z, double lambdabar) {
    return std::exp(cplx(0.0, -shift * z / lambdabar));
}

// Spectral decomposition of a constant segment for repeated exponentiation.
struct SegmentExp {
    Eigen::VectorXd values;
    Eigen::MatrixXcd vectors;
    double lambdabar{1.0};

    SegmentExp(const CouplingMatrix& m, double lb) : lambdabar(lb) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m.dense());
        if (es.info() != Eigen::Success) {
            throw std::runtime_error("segment propagator: eigensolver failed");
        }
        values = es.eigenvalues();
        vectors = es.eigenvectors();
    }

    Eigen::VectorXcd phases(double t) const {
        Eigen::VectorXcd p(values.size());
        for (Eigen::Index i = 0; i < values.size(); ++i) {
            p(i) = std::exp(cplx(0.0, -values(i) * t / lambdabar));
        }
        return p;
    }

    void advance(Eigen::VectorXcd& x, double t) const {
        Eigen::VectorXcd y = vectors.adjoint() * x;
        y = phases(t).cwiseProduct(y);
        x.noalias() = vectors * y;
    }

    Eigen::MatrixXcd matrix(double t) const {
        return vectors * phases(t).asDiagonal() * vectors.adjoint();
    }
};

void require_piecewise_constant(const SystemConfig& c) {
    if (std::holds_alternative<HarmonicCoupling>(c.modulation)) {
        throw std::invalid_argument("exact propagation needs a piecewise-constant profile");
    }
}

}  // namespace

// ---------------------------------------------------------------------------

double AmplitudeTrace::principal_intensity(std::size_t i) const {
    return std::norm(amplitudes.at(i)(0));
}

std::vector<double> AmplitudeTrace::principal_intensities() const {
    std::vector<double> out(amplitudes.size());
    for (std::size_t i = 0; i < amplitudes.size(); ++i) {
        out[i] = std::norm(amplitudes[i](0));
    }
    return out;
}

double AmplitudeTrace::intensity(std::size_t i, int waveguide) const {
    return std::norm(amplitudes.at(i)(waveguide));
}

double AmplitudeTrace::max_norm_drift() const {
    if (amplitudes.empty()) {
        return 0.0;
    }
    const double n0 = amplitudes.front().squaredNorm();
    double worst = 0.0;
    for (const auto& a : amplitudes) {
        worst = std::max(worst, std::abs(a.squaredNorm() - n0));
    }
    return worst;
}

double default_step(const SystemConfig& c) {
    const double cap = 0.005 * c.lambdabar;
    if (auto p = period(c)) {
        return std::min(*p / 400.0, cap);
    }
    return cap;
}

Eigen::VectorXcd injected_state(const SystemConfig& c) {
    Eigen::VectorXcd a = Eigen::VectorXcd::Zero(c.dimension());
    a(0) = 1.0;
    return a;
}

AmplitudeTrace propagate(const SystemConfig& c, double z_max, double dz, std::size_t stride) {
    PropagationOptions opt;
    opt.dz = dz;
    opt.stride = stride;
    return propagate(c, injected_state(c), z_max, opt);
}

AmplitudeTrace propagate(const SystemConfig& c, double z_max, const PropagationOptions& options) {
    return propagate(c, injected_state(c), z_max, options);
}

AmplitudeTrace propagate(const SystemConfig& c, const Eigen::VectorXcd& initial, double z_max,
                         const PropagationOptions& options) {
    validate(c);
    if (initial.size() != c.dimension()) {
        throw std::invalid_argument("propagate: initial state has wrong dimension");
    }
    const double dz = options.dz > 0.0 ? options.dz : default_step(c);
    check_step(c, z_max, dz);
    const std::size_t stride = std::max<std::size_t>(1, options.stride);
    const std::size_t steps = step_count(z_max, dz);

    Generator gen(c);
    AmplitudeTrace trace;
    trace.config_hash = config_hash(c);
    trace.z.reserve(steps / stride + 1);
    trace.amplitudes.reserve(steps / stride + 1);
    trace.z.push_back(0.0);
    trace.amplitudes.push_back(initial);

    const double n0 = initial.squaredNorm();
    Eigen::VectorXcd x = initial;
    for (std::size_t k = 1; k <= steps; ++k) {
        const double z0 = static_cast<double>(k - 1) * dz;
        const double z1 = static_cast<double>(k) * dz;
        double cur = z0;
        for (double j = next_jump(c, cur); j < z1 - kJumpEps * std::max(1.0, z1); j = next_jump(c, cur)) {
            gen.rk4(cur, j - cur, x);
            cur = j;
        }
        gen.rk4(cur, z1 - cur, x);

        const double drift = std::abs(x.squaredNorm() - n0);
        if (drift > options.drift_limit) {
            throw StepSizeError("propagate: norm drift " + std::to_string(drift) + " at z = " +
                                std::to_string(z1) + " exceeds limit; reduce dz");
        }
        if (k % stride == 0) {
            trace.z.push_back(z1);
            trace.amplitudes.push_back(frame_phase(gen.shift(), z1, c.lambdabar) * x);
        }
    }
    return trace;
}

AmplitudeTrace propagate_exact(const SystemConfig& c, double z_max, double dz, std::size_t stride) {
    validate(c);
    require_piecewise_constant(c);
    check_step(c, z_max, dz);
    stride = std::max<std::size_t>(1, stride);

    std::vector<SegmentExp> segments;
    const auto* s = std::get_if<StepIndex>(&c.modulation);
    if (s != nullptr) {
        segments.emplace_back(static_coupling(c, s->beta0, c.kappa12_static), c.lambdabar);
        segments.emplace_back(static_coupling(c, s->beta0 + s->delta, c.kappa12_static), c.lambdabar);
    } else {
        segments.emplace_back(static_coupling(c, c.beta1_static, c.kappa12_static), c.lambdabar);
    }
    auto segment_at = [&](double z) -> const SegmentExp& {
        if (s == nullptr) {
            return segments[0];
        }
        return principal_beta(c, z) == s->beta0 ? segments[0] : segments[1];
    };

    AmplitudeTrace trace;
    trace.config_hash = config_hash(c);
    Eigen::VectorXcd x = injected_state(c);
    trace.z.push_back(0.0);
    trace.amplitudes.push_back(x);
    const std::size_t steps = step_count(z_max, dz);
    for (std::size_t k = 1; k <= steps; ++k) {
        const double z1 = static_cast<double>(k) * dz;
        double cur = static_cast<double>(k - 1) * dz;
        for (double j = next_jump(c, cur); j < z1 - kJumpEps * std::max(1.0, z1); j = next_jump(c, cur)) {
            segment_at(0.5 * (cur + j)).advance(x, j - cur);
            cur = j;
        }
        segment_at(0.5 * (cur + z1)).advance(x, z1 - cur);
        if (k % stride == 0) {
            trace.z.push_back(z1);
            trace.amplitudes.push_back(x);
        }
    }
    return trace;
}

Eigen::MatrixXcd monodromy(const SystemConfig& c, double dz) {
    validate(c);
    const auto p = period(c);
    if (!p) {
        throw std::invalid_argument("monodromy: configuration is not periodic");
    }
    if (dz <= 0.0) {
        dz = default_step(c);
    }
    check_step(c, *p, dz);

    std::vector<double> cuts{0.0};
    for (double j : discontinuities(c)) {
        if (j > 0.0) {
            cuts.push_back(j);
        }
    }
    cuts.push_back(*p);

    Generator gen(c);
    const int n = c.dimension();
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(n, n);
    for (std::size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
        const double len = cuts[seg + 1] - cuts[seg];
        const auto count = static_cast<std::size_t>(std::ceil(len / dz * (1.0 - 1e-12)));
        const double h = len / static_cast<double>(count);
        for (std::size_t k = 0; k < count; ++k) {
            gen.rk4(cuts[seg] + static_cast<double>(k) * h, h, u);
        }
    }
    return frame_phase(gen.shift(), *p, c.lambdabar) * u;
}

Eigen::MatrixXcd exact_monodromy(const SystemConfig& c) {
    validate(c);
    require_piecewise_constant(c);
    const auto p = period(c);
    if (!p) {
        throw std::invalid_argument("exact_monodromy: configuration is not periodic");
    }
    const auto& s = std::get<StepIndex>(c.modulation);
    const SegmentExp low(static_coupling(c, s.beta0, c.kappa12_static), c.lambdabar);
    const SegmentExp high(static_coupling(c, s.beta0 + s.delta, c.kappa12_static), c.lambdabar);
    return high.matrix(s.period - s.duty) * low.matrix(s.duty);
}

Eigen::MatrixXcd segment_propagator(const CouplingMatrix& m, double length, double lambdabar) {
    return SegmentExp(m, lambdabar).matrix(length);
}

std::vector<double> monodromy_quasienergies(const Eigen::MatrixXcd& u, double period) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(u, false);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("monodromy_quasienergies: eigensolver failed");
    }
    const double omega = 2.0 * std::numbers::pi / period;
    std::vector<double> eps;
    eps.reserve(static_cast<std::size_t>(u.rows()));
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        eps.push_back(fold_into_zone(-std::arg(es.eigenvalues()(i)) / period, omega));
    }
    std::sort(eps.begin(), eps.end());
    return eps;
}

}  // namespace wgf
