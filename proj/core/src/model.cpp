#include "wgf/model.hpp"

#include "wgf/io.hpp"

#include <cmath>
#include <algorithm>
#include <numbers>
#include <sstream>

namespace wgf {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& message) {
    if (!ok) {
        throw ConfigError(message);
    }
}

// Position of z inside its period, in [0, Z).
double phase_in_period(double z, double period) {
    double r = std::fmod(z, period);
    if (r < 0.0) {
        r += period;
    }
    return r;
}

}  // namespace

void validate(const SystemConfig& c) {
    require(c.array_size >= 1, "L must be >= 1");
    require(std::isfinite(c.kappa) && c.kappa > 0.0, "kappa must be > 0");
    require(std::isfinite(c.lambdabar) && c.lambdabar > 0.0, "lambdabar must be > 0");
    require(std::isfinite(c.beta), "beta must be finite");
    require(std::isfinite(c.beta1_static), "beta1 must be finite");
    require(std::isfinite(c.kappa12_static), "kappa12 must be finite");
    std::visit(overloaded{
                   [](const NoModulation&) {},
                   [](const HarmonicCoupling& h) {
                       require(std::isfinite(h.a), "a must be finite");
                       require(std::isfinite(h.omega) && h.omega > 0.0, "omega must be > 0");
                       require(std::isfinite(h.b) && h.b >= 0.0, "b must be >= 0");
                   },
                   [](const StepIndex& s) {
                       require(std::isfinite(s.beta0), "beta0 must be finite");
                       require(std::isfinite(s.delta), "delta must be finite");
                       require(std::isfinite(s.period) && s.period > 0.0, "Z must be > 0");
                       require(std::isfinite(s.duty) && s.duty >= 0.0, "Zprime must be >= 0");
                       require(s.duty <= s.period, "Zprime must be <= Z");
                   },
               },
               c.modulation);
}

bool is_periodic(const SystemConfig& c) noexcept {
    return !std::holds_alternative<NoModulation>(c.modulation);
}

std::optional<double> period(const SystemConfig& c) noexcept {
    if (const auto* h = std::get_if<HarmonicCoupling>(&c.modulation)) {
        return 2.0 * std::numbers::pi / h->omega;
    }
    if (const auto* s = std::get_if<StepIndex>(&c.modulation)) {
        return s->period;
    }
    return std::nullopt;
}

std::optional<double> modulation_frequency(const SystemConfig& c) noexcept {
    if (const auto* h = std::get_if<HarmonicCoupling>(&c.modulation)) {
        return h->omega;
    }
    if (const auto* s = std::get_if<StepIndex>(&c.modulation)) {
        return 2.0 * std::numbers::pi / s->period;
    }
    return std::nullopt;
}

bool is_degenerate_step(const StepIndex& s) noexcept {
    return s.duty <= 0.0 || s.duty >= s.period;
}

double principal_beta(const SystemConfig& c, double z) {
    if (const auto* s = std::get_if<StepIndex>(&c.modulation)) {
        return phase_in_period(z, s->period) < s->duty ? s->beta0 : s->beta0 + s->delta;
    }
    return c.beta1_static;
}

double principal_coupling(const SystemConfig& c, double z) {
    if (const auto* h = std::get_if<HarmonicCoupling>(&c.modulation)) {
        return h->a * std::cos(h->omega * z) + h->b;
    }
    return c.kappa12_static;
}

std::vector<double> discontinuities(const SystemConfig& c) {
    if (const auto* s = std::get_if<StepIndex>(&c.modulation)) {
        if (is_degenerate_step(*s)) {
            return {};
        }
        return {0.0, s->duty};
    }
    return {};
}

std::string config_hash(const SystemConfig& c) {
    std::ostringstream os;
    os << "L=" << c.array_size << ";beta=" << format_double(c.beta)
       << ";beta1=" << format_double(c.beta1_static) << ";kappa=" << format_double(c.kappa)
       << ";kappa12=" << format_double(c.kappa12_static)
       << ";lambdabar=" << format_double(c.lambdabar) << ";";
    std::visit(overloaded{
                   [&](const NoModulation&) { os << "mod=none"; },
                   [&](const HarmonicCoupling& h) {
                       os << "mod=harmonic;a=" << format_double(h.a)
                          << ";omega=" << format_double(h.omega) << ";b=" << format_double(h.b);
                   },
                   [&](const StepIndex& s) {
                       os << "mod=step;beta0=" << format_double(s.beta0)
                          << ";delta=" << format_double(s.delta)
                          << ";Z=" << format_double(s.period)
                          << ";Zprime=" << format_double(s.duty);
                   },
               },
               c.modulation);
    return hex64(fnv1a64(os.str()));
}

// ---------------------------------------------------------------------------

TridiagonalMatrix::TridiagonalMatrix(int n)
    : diag_(Eigen::VectorXcd::Zero(n)),
      upper_(Eigen::VectorXcd::Zero(std::max(n - 1, 0))),
      lower_(Eigen::VectorXcd::Zero(std::max(n - 1, 0))) {}

cplx TridiagonalMatrix::operator()(int row, int col) const {
    if (row == col) {
        return diag_(row);
    }
    if (col == row + 1) {
        return upper_(row);
    }
    if (row == col + 1) {
        return lower_(col);
    }
    return {0.0, 0.0};
}

void TridiagonalMatrix::apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y, cplx scale) const {
    const int n = size();
    y.resize(n);
    if (n == 1) {
        y(0) = scale * diag_(0) * x(0);
        return;
    }
    y(0) = scale * (diag_(0) * x(0) + upper_(0) * x(1));
    for (int i = 1; i < n - 1; ++i) {
        y(i) = scale * (lower_(i - 1) * x(i - 1) + diag_(i) * x(i) + upper_(i) * x(i + 1));
    }
    y(n - 1) = scale * (lower_(n - 2) * x(n - 2) + diag_(n - 1) * x(n - 1));
}

void TridiagonalMatrix::apply(const Eigen::MatrixXcd& x, Eigen::MatrixXcd& y, cplx scale) const {
    const int n = size();
    y.noalias() = (scale * diag_).asDiagonal() * x;
    if (n > 1) {
        y.topRows(n - 1).noalias() += (scale * upper_).asDiagonal() * x.bottomRows(n - 1);
        y.bottomRows(n - 1).noalias() += (scale * lower_).asDiagonal() * x.topRows(n - 1);
    }
}

Eigen::MatrixXcd TridiagonalMatrix::dense() const {
    const int n = size();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        m(i, i) = diag_(i);
    }
    for (int i = 0; i + 1 < n; ++i) {
        m(i, i + 1) = upper_(i);
        m(i + 1, i) = lower_(i);
    }
    return m;
}

bool TridiagonalMatrix::is_hermitian(double tol) const {
    for (int i = 0; i < size(); ++i) {
        if (std::abs(diag_(i).imag()) > tol) {
            return false;
        }
    }
    for (int i = 0; i + 1 < size(); ++i) {
        if (std::abs(upper_(i) - std::conj(lower_(i))) > tol) {
            return false;
        }
    }
    return true;
}

bool TridiagonalMatrix::is_zero() const {
    return diag_.isZero(0.0) && upper_.isZero(0.0) && lower_.isZero(0.0);
}

TridiagonalMatrix TridiagonalMatrix::adjoint() const {
    TridiagonalMatrix t(size());
    t.diag_ = diag_.conjugate();
    t.upper_ = lower_.conjugate();
    t.lower_ = upper_.conjugate();
    return t;
}

// ---------------------------------------------------------------------------

CouplingMatrix static_coupling(const SystemConfig& c, double beta1, double kappa12) {
    const int n = c.dimension();
    CouplingMatrix m(n);
    m.diag(0) = c.lambdabar * beta1;
    for (int j = 1; j < n; ++j) {
        m.diag(j) = c.lambdabar * c.beta;
    }
    m.upper(0) = kappa12;
    m.lower(0) = kappa12;
    for (int j = 1; j + 1 < n; ++j) {
        m.upper(j) = c.kappa;
        m.lower(j) = c.kappa;
    }
    return m;
}

CouplingMatrix coupling_at(const SystemConfig& c, double z) {
    return static_coupling(c, principal_beta(c, z), principal_coupling(c, z));
}

CouplingMatrix fourier_block(const SystemConfig& c, int q) {
    const int n = c.dimension();
    if (std::holds_alternative<NoModulation>(c.modulation)) {
        if (q != 0) {
            throw ConfigError("fourier_block: harmonic " + std::to_string(q) +
                              " requested for an unmodulated configuration");
        }
        return static_coupling(c, c.beta1_static, c.kappa12_static);
    }
    if (const auto* h = std::get_if<HarmonicCoupling>(&c.modulation)) {
        if (q == 0) {
            return static_coupling(c, c.beta1_static, h->b);
        }
        CouplingMatrix m(n);
        if (q == 1 || q == -1) {
            m.upper(0) = 0.5 * h->a;
            m.lower(0) = 0.5 * h->a;
        }
        return m;
    }
    const auto& s = std::get<StepIndex>(c.modulation);
    if (q == 0) {
        return static_coupling(c, mean_principal_beta(c), c.kappa12_static);
    }
    CouplingMatrix m(n);
    // lambdabar * delta / Z * \int_{Z'}^{Z} e^{-i q omega z} dz
    const double omega = 2.0 * std::numbers::pi / s.period;
    const double k = -q * omega;
    m.diag(0) = c.lambdabar * s.delta / s.period * std::exp(cplx(0.0, k * s.duty)) *
                oscillatory_integral(k, s.period - s.duty);
    return m;
}

std::pair<double, double> band_edges(const SystemConfig& c) noexcept {
    const double half = 2.0 * c.kappa / c.lambdabar;
    return {c.beta - half, c.beta + half};
}

double mean_principal_beta(const SystemConfig& c) {
    if (const auto* s = std::get_if<StepIndex>(&c.modulation)) {
        return s->beta0 + s->delta * (s->period - s->duty) / s->period;
    }
    return c.beta1_static;
}

double comoving_phase(const StepIndex& s, double z) noexcept {
    const double r = phase_in_period(z, s.period);
    const double low_slope = -s.delta * (s.period - s.duty) / s.period;
    const double high_slope = s.delta * s.duty / s.period;
    if (r < s.duty) {
        return low_slope * r;
    }
    return low_slope * s.duty + high_slope * (r - s.duty);
}

cplx comoving_fourier(const StepIndex& st, int q, double sign, double origin) {
    const double period = st.period;
    const double omega = 2.0 * std::numbers::pi / period;
    const double low_slope = -st.delta * (period - st.duty) / period;
    const double high_slope = st.delta * st.duty / period;
    const double phi0 = comoving_phase(st, origin);

    // Breakpoints of phi inside [origin, origin + Z), as offsets from origin.
    std::vector<double> cuts{0.0, period};
    const double base = std::floor(origin / period) * period;
    for (double p : {base, base + st.duty, base + period, base + period + st.duty}) {
        const double off = p - origin;
        if (off > 0.0 && off < period) {
            cuts.push_back(off);
        }
    }
    std::sort(cuts.begin(), cuts.end());

    cplx total{0.0, 0.0};
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i];
        const double len = cuts[i + 1] - a;
        if (len <= 0.0) {
            continue;
        }
        const double mid = phase_in_period(origin + a + 0.5 * len, period);
        const double slope = mid < st.duty ? low_slope : high_slope;
        const double psi_a = sign * (comoving_phase(st, origin + a) - phi0);
        total += std::exp(cplx(0.0, psi_a - q * omega * a)) *
                 oscillatory_integral(sign * slope - q * omega, len);
    }
    return total / period;
}

double fold_into_zone(double eps, double omega) noexcept {
    double r = eps - omega * std::floor((eps + 0.5 * omega) / omega);
    if (r <= -0.5 * omega * (1.0 - 1e-13)) {
        r += omega;
    }
    return r;
}

double zone_distance(double a, double b, double omega) noexcept {
    double d = std::fmod(std::abs(a - b), omega);
    return std::min(d, omega - d);
}

cplx oscillatory_integral(double k, double len) noexcept {
    // e^{i k len / 2} * len * sinc(k len / 2)
    const double x = 0.5 * k * len;
    double sinc;
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        sinc = 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    } else {
        sinc = std::sin(x) / x;
    }
    return std::exp(cplx(0.0, x)) * (len * sinc);
}

}  // namespace wgf
