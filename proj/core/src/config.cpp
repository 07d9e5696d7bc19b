#include "wgf/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace wgf {

namespace {

struct KeySpec {
    const char* section;
    const char* key;
};

constexpr KeySpec kSchema[] = {
    {"system", "L"},
    {"system", "beta"},
    {"system", "beta1"},
    {"system", "kappa"},
    {"system", "kappa12"},
    {"system", "lambdabar"},
    {"modulation", "type"},
    {"modulation", "a"},
    {"modulation", "omega"},
    {"modulation", "b"},
    {"modulation", "beta0"},
    {"modulation", "delta"},
    {"modulation", "Z"},
    {"modulation", "Zprime"},
    {"modulation", "duty_ratio"},
    {"propagate", "z_max"},
    {"propagate", "dz"},
    {"propagate", "stride"},
    {"floquet", "n_harmonics"},
    {"floquet", "verify_convergence"},
    {"floquet", "convergence_tol"},
    {"floquet", "max_doublings"},
    {"floquet", "lab_frame"},
    {"analysis", "tol_gap_factor"},
    {"analysis", "w_min"},
    {"dynloc", "Z_min"},
    {"dynloc", "Z_max"},
    {"dynloc", "Z_count"},
    {"dynloc", "zero_samples"},
    {"sweep", "axis"},
    {"sweep", "values"},
    {"sweep", "outputs"},
};

const KeySpec* find_spec(std::string_view section, std::string_view key) {
    for (const auto& s : kSchema) {
        if (section == s.section && key == s.key) {
            return &s;
        }
    }
    return nullptr;
}

bool known_section(std::string_view section) {
    return std::any_of(std::begin(kSchema), std::end(kSchema),
                       [&](const KeySpec& s) { return section == s.section; });
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Entry {
    std::string value;
    int line{0};
};

using Key = std::pair<std::string, std::string>;

std::optional<double> to_real(std::string_view s) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end || !std::isfinite(v)) {
        return std::nullopt;
    }
    return v;
}

std::optional<long long> to_integer(std::string_view s) {
    long long v = 0;
    const auto* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end) {
        return std::nullopt;
    }
    return v;
}

std::optional<bool> to_boolean(std::string_view s) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    return std::nullopt;
}

std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    while (!s.empty()) {
        const auto comma = s.find(',');
        out.emplace_back(trim(s.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

class Reader {
public:
    std::map<Key, Entry> entries;
    std::vector<ConfigIssue> errors;
    std::map<std::string, int> section_lines;

    void fail(int line, std::string msg) { errors.push_back({line, std::move(msg)}); }

    void parse(std::string_view text) {
        std::string section;
        int line_no = 0;
        while (!text.empty()) {
            ++line_no;
            const auto nl = text.find('\n');
            std::string_view line = text.substr(0, nl);
            text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
            if (const auto c = line.find_first_of("#;"); c != std::string_view::npos) {
                line = line.substr(0, c);
            }
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') {
                    fail(line_no, "malformed section header");
                    continue;
                }
                section = std::string(trim(line.substr(1, line.size() - 2)));
                if (!known_section(section)) {
                    fail(line_no, "unknown section [" + section + "]");
                }
                section_lines.emplace(section, line_no);
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) {
                fail(line_no, "expected key = value");
                continue;
            }
            const std::string key(trim(line.substr(0, eq)));
            const std::string value(trim(line.substr(eq + 1)));
            if (section.empty()) {
                fail(line_no, "key '" + key + "' outside of a section");
                continue;
            }
            if (!known_section(section)) continue;
            add(section, key, value, line_no);
        }
    }

    void add(const std::string& section, const std::string& key, const std::string& value, int line) {
        if (!find_spec(section, key)) {
            fail(line, "unknown key '" + key + "' in [" + section + "]");
            return;
        }
        if (line > 0 && entries.count({section, key})) {
            fail(line, "duplicate key '" + key + "' (first set on line " +
                           std::to_string(entries[{section, key}].line) + ")");
            return;
        }
        entries[{section, key}] = {value, line};
    }

    void apply_override(const std::string& text) {
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            fail(0, "override '" + text + "' must have the form key=value");
            return;
        }
        std::string name(trim(std::string_view(text).substr(0, eq)));
        const std::string value(trim(std::string_view(text).substr(eq + 1)));
        std::string section;
        if (const auto dot = name.find('.'); dot != std::string::npos) {
            section = name.substr(0, dot);
            name = name.substr(dot + 1);
        } else {
            int hits = 0;
            for (const auto& s : kSchema) {
                if (name == s.key) {
                    section = s.section;
                    ++hits;
                }
            }
            if (hits != 1) {
                fail(0, "override '" + name + "' " + (hits ? "is ambiguous" : "names no known key") +
                            "; use section.key");
                return;
            }
        }
        if (!find_spec(section, name)) {
            fail(0, "override names unknown key '" + section + "." + name + "'");
            return;
        }
        entries[{section, name}] = {value, 0};
    }

    bool has(const char* section, const char* key) const { return entries.count({section, key}) > 0; }

    int line_of(const char* section, const char* key) const {
        auto it = entries.find({section, key});
        if (it != entries.end()) return it->second.line;
        auto s = section_lines.find(section);
        return s == section_lines.end() ? 0 : s->second;
    }

    template <class T>
    void get(const char* section, const char* key, T& out) {
        auto it = entries.find({section, key});
        if (it == entries.end()) return;
        const auto& e = it->second;
        auto mismatch = [&](const char* what) {
            fail(e.line, std::string(key) + ": expected " + what + ", got '" + e.value + "'");
        };
        if constexpr (std::is_same_v<T, double>) {
            if (auto v = to_real(e.value)) out = *v; else mismatch("a finite number");
        } else if constexpr (std::is_same_v<T, bool>) {
            if (auto v = to_boolean(e.value)) out = *v; else mismatch("true or false");
        } else if constexpr (std::is_same_v<T, std::string>) {
            out = e.value;
        } else {
            static_assert(std::is_integral_v<T>);
            if (auto v = to_integer(e.value)) out = static_cast<T>(*v); else mismatch("an integer");
        }
    }

    void check(bool ok, const char* section, const char* key, const std::string& msg) {
        if (!ok) fail(line_of(section, key), msg);
    }
};

std::optional<std::vector<double>> parse_grid(const std::string& text, std::string& why) {
    std::vector<double> values;
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::string_view s(text);
        while (true) {
            const auto c = s.find(':');
            parts.emplace_back(trim(s.substr(0, c)));
            if (c == std::string_view::npos) break;
            s.remove_prefix(c + 1);
        }
        if (parts.size() != 3) {
            why = "values: a range needs start:stop:step";
            return std::nullopt;
        }
        const auto start = to_real(parts[0]), stop = to_real(parts[1]), step = to_real(parts[2]);
        if (!start || !stop || !step || !(*step > 0.0) || *stop < *start) {
            why = "values: need numbers with step > 0 and stop >= start";
            return std::nullopt;
        }
        const auto n = static_cast<long long>(std::floor((*stop - *start) / *step + 1e-9));
        if (n > 1000000) {
            why = "values: grid too large";
            return std::nullopt;
        }
        for (long long i = 0; i <= n; ++i) {
            values.push_back(*start + static_cast<double>(i) * *step);
        }
        return values;
    }
    for (const auto& item : split_list(text)) {
        auto v = to_real(item);
        if (!v) {
            why = "values: '" + item + "' is not a number";
            return std::nullopt;
        }
        values.push_back(*v);
    }
    if (values.empty()) {
        why = "values: grid is empty";
        return std::nullopt;
    }
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (!(values[i] > values[i - 1])) {
            why = "values: grid must be strictly ascending";
            return std::nullopt;
        }
    }
    return values;
}

void read_modulation(Reader& r, RunConfig& run) {
    std::string type = "none";
    r.get("modulation", "type", type);
    static const std::map<std::string, std::set<std::string>> allowed = {
        {"none", {}},
        {"harmonic", {"a", "omega", "b"}},
        {"step", {"beta0", "delta", "Z", "Zprime", "duty_ratio"}},
    };
    auto found = allowed.find(type);
    if (found == allowed.end()) {
        r.fail(r.line_of("modulation", "type"), "type: expected none, harmonic or step, got '" + type + "'");
        return;
    }
    for (const auto& [key, entry] : r.entries) {
        if (key.first == "modulation" && key.second != "type" && !found->second.count(key.second)) {
            r.fail(entry.line, "key '" + key.second + "' does not apply to modulation type " + type);
        }
    }
    if (type == "harmonic") {
        HarmonicCoupling h;
        h.omega = std::nan("");
        r.get("modulation", "a", h.a);
        r.get("modulation", "omega", h.omega);
        r.get("modulation", "b", h.b);
        if (!r.has("modulation", "omega")) {
            r.fail(r.line_of("modulation", "type"), "harmonic modulation needs omega");
        } else {
            r.check(h.omega > 0.0, "modulation", "omega", "omega must be > 0");
        }
        r.check(h.b >= 0.0, "modulation", "b", "b must be >= 0");
        run.system.modulation = h;
    } else if (type == "step") {
        StepIndex s;
        s.period = std::nan("");
        r.get("modulation", "beta0", s.beta0);
        r.get("modulation", "delta", s.delta);
        r.get("modulation", "Z", s.period);
        if (!r.has("modulation", "Z")) {
            r.fail(r.line_of("modulation", "type"), "step modulation needs Z");
        } else {
            r.check(s.period > 0.0, "modulation", "Z", "Z must be > 0");
        }
        const bool has_zp = r.has("modulation", "Zprime");
        const bool has_ratio = r.has("modulation", "duty_ratio");
        if (has_zp == has_ratio) {
            r.fail(r.line_of("modulation", has_ratio ? "duty_ratio" : "type"),
                   "step modulation needs exactly one of Zprime and duty_ratio");
        } else if (has_zp) {
            r.get("modulation", "Zprime", s.duty);
            r.check(s.duty > 0.0, "modulation", "Zprime", "Zprime must be > 0");
            r.check(!(s.duty >= s.period), "modulation", "Zprime", "Zprime must be < Z");
        } else {
            double ratio = 0.5;
            r.get("modulation", "duty_ratio", ratio);
            r.check(ratio > 0.0 && ratio < 1.0, "modulation", "duty_ratio", "duty_ratio must lie in (0, 1)");
            run.duty_ratio = ratio;
            s.duty = ratio * s.period;
        }
        run.system.modulation = s;
    } else {
        run.system.modulation = NoModulation{};
    }
}

void read_sweep(Reader& r, RunConfig& run) {
    if (!r.section_lines.count("sweep") && !r.has("sweep", "axis") && !r.has("sweep", "values") &&
        !r.has("sweep", "outputs")) {
        return;
    }
    SweepSettings sw;
    r.get("sweep", "axis", sw.axis);
    const auto& mod = run.system.modulation;
    const bool harmonic = std::holds_alternative<HarmonicCoupling>(mod);
    const bool step = std::holds_alternative<StepIndex>(mod);
    if (sw.axis.empty()) {
        r.fail(r.line_of("sweep", "axis"), "sweep needs an axis");
    } else if (sw.axis == "a" || sw.axis == "omega") {
        r.check(harmonic, "sweep", "axis", "axis '" + sw.axis + "' needs a harmonic modulation");
    } else if (sw.axis == "delta" || sw.axis == "Z") {
        r.check(step, "sweep", "axis", "axis '" + sw.axis + "' needs a step modulation");
    } else {
        r.fail(r.line_of("sweep", "axis"), "axis: expected a, omega, delta or Z, got '" + sw.axis + "'");
    }

    std::string values;
    r.get("sweep", "values", values);
    if (values.empty()) {
        r.fail(r.line_of("sweep", "values"), "sweep needs values");
    } else {
        std::string why;
        if (auto grid = parse_grid(values, why)) {
            sw.values = std::move(*grid);
        } else {
            r.fail(r.line_of("sweep", "values"), why);
        }
    }

    std::string outputs = "spectrum, fbm";
    r.get("sweep", "outputs", outputs);
    std::set<SweepOutput> chosen;
    for (const auto& name : split_list(outputs)) {
        if (name == "trace") chosen.insert(SweepOutput::Trace);
        else if (name == "trace_files") { chosen.insert(SweepOutput::Trace); sw.trace_files = true; }
        else if (name == "spectrum") chosen.insert(SweepOutput::Spectrum);
        else if (name == "fbm") chosen.insert(SweepOutput::Fbm);
        else if (name == "markovian") {
            chosen.insert(SweepOutput::Markovian);
            r.check(harmonic, "sweep", "outputs", "output 'markovian' needs a harmonic modulation");
        } else if (name == "dynloc") {
            chosen.insert(SweepOutput::Dynloc);
            r.check(step && sw.axis == "Z", "sweep", "outputs", "output 'dynloc' needs a step modulation swept in Z");
        } else {
            r.fail(r.line_of("sweep", "outputs"), "outputs: unknown output '" + name + "'");
        }
    }
    if (chosen.empty()) {
        r.fail(r.line_of("sweep", "outputs"), "outputs: nothing requested");
    }
    sw.outputs.assign(chosen.begin(), chosen.end());

    if (step && sw.axis == "Z" && !run.duty_ratio) {
        const double zp = std::get<StepIndex>(mod).duty;
        for (double v : sw.values) {
            if (!(zp < v)) {
                r.fail(r.line_of("sweep", "values"), "Zprime must be < Z for every swept Z (Z = " +
                                                         std::to_string(v) + ")");
                break;
            }
        }
    }
    if (sw.axis == "omega") {
        r.check(std::all_of(sw.values.begin(), sw.values.end(), [](double v) { return v > 0.0; }),
                "sweep", "values", "omega values must be > 0");
    }
    if (sw.axis == "Z") {
        r.check(std::all_of(sw.values.begin(), sw.values.end(), [](double v) { return v > 0.0; }),
                "sweep", "values", "Z values must be > 0");
    }
    run.sweep = std::move(sw);
}

}  // namespace

ConfigFileError::ConfigFileError(std::string source, std::vector<ConfigIssue> issues)
    : ConfigError(format_issues(source, issues)), issues_(std::move(issues)) {}

std::string format_issues(const std::string& source, const std::vector<ConfigIssue>& issues) {
    std::ostringstream out;
    for (std::size_t i = 0; i < issues.size(); ++i) {
        if (i) out << '\n';
        if (issues[i].line > 0) {
            out << source << ':' << issues[i].line << ": " << issues[i].message;
        } else {
            out << source << ": " << issues[i].message;
        }
    }
    return out.str();
}

bool SweepSettings::wants(SweepOutput o) const {
    return std::find(outputs.begin(), outputs.end(), o) != outputs.end();
}

std::string to_string(SweepOutput o) {
    switch (o) {
        case SweepOutput::Trace: return "trace";
        case SweepOutput::Spectrum: return "spectrum";
        case SweepOutput::Fbm: return "fbm";
        case SweepOutput::Markovian: return "markovian";
        case SweepOutput::Dynloc: return "dynloc";
    }
    return "?";
}

ParseResult validate_config(std::string_view text, const std::vector<std::string>& overrides) {
    Reader r;
    r.parse(text);
    for (const auto& o : overrides) {
        r.apply_override(o);
    }

    RunConfig run;
    auto& sys = run.system;
    long long L = sys.array_size;
    r.get("system", "L", L);
    r.check(L >= 1, "system", "L", "L must be >= 1");
    r.check(L <= 100000, "system", "L", "L is unreasonably large");
    sys.array_size = static_cast<int>(std::clamp(L, 1LL, 100000LL));
    r.get("system", "beta", sys.beta);
    r.get("system", "beta1", sys.beta1_static);
    r.get("system", "kappa", sys.kappa);
    r.get("system", "kappa12", sys.kappa12_static);
    r.get("system", "lambdabar", sys.lambdabar);
    r.check(sys.kappa > 0.0, "system", "kappa", "kappa must be > 0");
    r.check(sys.lambdabar > 0.0, "system", "lambdabar", "lambdabar must be > 0");

    read_modulation(r, run);

    auto& p = run.propagate;
    long long stride = 1;
    r.get("propagate", "z_max", p.z_max);
    r.get("propagate", "dz", p.dz);
    r.get("propagate", "stride", stride);
    r.check(p.z_max > 0.0, "propagate", "z_max", "z_max must be > 0");
    r.check(p.dz >= 0.0, "propagate", "dz", "dz must be >= 0 (0 selects the default)");
    r.check(stride >= 1, "propagate", "stride", "stride must be >= 1");
    p.stride = static_cast<std::size_t>(std::max(1LL, stride));

    auto& f = run.floquet;
    r.get("floquet", "n_harmonics", f.n_harmonics);
    r.get("floquet", "verify_convergence", f.verify_convergence);
    r.get("floquet", "convergence_tol", f.convergence_tol);
    r.get("floquet", "max_doublings", f.max_doublings);
    r.get("floquet", "lab_frame", f.force_lab_frame);
    r.check(f.n_harmonics >= 0, "floquet", "n_harmonics", "n_harmonics must be >= 0 (0 selects the default)");
    r.check(f.convergence_tol > 0.0, "floquet", "convergence_tol", "convergence_tol must be > 0");
    r.check(f.max_doublings >= 1, "floquet", "max_doublings", "max_doublings must be >= 1");

    r.get("analysis", "tol_gap_factor", run.analysis.tol_gap_factor);
    r.get("analysis", "w_min", run.analysis.w_min);
    r.check(run.analysis.tol_gap_factor >= 0.0, "analysis", "tol_gap_factor", "tol_gap_factor must be >= 0");
    r.check(run.analysis.w_min >= 0.0, "analysis", "w_min", "w_min must be >= 0");

    auto& d = run.dynloc;
    r.get("dynloc", "Z_min", d.z_min);
    r.get("dynloc", "Z_max", d.z_max);
    r.get("dynloc", "Z_count", d.z_count);
    r.get("dynloc", "zero_samples", d.zero_samples);
    r.check(d.z_min > 0.0, "dynloc", "Z_min", "Z_min must be > 0");
    r.check(d.z_max > d.z_min, "dynloc", "Z_max", "Z_max must be > Z_min");
    r.check(d.z_count >= 1, "dynloc", "Z_count", "Z_count must be >= 1");
    r.check(d.zero_samples >= 1, "dynloc", "zero_samples", "zero_samples must be >= 1");

    read_sweep(r, run);

    ParseResult out;
    std::stable_sort(r.errors.begin(), r.errors.end(),
                     [](const ConfigIssue& a, const ConfigIssue& b) { return a.line < b.line; });
    out.errors = std::move(r.errors);
    if (out.errors.empty()) {
        try {
            validate(run.system);
            out.config = std::move(run);
        } catch (const ConfigError& e) {
            out.errors.push_back({0, e.what()});
        }
    }
    return out;
}

RunConfig parse_config(std::string_view text, const std::vector<std::string>& overrides,
                       const std::string& source) {
    auto res = validate_config(text, overrides);
    if (!res.ok()) {
        throw ConfigFileError(source, std::move(res.errors));
    }
    return std::move(*res.config);
}

RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigFileError(path.string(), {{0, "cannot open file"}});
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), overrides, path.string());
}

SystemConfig with_parameter(const RunConfig& run, const std::string& axis, double value) {
    SystemConfig c = run.system;
    if (auto* h = std::get_if<HarmonicCoupling>(&c.modulation)) {
        if (axis == "a") { h->a = value; return c; }
        if (axis == "omega") { h->omega = value; return c; }
    } else if (auto* s = std::get_if<StepIndex>(&c.modulation)) {
        if (axis == "delta") { s->delta = value; return c; }
        if (axis == "Z") {
            s->period = value;
            if (run.duty_ratio) s->duty = *run.duty_ratio * value;
            validate(c);
            return c;
        }
    }
    throw ConfigError("sweep axis '" + axis + "' does not exist in this modulation profile");
}

}  // namespace wgf
