// wgf: command-line front end.
//
//   wgf <command> --config FILE --out DIR [--set key=value ...]
//
// Exit status: 0 success, 1 configuration error, 2 numerical failure.

#include "wgf/analysis.hpp"
#include "wgf/config.hpp"
#include "wgf/dynloc.hpp"
#include "wgf/export.hpp"
#include "wgf/floquet.hpp"
#include "wgf/io.hpp"
#include "wgf/markovian.hpp"
#include "wgf/propagator.hpp"
#include "wgf/sweep.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <variant>

namespace fs = std::filesystem;
using namespace wgf;

namespace {

struct Common {
    std::string config;
    std::string out = ".";
    std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config,-c", c.config, "configuration file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out,-o", c.out, "output directory")->capture_default_str();
    cmd->add_option("--set", c.sets, "override, e.g. --set modulation.a=3 (repeatable)");
}

RunConfig load(const Common& c) {
    RunConfig run = load_config(c.config, c.sets);
    fs::create_directories(c.out);
    return run;
}

void report_file(const fs::path& p, const std::string& digest) {
    std::cout << "wrote " << p.string() << "  fnv1a64=" << digest << "\n";
}

int cmd_propagate(const Common& c) {
    const RunConfig run = load(c);
    PropagationOptions opt;
    opt.dz = run.propagate.dz;
    opt.stride = run.propagate.stride;
    const AmplitudeTrace trace = propagate(run.system, run.propagate.z_max, opt);
    const fs::path out(c.out);
    report_file(out / "trace.csv", trace_csv(trace).write(out / "trace.csv"));
    report_file(out / "intensity.csv", intensity_csv(trace).write(out / "intensity.csv"));
    std::cout << "samples " << trace.size() << ", |A1(z_max)|^2 = "
              << format_double(trace.principal_intensity(trace.size() - 1))
              << ", max norm drift = " << trace.max_norm_drift() << "\n";
    return 0;
}

int cmd_spectrum(const Common& c, double param, bool modes) {
    const RunConfig run = load(c);
    const FloquetSpectrum s = solve_spectrum(run.system, run.floquet);
    const fs::path out(c.out);
    CsvWriter csv(spectrum_header(s.dimension));
    csv.add_row(spectrum_row(param, s));
    report_file(out / "spectrum.csv", csv.write(out / "spectrum.csv"));
    if (modes) {
        report_file(out / "modes.json", write_text(out / "modes.json", modes_json(s)));
    }
    std::cout << s.size() << " quasienergies, N_F = " << s.n_harmonics << ", omega = " << format_double(s.omega)
              << "\n";
    return 0;
}

int cmd_fbm(const Common& c, double param) {
    const RunConfig run = load(c);
    const FbmReport r = find_fbm(run.system, run.floquet, run.analysis);
    const fs::path out(c.out);
    report_file(out / "report.json", write_text(out / "report.json", fbm_record_json(param, r, 2)));
    std::cout << "M = " << r.count;
    if (r.gap_absent) {
        std::cout << " (no gap: omega <= 4 kappa / lambdabar)";
    }
    for (int l = 0; l < r.count; ++l) {
        std::cout << "\n  eps = " << format_double(r.quasienergies[static_cast<std::size_t>(l)])
                  << "  w1 = " << format_double(r.principal_weights[static_cast<std::size_t>(l)]);
    }
    std::cout << "\n";
    return 0;
}

int cmd_markovian(const Common& c) {
    const RunConfig run = load(c);
    const auto cmp = compare_with_exact(run.system, run.propagate.z_max, run.propagate.dz, run.propagate.stride);
    const fs::path out(c.out);
    report_file(out / "markov.csv", markov_csv(cmp).write(out / "markov.csv"));
    std::cout << "|alpha(z_max)|^2 = " << format_double(cmp.markov.back())
              << ", exact |A1(z_max)|^2 = " << format_double(cmp.exact.back()) << "\n";
    return 0;
}

int cmd_dynloc(const Common& c) {
    const RunConfig run = load(c);
    const auto* step = std::get_if<StepIndex>(&run.system.modulation);
    if (!step) {
        throw ConfigError("dynloc needs a step modulation");
    }
    const double ratio = run.duty_ratio.value_or(step->duty / step->period);
    const StepFamily family{step->beta0, step->delta, ratio};
    const auto& d = run.dynloc;
    const fs::path out(c.out);

    const auto zeros = find_f0_zeros(family, d.z_min, d.z_max, d.zero_samples);
    CsvWriter zcsv({"Z_zero"});
    for (double z : zeros) zcsv.add_row(std::vector<double>{z});
    report_file(out / "f0_zeros.csv", zcsv.write(out / "f0_zeros.csv"));

    CsvWriter csv(dynloc_header());
    for (int i = 0; i < d.z_count; ++i) {
        const double period = d.z_count == 1 ? d.z_min : d.z_min + (d.z_max - d.z_min) * i / (d.z_count - 1);
        SystemConfig cfg = run.system;
        cfg.modulation = family.at(period);
        csv.add_row(dynloc_row(compare_methods(cfg, run.propagate.z_max, run.floquet, run.analysis)));
    }
    report_file(out / "dynloc.csv", csv.write(out / "dynloc.csv"));
    std::cout << zeros.size() << " zero(s) of F0 in [" << format_double(d.z_min) << ", "
              << format_double(d.z_max) << "]";
    for (double z : zeros) std::cout << " " << format_double(z);
    std::cout << "\n";
    return 0;
}

int cmd_sweep(const Common& c, int workers) {
    const RunConfig run = load(c);
    if (!run.sweep) {
        throw ConfigError("the configuration has no [sweep] section");
    }
    const SweepResult res = run_sweep(run, c.out, workers);
    for (const auto& f : res.files) {
        std::cout << "wrote " << (fs::path(c.out) / f.path).string() << "  fnv1a64=" << f.digest << "\n";
    }
    std::cout << "manifest " << (fs::path(c.out) / "manifest.json").string() << "  fnv1a64=" << res.manifest_digest
              << "\n";
    const auto failed = res.failed_points();
    if (failed) {
        std::cerr << failed << " of " << res.points.size() << " points failed; see manifest.json\n";
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Floquet analysis of a modulated waveguide coupled to a waveguide array"};
    app.require_subcommand(1);

    Common common;
    double param = 0.0;
    bool modes = false;
    int workers = 0;

    auto* p = app.add_subcommand("propagate", "integrate the coupled-mode equations");
    add_common(p, common);
    auto* s = app.add_subcommand("spectrum", "quasienergy spectrum");
    add_common(s, common);
    s->add_option("--param", param, "value written to the param_value column")->capture_default_str();
    s->add_flag("--modes", modes, "also write modes.json with the Fourier components");
    auto* f = app.add_subcommand("fbm", "Floquet bound modes in the gap");
    add_common(f, common);
    f->add_option("--param", param, "value written to the param field")->capture_default_str();
    auto* m = app.add_subcommand("markovian", "spectral-filtering estimate next to the exact intensity");
    add_common(m, common);
    auto* d = app.add_subcommand("dynloc", "rotating-frame factors and effective model over a Z grid");
    add_common(d, common);
    auto* w = app.add_subcommand("sweep", "parameter sweep from the [sweep] section");
    add_common(w, common);
    w->add_option("--workers", workers, "worker threads (default: WGF_WORKERS or all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;  // usage errors count as configuration errors
    }

    try {
        if (p->parsed()) return cmd_propagate(common);
        if (s->parsed()) return cmd_spectrum(common, param, modes);
        if (f->parsed()) return cmd_fbm(common, param);
        if (m->parsed()) return cmd_markovian(common);
        if (d->parsed()) return cmd_dynloc(common);
        if (w->parsed()) return cmd_sweep(common, workers);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error:\n" << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
