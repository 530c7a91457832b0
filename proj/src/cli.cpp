#include "nlosc/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nlosc/error.hpp"
#include "nlosc/measures.hpp"
#include "nlosc/oracle.hpp"
#include "nlosc/potentials.hpp"
#include "nlosc/specfun.hpp"

namespace nlosc::cli {

namespace {

using Json = nlohmann::ordered_json;

// Rounds to 12 significant digits so JSON (shortest round-trip printing)
// and CSV carry the same digits.
Json json_number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return std::strtod(format_number(v).c_str(), nullptr);
}

Json json_optional(const std::optional<double>& v) { return v ? json_number(*v) : Json(nullptr); }

std::string csv_optional(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

std::string csv_safe(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

// Emits to --out when given, otherwise to the supplied stream.
void emit(const RunConfig& config, std::ostream& out, const std::string& text) {
    if (config.out_path) {
        std::ofstream file(*config.out_path, std::ios::binary);
        if (!file) {
            throw Error(ErrorKind::Domain, "cannot open output file " + *config.out_path);
        }
        file << text;
        return;
    }
    out << text;
}

PotentialSpec parse_and_validate(const std::string& text) {
    if (text.empty()) {
        throw Error(ErrorKind::Parse, "--potential is required");
    }
    PotentialSpec spec = parse_potential(text);
    validate(spec);
    return spec;
}

std::vector<double> axis_values(const RunConfig& c) {
    if (c.points < 2) {
        throw Error(ErrorKind::Domain, "--points must be at least 2");
    }
    if (!(c.from < c.to)) {
        throw Error(ErrorKind::Domain, "sweep range must be strictly increasing (--from < --to)");
    }
    if (c.log_spacing && !(c.from > 0.0)) {
        throw Error(ErrorKind::Domain, "--log-spacing needs a positive range");
    }
    std::vector<double> values(c.points);
    for (std::size_t i = 0; i < c.points; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(c.points - 1);
        values[i] = c.log_spacing
                        ? std::exp(std::log(c.from) + t * (std::log(c.to) - std::log(c.from)))
                        : c.from + t * (c.to - c.from);
    }
    values.front() = c.from;
    values.back() = c.to;
    return values;
}

// Runs job(i) for i in [0, count) on a bounded pool; results are stored by index.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& job) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, count);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) job(i);
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
}

}  // namespace

std::string format_number(double v) {
    if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

int run_measure(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const PotentialSpec spec = parse_and_validate(config.potential);
    const MeasureReport r = measure_report(spec, config.grid);
    for (const auto& w : r.diagnostics.warnings) err << "warning: " << w << '\n';

    std::ostringstream os;
    if (config.format == Format::Json) {
        Json j;
        j["potential"] = format_potential(spec);
        j["eta_b"] = json_optional(r.eta_b);
        j["eta_ng"] = json_number(r.eta_ng);
        j["omega_r"] = json_optional(r.omega_r);
        j["ground_energy"] = json_number(r.ground_energy);
        j["det_sigma"] = json_number(r.det_sigma);
        j["fidelity_to_reference"] = json_optional(r.fidelity_to_reference);
        j["norm_defect"] = json_number(r.diagnostics.norm_defect);
        if (r.diagnostics.grid) {
            const Grid& g = *r.diagnostics.grid;
            j["grid"] = {{"x_min", json_number(g.x_min())},
                         {"x_max", json_number(g.x_max())},
                         {"n_points", g.n_points()}};
        } else {
            j["grid"] = nullptr;
        }
        j["warnings"] = r.diagnostics.warnings;
        os << j.dump(2) << '\n';
    } else {
        os << "eta_b,eta_ng,omega_r,ground_energy,det_sigma,fidelity_to_reference,norm_defect,"
              "grid_x_min,grid_x_max,grid_points\n";
        os << csv_optional(r.eta_b) << ',' << format_number(r.eta_ng) << ','
           << csv_optional(r.omega_r) << ',' << format_number(r.ground_energy) << ','
           << format_number(r.det_sigma) << ',' << csv_optional(r.fidelity_to_reference) << ','
           << format_number(r.diagnostics.norm_defect) << ',';
        if (r.diagnostics.grid) {
            const Grid& g = *r.diagnostics.grid;
            os << format_number(g.x_min()) << ',' << format_number(g.x_max()) << ','
               << g.n_points();
        } else {
            os << ",,";
        }
        os << '\n';
    }
    emit(config, out, os.str());
    return 0;
}

int run_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const PotentialSpec base = parse_potential(config.potential);
    const auto names = parameter_names(base);
    if (std::find(names.begin(), names.end(), config.axis) == names.end()) {
        throw Error(ErrorKind::Parse, "sweep axis '" + config.axis + "' is not a parameter of " +
                                          std::string(family_name(base)));
    }
    const std::vector<double> values = axis_values(config);

    struct Row {
        std::optional<MeasureReport> report;
        std::string error;
    };
    std::vector<Row> rows(values.size());
    parallel_for(values.size(), config.threads, [&](std::size_t i) {
        try {
            const PotentialSpec spec = with_parameter(base, config.axis, values[i]);
            validate(spec);
            rows[i].report = measure_report(spec, config.grid);
        } catch (const Error& e) {
            rows[i].error = e.what();
        }
    });

    const bool any_ok = std::any_of(rows.begin(), rows.end(), [](const Row& r) { return r.report.has_value(); });
    std::ostringstream os;
    if (config.format == Format::Json) {
        Json j;
        j["potential"] = config.potential;
        j["axis"] = config.axis;
        Json table = Json::array();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            Json row;
            row[config.axis] = json_number(values[i]);
            if (const auto& r = rows[i].report) {
                row["eta_b"] = json_optional(r->eta_b);
                row["eta_ng"] = json_number(r->eta_ng);
                row["omega_r"] = json_optional(r->omega_r);
                row["ground_energy"] = json_number(r->ground_energy);
                row["det_sigma"] = json_number(r->det_sigma);
                row["error"] = nullptr;
            } else {
                row["eta_b"] = nullptr;
                row["eta_ng"] = nullptr;
                row["omega_r"] = nullptr;
                row["ground_energy"] = nullptr;
                row["det_sigma"] = nullptr;
                row["error"] = rows[i].error;
            }
            table.push_back(std::move(row));
        }
        j["rows"] = std::move(table);
        os << j.dump(2) << '\n';
    } else {
        os << config.axis << ",eta_b,eta_ng,omega_r,ground_energy,det_sigma,error\n";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            os << format_number(values[i]) << ',';
            if (const auto& r = rows[i].report) {
                os << csv_optional(r->eta_b) << ',' << format_number(r->eta_ng) << ','
                   << csv_optional(r->omega_r) << ',' << format_number(r->ground_energy) << ','
                   << format_number(r->det_sigma) << ",\n";
            } else {
                os << ",,,,," << csv_safe(rows[i].error) << '\n';
            }
        }
    }
    emit(config, out, os.str());
    if (!any_ok) {
        err << "error: every sweep point failed\n";
        return 1;
    }
    return 0;
}

int run_scatter(const RunConfig& config, std::ostream& out, std::ostream& /*err*/) {
    const auto records =
        perturbation::scatter_sample(config.n, config.eps3, config.eps4, config.omega, config.seed);
    std::ostringstream os;
    if (config.format == Format::Json) {
        Json j;
        j["seed"] = config.seed;
        j["omega"] = json_number(config.omega);
        Json table = Json::array();
        for (const auto& r : records) {
            table.push_back({{"eps3", json_number(r.eps3)},
                             {"eps4", json_number(r.eps4)},
                             {"eta_b", json_number(r.eta_b)},
                             {"eta_ng", json_number(r.eta_ng)}});
        }
        j["records"] = std::move(table);
        os << j.dump(2) << '\n';
    } else {
        os << "eps3,eps4,eta_b,eta_ng\n";
        for (const auto& r : records) {
            os << format_number(r.eps3) << ',' << format_number(r.eps4) << ','
               << format_number(r.eta_b) << ',' << format_number(r.eta_ng) << '\n';
        }
    }
    emit(config, out, os.str());
    return 0;
}

int run_curve(const RunConfig& config, std::ostream& out, std::ostream& /*err*/) {
    if (config.points < 2) throw Error(ErrorKind::Domain, "--points must be at least 2");
    if (!(config.from >= 0.0) || !(config.to < 1.0) || !(config.from < config.to)) {
        throw Error(ErrorKind::Domain, "curve needs 0 <= --from < --to < 1");
    }
    std::ostringstream os;
    Json table = Json::array();
    if (config.format == Format::Csv) os << "eta_b,printed,corrected\n";
    for (std::size_t i = 0; i < config.points; ++i) {
        const double e = config.from + (config.to - config.from) * static_cast<double>(i) /
                                           static_cast<double>(config.points - 1);
        const auto pt = perturbation::parametric_curve(e);
        if (config.format == Format::Json) {
            table.push_back({{"eta_b", json_number(e)},
                             {"printed", json_optional(pt.printed)},
                             {"corrected", json_number(pt.corrected)}});
        } else {
            os << format_number(e) << ',' << csv_optional(pt.printed) << ','
               << format_number(pt.corrected) << '\n';
        }
    }
    if (config.format == Format::Json) {
        Json j;
        j["points"] = std::move(table);
        os << j.dump(2) << '\n';
    }
    emit(config, out, os.str());
    return 0;
}

int run_oracle_check(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const PotentialSpec spec = parse_and_validate(config.potential);
    const Grid grid = auto_grid(spec, config.grid);
    const SampledWavefunction analytic = normalize(sample_ground_state(spec, grid));
    const oracle::EigenResult fd = oracle::fd_ground_state(spec, grid);

    const double e_analytic = ground_energy(spec);
    const double diff = fd.energy - e_analytic;
    const double fidelity = fidelity_pure(analytic, fd.wavefunction);
    const double ng_analytic = non_gaussianity(analytic);
    const double ng_fd = non_gaussianity(fd.wavefunction);
    std::optional<double> single_alpha;
    if (const auto* m = std::get_if<Morse>(&spec)) {
        single_alpha = morse_energy_single_alpha(m->depth, m->alpha);
    }
    std::optional<double> single_alpha_diff;
    if (single_alpha) single_alpha_diff = fd.energy - *single_alpha;

    std::ostringstream os;
    if (config.format == Format::Json) {
        Json j;
        j["potential"] = format_potential(spec);
        j["analytic_energy"] = json_number(e_analytic);
        j["fd_energy"] = json_number(fd.energy);
        j["energy_diff"] = json_number(diff);
        j["fidelity"] = json_number(fidelity);
        j["eta_ng_analytic"] = json_number(ng_analytic);
        j["eta_ng_fd"] = json_number(ng_fd);
        j["single_alpha_energy"] = json_optional(single_alpha);
        j["single_alpha_diff"] = json_optional(single_alpha_diff);
        j["grid_points"] = grid.n_points();
        os << j.dump(2) << '\n';
    } else {
        os << "analytic_energy,fd_energy,energy_diff,fidelity,eta_ng_analytic,eta_ng_fd,"
              "single_alpha_energy,single_alpha_diff\n";
        os << format_number(e_analytic) << ',' << format_number(fd.energy) << ','
           << format_number(diff) << ',' << format_number(fidelity) << ','
           << format_number(ng_analytic) << ',' << format_number(ng_fd) << ','
           << csv_optional(single_alpha) << ',' << csv_optional(single_alpha_diff) << '\n';
    }
    emit(config, out, os.str());

    if (fidelity < 1.0 - 1e-5 || std::abs(diff) > 1e-4) {
        err << "error: analytic and finite-difference ground states disagree (energy diff "
            << format_number(diff) << ", fidelity " << format_number(fidelity) << ")\n";
        return 1;
    }
    return 0;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Nonlinearity measures for one-dimensional quantum oscillators", "nlosc"};
    app.require_subcommand(1);

    RunConfig config;
    std::string format = "csv";
    std::optional<std::string> out_path;
    std::optional<std::size_t> points;
    std::optional<double> from;
    std::optional<double> to;
    std::string eps3_text = "-0.1,0.1";
    std::string eps4_text = "-0.25,0.25";

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--potential", config.potential, "potential, e.g. morse:D=1,alpha=1");
        sub->add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", out_path, "output file (default: standard output)");
        sub->add_option("--points", points, "number of sweep / curve points");
        sub->add_option("--grid-points", config.grid.n_points, "minimum grid points");
        sub->add_option("--tail", config.grid.target_tail, "relative amplitude at the grid ends");
        sub->add_option("--seed", config.seed, "random seed");
        sub->add_flag("--log-spacing", config.log_spacing, "logarithmic sweep spacing");
        sub->add_option("--threads", config.threads, "worker threads (0: all cores)");
    };

    CLI::App* measure = app.add_subcommand("measure", "measures for one potential");
    CLI::App* sweep = app.add_subcommand("sweep", "measures along one parameter");
    CLI::App* scatter = app.add_subcommand("scatter", "random weakly perturbed oscillators");
    CLI::App* curve = app.add_subcommand("curve", "eta_ng(eta_b) curve for even perturbations");
    CLI::App* oracle = app.add_subcommand("oracle-check", "analytic vs finite-difference ground state");
    for (CLI::App* sub : {measure, sweep, scatter, curve, oracle}) add_common(sub);

    sweep->add_option("--axis", config.axis, "parameter to sweep")->required();
    sweep->add_option("--from", from, "first value")->required();
    sweep->add_option("--to", to, "last value")->required();
    scatter->add_option("--n", config.n, "number of samples")->required();
    scatter->add_option("--eps3", eps3_text, "eps3 range lo,hi");
    scatter->add_option("--eps4", eps4_text, "eps4 range lo,hi");
    scatter->add_option("--omega", config.omega, "oscillator frequency");
    curve->add_option("--from", from, "first eta_b");
    curve->add_option("--to", to, "last eta_b");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    const auto parse_range = [](const std::string& text, const char* name) {
        const auto comma = text.find(',');
        char* end = nullptr;
        perturbation::Range r;
        if (comma != std::string::npos) {
            const std::string lo = text.substr(0, comma);
            const std::string hi = text.substr(comma + 1);
            r.lo = std::strtod(lo.c_str(), &end);
            const bool lo_ok = !lo.empty() && end == lo.c_str() + lo.size();
            r.hi = std::strtod(hi.c_str(), &end);
            const bool hi_ok = !hi.empty() && end == hi.c_str() + hi.size();
            if (lo_ok && hi_ok) return r;
        }
        throw Error(ErrorKind::Parse, std::string(name) + " expects lo,hi");
    };

    try {
        config.format = format == "json" ? Format::Json : Format::Csv;
        config.out_path = out_path;
        if (measure->parsed()) {
            config.command = Command::Measure;
            return run_measure(config, out, err);
        }
        if (sweep->parsed()) {
            config.command = Command::Sweep;
            config.from = *from;
            config.to = *to;
            config.points = points.value_or(20);
            return run_sweep(config, out, err);
        }
        if (scatter->parsed()) {
            config.command = Command::Scatter;
            config.eps3 = parse_range(eps3_text, "--eps3");
            config.eps4 = parse_range(eps4_text, "--eps4");
            return run_scatter(config, out, err);
        }
        if (curve->parsed()) {
            config.command = Command::Curve;
            config.from = from.value_or(0.0);
            config.to = to.value_or(0.95);
            config.points = points.value_or(20);
            return run_curve(config, out, err);
        }
        config.command = Command::OracleCheck;
        return run_oracle_check(config, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace nlosc::cli
