#include "runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "viscsgn/io.hpp"
#include "viscsgn/verify/studies.hpp"

#ifndef VISC_SGN_VERSION
#define VISC_SGN_VERSION "unknown"
#endif

namespace viscsgn::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string stamp(double t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", t);
    return buf;
}

BulkState read_initial_file(const RunConfig& c, const Grid1D& grid) {
    std::ifstream in(c.path);
    if (!in) throw ConfigError("initial.path", 0, "cannot read '" + c.path + "'");
    std::string line;
    std::getline(in, line);
    if (line.rfind("x,eta,ubar", 0) != 0) throw ConfigError("initial.path", 0, "expected header 'x,eta,ubar'");
    BulkState s{Field(), Field(), 0.0};
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        double x = 0, e = 0, u = 0;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &e, &u) != 3) {
            throw ConfigError("initial.path", 0, "row " + std::to_string(row) + " is not 'x,eta,ubar'");
        }
        const int i = static_cast<int>(s.eta.size());
        if (i >= grid.nx() || std::abs(x - grid.x(i)) > 1e-9 * std::max(1.0, grid.length())) {
            throw ConfigError("initial.path", 0, "row " + std::to_string(row) + " does not match grid node " + std::to_string(i));
        }
        s.eta.push_back(e);
        s.ubar.push_back(u);
    }
    if (static_cast<int>(s.eta.size()) != grid.nx()) {
        throw ConfigError("initial.path", 0, "expected " + std::to_string(grid.nx()) + " rows");
    }
    return s;
}

CoupledState initial_state(const RunConfig& c, const CoupledSolver& solver) {
    const Grid1D& grid = solver.bulk().grid();
    const RegimeParams& p = solver.bulk().params();
    const auto n = static_cast<std::size_t>(grid.nx());
    switch (c.initial) {
        case InitialKind::rest:
            return solver.initial_state({Field(n, 0.0), Field(n, 0.0), 0.0}, c.layer_init);
        case InitialKind::solitary:
            if (solver.layer()) return balanced_solitary(solver, c.amplitude, c.center);
            return solver.initial_state(solitary_state(grid, p, c.amplitude, c.center), c.layer_init);
        case InitialKind::cosine: {
            BulkState s{Field(n), Field(n, 0.0), 0.0};
            for (std::size_t i = 0; i < n; ++i) s.eta[i] = c.amplitude / p.epsilon() * std::cos(c.wavenumber * grid.x(static_cast<int>(i)));
            return solver.initial_state(std::move(s), c.layer_init);
        }
        case InitialKind::file:
            return solver.initial_state(read_initial_file(c, grid), c.layer_init);
    }
    return {};
}

bool finite(const CoupledState& s) {
    auto ok = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
    };
    return ok(s.bulk.eta) && ok(s.bulk.ubar) && (!s.layer || ok(s.layer->u.data()));
}

json sample_json(const verify::DiagnosticsSample& s) {
    return {{"t", s.time},
            {"mass", s.mass},
            {"energy", s.bulk_energy + s.layer_energy},
            {"max_eta", s.max_eta},
            {"max_ubar", s.max_ubar},
            {"max_wall_shear", s.max_wall_shear},
            {"mass_residual", s.mass_residual}};
}

void write_series(const fs::path& path, const verify::RunLog& log) {
    std::ostringstream o;
    o << "t,mass,energy,max_eta,max_ubar,max_wall_shear\n";
    for (const auto& s : log.samples) {
        o << format_number(s.time) << ',' << format_number(s.mass) << ',' << format_number(s.bulk_energy + s.layer_energy)
          << ',' << format_number(s.max_eta) << ',' << format_number(s.max_ubar) << ','
          << format_number(s.max_wall_shear) << '\n';
    }
    write_text_file(path, o.str());
}

void write_snapshot(const fs::path& dir, const CoupledSolver& solver, const CoupledState& s, const std::string& tag) {
    const Grid1D& grid = solver.bulk().grid();
    write_field_csv(dir / ("eta_t" + tag + ".csv"), grid, s.bulk.eta);
    write_field_csv(dir / ("ubar_t" + tag + ".csv"), grid, s.bulk.ubar);
    if (solver.layer() && s.layer) {
        write_bl_csv(dir / ("ubl_t" + tag + ".csv"), solver.layer()->grid(), s.layer->u);
    } else {
        // No layer: header row only, so every output time still has three files.
        std::ostringstream o;
        o << "gamma\\x";
        for (int i = 0; i < grid.nx(); ++i) o << ',' << format_number(grid.x(i));
        o << '\n';
        write_text_file(dir / ("ubl_t" + tag + ".csv"), o.str());
    }
}

/// Peak height and position of eps*eta, for solitary runs.
json peak_json(const CoupledSolver& solver, const CoupledState& s) {
    const Field& eta = s.bulk.eta;
    const auto it = std::max_element(eta.begin(), eta.end());
    const double eps = solver.bulk().params().epsilon();
    return {{"amplitude", eps * peak_value(eta)},
            {"position", solver.bulk().grid().x(static_cast<int>(it - eta.begin()))}};
}

int simulate(const RunConfig& c, const fs::path& out, std::ostream& log) {
    const RegimeParams p = c.params();
    const Grid1D grid(c.nx, c.x0, c.x1);
    BulkOptions bo;
    bo.stencil_order = c.stencil_order;
    bo.cfl = c.cfl;
    bo.variant = c.bracket;
    bo.time_scheme = c.time_scheme;
    std::optional<BoundaryLayer> layer;
    if (p.has_layer()) {
        layer.emplace(GridBL(grid, c.ngamma, p.gamma_inf(), c.stretching, c.ratio), p, BLOptions{c.matching, c.cfl});
    }
    const CoupledSolver solver(BulkSolver(grid, p, bo), layer, c.splitting);

    CoupledState state = initial_state(c, solver);
    const CoupledState initial = state;
    verify::RunRecorder rec(solver);
    rec.sample(state);

    json summary;
    summary["code_version"] = VISC_SGN_VERSION;
    summary["config"] = to_ini(c);
    summary["status"] = "ok";
    long steps = 0;
    std::vector<std::string> snapshots;

    try {
        for (int k = 1; k <= c.output_count(); ++k) {
            const double target = k * c.output_every;
            while (state.bulk.time < target) {
                double dt = c.dt ? *c.dt : solver.stable_dt(state);
                if (!(dt > 0.0) || !std::isfinite(dt)) throw RuntimeAbort("time step collapsed to " + std::to_string(dt));
                const double left = target - state.bulk.time;
                if (dt >= left * (1.0 - 1e-9)) dt = left;
                CouplingData cd;
                CoupledState next = solver.step(state, dt, &cd);
                if (!finite(next)) throw RuntimeAbort("non-finite state at t = " + std::to_string(next.bulk.time));
                rec.observe(cd, dt);
                state = std::move(next);
                ++steps;
                if (dt == left) break;
            }
            state.bulk.time = target;
            if (state.layer) state.layer->time = target;
            rec.sample(state);
            write_snapshot(out, solver, state, stamp(target));
            snapshots.push_back(stamp(target));
            log << "t = " << stamp(target) << "  max|eta| = " << format_number(rec.log().samples.back().max_eta) << "\n";
        }
    } catch (const Error& e) {
        log << "runtime abort: " << e.what() << "\n";
        write_snapshot(out, solver, state, stamp(state.bulk.time));
        write_series(out / "series.csv", rec.log());
        summary["status"] = "aborted";
        summary["error"] = e.what();
        summary["last_good_time"] = state.bulk.time;
        summary["steps"] = steps;
        summary["final"] = sample_json(rec.log().samples.back());
        write_text_file(out / "summary.json", summary.dump(2) + "\n");
        return kRuntimeAbort;
    }

    write_series(out / "series.csv", rec.log());
    const verify::DiagnosticsRecord audit = verify::conservation_audit(rec.log());
    summary["steps"] = steps;
    summary["snapshots"] = snapshots;
    summary["initial"] = sample_json(rec.log().samples.front());
    summary["final"] = sample_json(rec.log().samples.back());
    summary["conservation"] = {{"mass_drift_rate", audit.mass_drift_rate},
                               {"max_mass_residual", audit.max_mass_residual},
                               {"mass_flag", audit.mass_flag},
                               {"energy_non_increasing", audit.energy_non_increasing},
                               {"max_energy_increase", audit.max_energy_increase}};
    if (c.initial == InitialKind::solitary) {
        summary["solitary"] = {{"initial", peak_json(solver, initial)}, {"final", peak_json(solver, state)}};
    }
    write_text_file(out / "summary.json", summary.dump(2) + "\n");
    return kOk;
}

int verify_studies(const RunConfig& c, const fs::path& out, std::ostream& log) {
    const fs::path dir = out / "verify";
    fs::create_directories(dir);
    const RegimeParams base = c.params();
    json all = json::array();
    for (const std::string& tag : c.studies) {
        const verify::Equation eq = verify::parse_equation(tag);
        const auto report = verify::order_study(
            eq, [](const RegimeParams& p) { return verify::ansatz_flow(p); }, c.mu_values, base);
        write_text_file(dir / (tag + ".json"), verify::to_json(report).dump(2) + "\n");
        write_text_file(dir / (tag + ".csv"), verify::to_csv(report));
        all.push_back(verify::to_json(report));
        log << tag << ": " << (report.pass ? "pass" : "fail") << " (" << report.diagnostic << ")\n";
    }
    json summary = {{"code_version", VISC_SGN_VERSION}, {"config", to_ini(c)}, {"studies", all}};
    write_text_file(dir / "summary.json", summary.dump(2) + "\n");
    return kOk;
}

}  // namespace

int run(const RunConfig& config, const fs::path& out_dir, std::ostream& log) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec || !fs::is_directory(out_dir)) throw Error("cannot create output directory '" + out_dir.string() + "'");
    int rc = kOk;
    if (config.mode != Mode::verify) rc = simulate(config, out_dir, log);
    if (rc == kOk && config.mode != Mode::simulate) rc = verify_studies(config, out_dir, log);
    return rc;
}

}  // namespace viscsgn::cli
