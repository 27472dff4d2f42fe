#include "wbsw/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <stdexcept>

#include "wbsw/scheme_still.hpp"

namespace wbsw {

FlowCase parse_flow_case(const std::string& text) {
    if (text == "a") return FlowCase::Subcritical;
    if (text == "b") return FlowCase::Transcritical;
    if (text == "c") return FlowCase::TranscriticalShock;
    if (text == "lake") return FlowCase::LakeAtRest;
    throw std::invalid_argument("unknown case '" + text + "' (expected a, b, c or lake)");
}

SchemeKind parse_scheme(const std::string& text) {
    if (text == "still") return SchemeKind::Still;
    if (text == "moving") return SchemeKind::Moving;
    if (text == "oracle1") return SchemeKind::FirstOrder;
    throw std::invalid_argument("unknown scheme '" + text + "' (expected still, moving or oracle1)");
}

std::string to_string(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::Still: return "still";
        case SchemeKind::Moving: return "moving";
        case SchemeKind::FirstOrder: return "oracle1";
    }
    return "?";
}

CaseSpec make_case(FlowCase flow) {
    CaseSpec spec;
    spec.flow = flow;
    const double g = spec.g;
    switch (flow) {
        case FlowCase::Subcritical:
            spec.discharge = 4.42;
            spec.energy_upstream = spec.energy_downstream = 22.06605;
            spec.inflow_discharge = 4.42;
            spec.outflow_depth = 2.0;
            break;
        case FlowCase::Transcritical:
            // The stated constant energy is kept for reference; the background
            // itself is the crest-critical profile built by steady_profile.
            spec.discharge = 1.53;
            spec.energy_upstream = spec.energy_downstream =
                1.53 * 1.53 / (2.0 * 0.66 * 0.66) + g * 0.66;
            spec.inflow_discharge = 1.53;
            spec.outflow_depth = 0.66;
            break;
        case FlowCase::TranscriticalShock:
            spec.discharge = 0.18;
            spec.energy_upstream = 1.5 * std::pow(g * 0.18, 2.0 / 3.0) + g * 0.2;
            spec.energy_downstream = 0.18 * 0.18 / (2.0 * 0.33 * 0.33) + g * 0.33;
            spec.inflow_discharge = 0.18;
            spec.outflow_depth = 0.33;
            spec.n_cells = 200;
            spec.t_end = 3.0;
            break;
        case FlowCase::LakeAtRest:
            spec.discharge = 0.0;
            spec.surface = 1.0;
            spec.energy_upstream = spec.energy_downstream = g * spec.surface;
            spec.inflow_discharge = 0.0;
            spec.outflow_depth = 1.0;
            spec.amplitude = 0.0;
            break;
    }
    return spec;
}

CaseSpec smooth_accuracy_case() {
    CaseSpec spec = make_case(FlowCase::Subcritical);
    spec.bathymetry = "gaussian";
    spec.shape = PerturbationShape::Smooth;
    spec.perturbation = {4.0, 8.0};
    spec.amplitude = 0.05;
    spec.t_end = 0.5;
    return spec;
}

CaseSpec RunConfig::resolve() const {
    CaseSpec spec = smooth ? smooth_accuracy_case() : make_case(flow);
    spec.flow = flow;
    if (smooth && flow != FlowCase::Subcritical) {
        throw std::invalid_argument("the smooth accuracy case uses the subcritical background");
    }
    if (n_cells) spec.n_cells = *n_cells;
    if (amplitude) spec.amplitude = *amplitude;
    if (t_end) spec.t_end = *t_end;
    spec.cfl = cfl;
    if (spec.n_cells < 25) throw std::invalid_argument("n_cells must be at least 25");
    spec.validate();
    return spec;
}

// ---------------------------------------------------------------------------

FirstOrderScheme::FirstOrderScheme(Grid grid, Bathymetry bathymetry, BoundaryFill fill, double g)
    : grid_(grid), bathymetry_(std::move(bathymetry)), fill_(std::move(fill)), g_(g),
      bottom_(bathymetry_, grid_) {}

double FirstOrderScheme::max_wave_speed(const ConservedState& state) const {
    return wbsw::max_wave_speed(state, g_);
}

SemiDiscrete FirstOrderScheme::evaluate(const ConservedState& state) {
    const int n = grid_.n_cells();
    const PaddedState padded = fill_(state);
    SemiDiscrete out{ConservedState(n), std::vector<Flux>(n + 1)};
    for (int j = 0; j <= n; ++j) {
        const Conserved um{padded.depth(j - 1), padded.discharge(j - 1)};
        const Conserved up{padded.depth(j), padded.discharge(j)};
        const double alpha = std::max(wave_speed(um, g_), wave_speed(up, g_));
        const Flux fm = physical_flux(um, g_);
        const Flux fp = physical_flux(up, g_);
        out.face_flux[j] = {0.5 * (fm[0] + fp[0] - alpha * (up.h - um.h)),
                            0.5 * (fm[1] + fp[1] - alpha * (up.hu - um.hu))};
    }
    const double dx = grid_.dx();
    for (int i = 0; i < n; ++i) {
        const double source = -g_ * state.h[i] * (bottom_.at_face(i + 1) - bottom_.at_face(i));
        out.dudt.h[i] = -(out.face_flux[i + 1][0] - out.face_flux[i][0]) / dx;
        out.dudt.hu[i] = (-(out.face_flux[i + 1][1] - out.face_flux[i][1]) + source) / dx;
    }
    return out;
}

ConservedState oracle_first_order(const ConservedState& state, const Grid& grid,
                                  const Bathymetry& bathymetry, const BoundarySpec& boundary) {
    FirstOrderScheme scheme(grid, bathymetry, make_boundary_fill(boundary), boundary.g);
    return scheme.rhs(state);
}

BoundarySpec boundary_of(const CaseSpec& spec) {
    return {spec.inflow_discharge, spec.outflow_depth, spec.g};
}

std::unique_ptr<SemiDiscreteScheme> make_scheme(SchemeKind kind, const CaseSpec& spec,
                                                const Bathymetry& bathymetry,
                                                const SteadyProfile& profile) {
    const Grid grid = spec.grid();
    BoundaryFill fill = make_boundary_fill(boundary_of(spec));
    switch (kind) {
        case SchemeKind::Still:
            return std::make_unique<StillWaterScheme>(
                grid, bathymetry, std::move(fill),
                StillSchemeOptions{BottomMode::Reconstructed, false, spec.g});
        case SchemeKind::Moving:
            return std::make_unique<MovingWaterScheme>(grid, bathymetry, std::move(fill),
                                                       profile.cell_branches(grid),
                                                       MovingSchemeOptions{BottomMode::Sampled, spec.g});
        case SchemeKind::FirstOrder:
            return std::make_unique<FirstOrderScheme>(grid, bathymetry, std::move(fill), spec.g);
    }
    throw std::invalid_argument("make_scheme: unknown scheme");
}

ConservedState initial_state(const CaseSpec& spec, const SteadyProfile& profile) {
    const Grid grid = spec.grid();
    const ConservedState background = profile.cell_averages(grid);
    if (spec.shape == PerturbationShape::Smooth) {
        return apply_smooth_perturbation(background, grid, spec.perturbation, spec.amplitude);
    }
    return apply_perturbation(background, grid, spec.perturbation, spec.amplitude);
}

PulseWindows pulse_windows(const SteadyProfile& profile, Interval perturbation, double t,
                           double x_min, double x_max) {
    const double g = profile.gravity();
    auto speed = [&](double x, double sign) {
        x = std::clamp(x, x_min, x_max);
        const double h = profile.depth(x);
        return profile.discharge() / h + sign * std::sqrt(g * h);
    };
    auto track = [&](double x, double sign) {
        const int steps = std::max(1, static_cast<int>(std::ceil(t / 1e-3)));
        const double dt = t / steps;
        for (int k = 0; k < steps; ++k) {
            const double k1 = speed(x, sign);
            const double k2 = speed(x + 0.5 * dt * k1, sign);
            const double k3 = speed(x + 0.5 * dt * k2, sign);
            const double k4 = speed(x + dt * k3, sign);
            x += dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
            x = std::clamp(x, x_min, x_max);
        }
        return x;
    };
    return {{track(perturbation.lo, -1.0), track(perturbation.hi, -1.0)},
            {track(perturbation.lo, 1.0), track(perturbation.hi, 1.0)}};
}

DeviationReport deviation(const ConservedState& state, const Grid& grid,
                          const Bathymetry& bathymetry, const ConservedState& reference,
                          std::optional<Interval> excluded) {
    const int n = grid.n_cells();
    if (static_cast<int>(state.size()) != n || static_cast<int>(reference.size()) != n) {
        throw std::invalid_argument("deviation: state, reference and grid sizes differ");
    }
    DeviationReport r;
    r.excluded = excluded.value_or(Interval{grid.x_min() - 1.0, grid.x_min() - 1.0});
    for (int i = 0; i < n; ++i) {
        const double x = grid.center(i);
        const double dh = state.h[i] - reference.h[i];
        const double dm = state.hu[i] - reference.hu[i];
        r.x.push_back(x);
        r.h.push_back(state.h[i]);
        r.hu.push_back(state.hu[i]);
        r.b.push_back(bathymetry.average(grid.left(i), grid.right(i)));
        r.dh.push_back(dh);
        r.dm.push_back(dm);
        r.max_dh = std::max(r.max_dh, std::abs(dh));
        r.l1_dh += std::abs(dh) * grid.dx();
        r.l1_dm += std::abs(dm) * grid.dx();
        if (!(excluded && excluded->contains(x))) r.spurious = std::max(r.spurious, std::abs(dh));
    }
    return r;
}

RunOutcome simulate(const CaseSpec& spec, SchemeKind kind) {
    spec.validate();
    const Bathymetry bathymetry = make_bathymetry(spec.bathymetry);
    const SteadyProfile profile = steady_profile(spec, bathymetry);
    const Grid grid = spec.grid();

    RunOutcome out{spec, {}, {}, {}, profile.cell_averages(grid), {}, profile.shock()};
    const ConservedState initial = initial_state(spec, profile);
    auto scheme = make_scheme(kind, spec, bathymetry, profile);
    IntegrationResult result = integrate(initial, *scheme, grid, spec.t_end, spec.cfl);

    std::optional<Interval> excluded;
    if (spec.amplitude != 0.0) {
        const Interval hull =
            pulse_windows(profile, spec.perturbation, spec.t_end, spec.x_min, spec.x_max).hull();
        const double margin = kPulseMarginCells * grid.dx();
        excluded = Interval{hull.lo - margin, hull.hi + margin};
    }
    out.report = deviation(result.state, grid, bathymetry, out.reference, excluded);
    out.log = result.log;
    out.final_state = std::move(result.state);
    if (const auto* moving = dynamic_cast<const MovingWaterScheme*>(scheme.get())) {
        out.diagnostics = moving->diagnostics();
    }
    return out;
}

RunOutcome run_case(const RunConfig& config) {
    RunOutcome out = simulate(config.resolve(), config.scheme);
    if (!config.output.empty()) {
        std::ofstream file(config.output);
        if (!file) throw std::runtime_error("cannot open '" + config.output + "' for writing");
        write_csv(file, config, out);
        if (config.emit_reference) {
            const std::string path = config.output + ".reference.csv";
            std::ofstream ref(path);
            if (!ref) throw std::runtime_error("cannot open '" + path + "' for writing");
            write_reference_csv(ref, out);
        }
    }
    return out;
}

void write_csv(std::ostream& out, const RunConfig& config, const RunOutcome& outcome) {
    const CaseSpec& s = outcome.spec;
    const DeviationReport& r = outcome.report;
    out << std::setprecision(17);
    out << "# case = " << to_string(s.flow) << "\n"
        << "# scheme = " << to_string(config.scheme) << "\n"
        << "# cells = " << s.n_cells << "\n"
        << "# amp = " << s.amplitude << "\n"
        << "# perturbation = [" << s.perturbation.lo << ", " << s.perturbation.hi << "]"
        << (s.shape == PerturbationShape::Smooth ? " smooth" : " box") << "\n"
        << "# t-end = " << s.t_end << "\n"
        << "# cfl = " << s.cfl << "\n"
        << "# g = " << s.g << "\n"
        << "# bathymetry = " << s.bathymetry << "\n"
        << "# inflow-discharge = " << s.inflow_discharge << "\n"
        << "# outflow-depth = " << s.outflow_depth << "\n";
    if (outcome.shock) out << "# shock-position = " << *outcome.shock << "\n";
    out << "# steps = " << outcome.log.steps << "\n"
        << "# min-depth = " << outcome.log.min_depth << "\n"
        << "# max-cfl = " << outcome.log.max_cfl << "\n"
        << "# excluded-window = [" << r.excluded.lo << ", " << r.excluded.hi << "]\n"
        << "# spurious-max-dh = " << r.spurious << "\n"
        << "# max-dh = " << r.max_dh << "\n"
        << "# l1-dh = " << r.l1_dh << "\n"
        << "# l1-dm = " << r.l1_dm << "\n"
        << "# fallbacks = " << outcome.diagnostics.total() << "\n";
    out << "x,h,hu,b,surface,dh,dm\n";
    for (std::size_t i = 0; i < r.size(); ++i) {
        out << r.x[i] << ',' << r.h[i] << ',' << r.hu[i] << ',' << r.b[i] << ',' << r.h[i] + r.b[i]
            << ',' << r.dh[i] << ',' << r.dm[i] << '\n';
    }
}

void write_reference_csv(std::ostream& out, const RunOutcome& outcome) {
    const DeviationReport& r = outcome.report;
    out << std::setprecision(17);
    out << "# background reference, case = " << to_string(outcome.spec.flow) << "\n";
    out << "x,h,hu,b,surface\n";
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double h = outcome.reference.h[i];
        out << r.x[i] << ',' << h << ',' << outcome.reference.hu[i] << ',' << r.b[i] << ','
            << h + r.b[i] << '\n';
    }
}

double l1_distance(const ConservedState& coarse, const Grid& coarse_grid,
                   const ConservedState& fine) {
    const std::size_t n = coarse.size();
    if (n == 0 || fine.size() % n != 0) {
        throw std::invalid_argument("l1_distance: fine grid must refine the coarse grid");
    }
    const std::size_t ratio = fine.size() / n;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double mean = 0.0;
        for (std::size_t k = 0; k < ratio; ++k) mean += fine.h[i * ratio + k];
        mean /= static_cast<double>(ratio);
        sum += std::abs(coarse.h[i] - mean);
    }
    return sum * coarse_grid.dx();
}

OrderTable convergence_study(const CaseSpec& base, SchemeKind scheme, const std::vector<int>& cells,
                             int reference_cells) {
    CaseSpec ref_spec = base;
    ref_spec.n_cells = reference_cells;
    const ConservedState reference = simulate(ref_spec, scheme).final_state;

    OrderTable table;
    for (int n : cells) {
        CaseSpec spec = base;
        spec.n_cells = n;
        const RunOutcome run = simulate(spec, scheme);
        OrderRow row{n, l1_distance(run.final_state, spec.grid(), reference), 0.0};
        if (!table.rows.empty()) {
            const OrderRow& prev = table.rows.back();
            row.order = std::log(prev.l1_error / row.l1_error) /
                        std::log(static_cast<double>(n) / prev.n_cells);
        }
        table.rows.push_back(row);
    }

    const std::size_t k = table.rows.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& row : table.rows) {
        const double x = std::log(static_cast<double>(row.n_cells));
        const double y = std::log(row.l1_error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    if (k >= 2) table.fitted_order = -(k * sxy - sx * sy) / (k * sxx - sx * sx);
    return table;
}

}  // namespace wbsw
