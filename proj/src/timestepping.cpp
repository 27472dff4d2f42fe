#include "wbsw/timestepping.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "wbsw/equilibrium.hpp"

namespace wbsw {

PaddedState apply_boundary(const ConservedState& state, const BoundarySpec& spec) {
    const int n = static_cast<int>(state.size());
    if (n < kGhost) throw std::invalid_argument("apply_boundary: need at least three interior cells");
    PaddedState out(n);
    for (int i = 0; i < n; ++i) {
        out.depth(i) = state.h[i];
        out.discharge(i) = state.hu[i];
    }

    const double h_in = state.h[0];
    const double q_in = spec.inflow_discharge.value_or(state.hu[0]);
    const double h_last = state.h[n - 1];
    const double q_last = state.hu[n - 1];
    if (!(h_in > 0.0) || !(h_last > 0.0)) {
        throw FatalDiagnostic("apply_boundary: non-positive depth next to the boundary");
    }
    double h_out = h_last;
    if (spec.outflow_depth && froude(h_last, q_last, spec.g) < 1.0) h_out = *spec.outflow_depth;
    if (!(h_out > 0.0)) throw FatalDiagnostic("apply_boundary: non-positive ghost depth");

    for (int k = 1; k <= kGhost; ++k) {
        out.depth(-k) = h_in;
        out.discharge(-k) = q_in;
        out.depth(n - 1 + k) = h_out;
        out.discharge(n - 1 + k) = q_last;
    }
    return out;
}

BoundaryFill make_boundary_fill(BoundarySpec spec) {
    return [spec](const ConservedState& state) { return apply_boundary(state, spec); };
}

double compute_dt(double max_speed, double dx, double cfl) {
    if (!(cfl > 0.0)) throw std::invalid_argument("compute_dt: CFL number must be positive");
    if (!(max_speed > 0.0) || !std::isfinite(max_speed)) {
        throw std::invalid_argument("compute_dt: wave speed must be positive and finite");
    }
    return cfl * dx / max_speed;
}

double clip_dt(double dt, double t, double t_end) { return std::min(dt, t_end - t); }

namespace {

void check_stage(const ConservedState& u, int stage) {
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!(u.h[i] > 0.0) || !std::isfinite(u.hu[i])) {
            std::ostringstream msg;
            msg << "rk3_step: positivity lost at stage " << stage << " in cell " << i
                << " (h=" << u.h[i] << ")";
            throw FatalDiagnostic(msg.str());
        }
    }
}

}  // namespace

ConservedState rk3_step(const ConservedState& state, const RhsOperator& rhs, double dt) {
    const std::size_t n = state.size();

    ConservedState u1 = state;
    const ConservedState l0 = rhs(state);
    for (std::size_t i = 0; i < n; ++i) {
        u1.h[i] = state.h[i] + dt * l0.h[i];
        u1.hu[i] = state.hu[i] + dt * l0.hu[i];
    }
    check_stage(u1, 1);

    ConservedState u2 = state;
    const ConservedState l1 = rhs(u1);
    for (std::size_t i = 0; i < n; ++i) {
        u2.h[i] = 0.75 * state.h[i] + 0.25 * (u1.h[i] + dt * l1.h[i]);
        u2.hu[i] = 0.75 * state.hu[i] + 0.25 * (u1.hu[i] + dt * l1.hu[i]);
    }
    check_stage(u2, 2);

    ConservedState next = state;
    const ConservedState l2 = rhs(u2);
    for (std::size_t i = 0; i < n; ++i) {
        next.h[i] = state.h[i] / 3.0 + 2.0 / 3.0 * (u2.h[i] + dt * l2.h[i]);
        next.hu[i] = state.hu[i] / 3.0 + 2.0 / 3.0 * (u2.hu[i] + dt * l2.hu[i]);
    }
    check_stage(next, 3);
    return next;
}

IntegrationResult integrate(const ConservedState& initial, SemiDiscreteScheme& scheme,
                            const Grid& grid, double t_end, double cfl,
                            const StepObserver& observer) {
    IntegrationResult result{initial, {}};
    auto& log = result.log;
    log.min_depth = *std::min_element(initial.h.begin(), initial.h.end());
    const RhsOperator rhs = [&scheme](const ConservedState& u) { return scheme.rhs(u); };

    while (log.t < t_end) {
        const double speed = scheme.max_wave_speed(result.state);
        const double dt = clip_dt(compute_dt(speed, grid.dx(), cfl), log.t, t_end);
        result.state = rk3_step(result.state, rhs, dt);
        scheme.end_step(result.state);

        ++log.steps;
        log.t = (t_end - log.t <= dt) ? t_end : log.t + dt;
        log.max_cfl = std::max(log.max_cfl, dt * speed / grid.dx());
        log.min_depth = std::min(log.min_depth,
                                 *std::min_element(result.state.h.begin(), result.state.h.end()));
        if (observer) observer(log.t, result.state);
    }
    return result;
}

}  // namespace wbsw
