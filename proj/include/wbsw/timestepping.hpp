#pragma once

#include <functional>
#include <optional>

#include "wbsw/core.hpp"
#include "wbsw/scheme.hpp"

namespace wbsw {

/// Inflow discharge imposed upstream, outflow depth imposed downstream while
/// the last interior cell is subcritical. Unset values mean extrapolation.
struct BoundarySpec {
    std::optional<double> inflow_discharge;
    std::optional<double> outflow_depth;
    double g = kGravity;
};

/// Fills kGhost ghost cells per side by zeroth-order extrapolation, overriding
/// the upstream discharge and (subcritical outflow only) the downstream depth.
PaddedState apply_boundary(const ConservedState& state, const BoundarySpec& spec);

BoundaryFill make_boundary_fill(BoundarySpec spec);

/// cfl * dx / max_speed.
double compute_dt(double max_speed, double dx, double cfl);
/// Shortens dt so that t + dt does not pass t_end.
double clip_dt(double dt, double t, double t_end);

using RhsOperator = std::function<ConservedState(const ConservedState&)>;

/// Three-stage TVD Runge-Kutta step in convex-combination form.
ConservedState rk3_step(const ConservedState& state, const RhsOperator& rhs, double dt);

struct StepLog {
    int steps = 0;
    double t = 0.0;
    double min_depth = 0.0;
    double max_cfl = 0.0;  ///< largest dt * max_speed / dx actually taken
};

struct IntegrationResult {
    ConservedState state;
    StepLog log;
};

/// Observer called with (t, state) after every accepted step.
using StepObserver = std::function<void(double, const ConservedState&)>;

/// Advances from t = 0 to t_end with CFL-limited steps, the last one clipped.
IntegrationResult integrate(const ConservedState& initial, SemiDiscreteScheme& scheme,
                            const Grid& grid, double t_end, double cfl,
                            const StepObserver& observer = {});

}  // namespace wbsw
