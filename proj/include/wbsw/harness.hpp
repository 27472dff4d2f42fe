#pragma once

#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "wbsw/core.hpp"
#include "wbsw/equilibrium.hpp"
#include "wbsw/scheme.hpp"
#include "wbsw/scheme_moving.hpp"
#include "wbsw/timestepping.hpp"

namespace wbsw {

enum class SchemeKind { Still, Moving, FirstOrder };

FlowCase parse_flow_case(const std::string& text);
SchemeKind parse_scheme(const std::string& text);
std::string to_string(SchemeKind kind);

/// Benchmark definitions: subcritical (a), transcritical (b), transcritical
/// with a stationary shock (c) over the bump, and a lake at rest.
CaseSpec make_case(FlowCase flow);

/// Case a discharge and energy over a smooth Gaussian bed of the same height, with
/// a cos^4 hump on [4, 8]; the bump's kinks would cap any order study near two.
CaseSpec smooth_accuracy_case();

struct RunConfig {
    FlowCase flow = FlowCase::Subcritical;
    SchemeKind scheme = SchemeKind::Moving;
    std::optional<int> n_cells;
    std::optional<double> amplitude;
    std::optional<double> t_end;
    double cfl = 0.6;
    std::string output;
    bool emit_reference = false;
    bool smooth = false;

    /// Case description with the overrides applied; throws on invalid values.
    CaseSpec resolve() const;
};

/// Depth and discharge of the first-order Lax-Friedrichs scheme with a
/// centred source; a naive reference that is not well balanced.
class FirstOrderScheme : public SemiDiscreteScheme {
public:
    FirstOrderScheme(Grid grid, Bathymetry bathymetry, BoundaryFill fill, double g = kGravity);

    std::string name() const override { return "oracle1"; }
    SemiDiscrete evaluate(const ConservedState& state) override;
    double max_wave_speed(const ConservedState& state) const override;

private:
    Grid grid_;
    Bathymetry bathymetry_;
    BoundaryFill fill_;
    double g_;
    BottomSamples bottom_;
};

/// Time derivative from the first-order scheme (oracle_first_order).
ConservedState oracle_first_order(const ConservedState& state, const Grid& grid,
                                  const Bathymetry& bathymetry, const BoundarySpec& boundary);

BoundarySpec boundary_of(const CaseSpec& spec);

std::unique_ptr<SemiDiscreteScheme> make_scheme(SchemeKind kind, const CaseSpec& spec,
                                                const Bathymetry& bathymetry,
                                                const SteadyProfile& profile);

/// Cell-averaged background with the case perturbation applied.
ConservedState initial_state(const CaseSpec& spec, const SteadyProfile& profile);

/// Positions reached at time t by the slow (u - c) and fast (u + c)
/// characteristics of the background leaving the edges of the perturbation.
struct PulseWindows {
    Interval left;   ///< between the u - c characteristics
    Interval right;  ///< between the u + c characteristics
    /// Domain of influence: everything the perturbation can have reached.
    Interval hull() const { return {left.lo, right.hi}; }
};

PulseWindows pulse_windows(const SteadyProfile& profile, Interval perturbation, double t,
                           double x_min, double x_max);

/// Cells this many widths beyond the domain of influence still count as pulse:
/// the numerically smeared tail of a two-cell box pulse at N=100 reaches that far
/// before falling below 1e-10.
inline constexpr double kPulseMarginCells = 23.0;

struct DeviationReport {
    std::vector<double> x, h, hu, b, dh, dm;
    double spurious = 0.0;  ///< max |dh| outside the excluded window
    double max_dh = 0.0;
    double l1_dh = 0.0;
    double l1_dm = 0.0;
    Interval excluded{0.0, 0.0};
    std::size_t size() const { return x.size(); }
};

/// Differences against the cell-averaged background; cells whose centre lies
/// in `excluded` do not contribute to `spurious`.
DeviationReport deviation(const ConservedState& state, const Grid& grid,
                          const Bathymetry& bathymetry, const ConservedState& reference,
                          std::optional<Interval> excluded);

struct RunOutcome {
    CaseSpec spec;
    DeviationReport report;
    StepLog log;
    ConservedState final_state;
    ConservedState reference;
    MovingDiagnostics diagnostics;
    std::optional<double> shock;
};

/// Builds, perturbs, integrates and measures one benchmark run; writes the CSV
/// when `config.output` is non-empty.
RunOutcome run_case(const RunConfig& config);

void write_csv(std::ostream& out, const RunConfig& config, const RunOutcome& outcome);
/// Background reference profile: x, h, hu, b, surface per cell.
void write_reference_csv(std::ostream& out, const RunOutcome& outcome);

/// Runs a fully specified case without writing anything.
RunOutcome simulate(const CaseSpec& spec, SchemeKind scheme);

struct OrderRow {
    int n_cells = 0;
    double l1_error = 0.0;
    double order = 0.0;  ///< slope against the previous row (0 for the first)
};

struct OrderTable {
    std::vector<OrderRow> rows;
    double fitted_order = 0.0;  ///< least-squares slope of -log(error) vs log(N)
};

/// Self-convergence of the depth in L1 against a run on `reference_cells`
/// (an integer multiple of every entry of `cells`).
OrderTable convergence_study(const CaseSpec& base, SchemeKind scheme, const std::vector<int>& cells,
                             int reference_cells = 3200);

/// L1 norm of the depth difference, coarse data against block averages of fine data.
double l1_distance(const ConservedState& coarse, const Grid& coarse_grid,
                   const ConservedState& fine);

}  // namespace wbsw
