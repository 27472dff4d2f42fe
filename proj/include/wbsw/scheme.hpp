#pragma once

#include <string>
#include <vector>

#include "wbsw/core.hpp"

namespace wbsw {

/// Right-hand side of the semi-discrete system together with the face fluxes
/// it was assembled from (face j separates cells j-1 and j).
struct SemiDiscrete {
    ConservedState dudt;
    std::vector<Flux> face_flux;
};

/// Where interface bottom values come from.
enum class BottomMode {
    Sampled,        ///< point samples of the analytic bottom
    Reconstructed,  ///< frozen WENO operators applied to the bottom cell averages
};

/// A spatial discretisation d(U_bar)/dt = L(U_bar) with its own boundary fill.
class SemiDiscreteScheme {
public:
    virtual ~SemiDiscreteScheme() = default;

    virtual std::string name() const = 0;
    virtual SemiDiscrete evaluate(const ConservedState& state) = 0;
    ConservedState rhs(const ConservedState& state) { return evaluate(state).dudt; }

    /// Largest |u| + sqrt(g h) over the interior cells.
    virtual double max_wave_speed(const ConservedState& state) const = 0;

    /// Called by the integrator once a full time step has been accepted.
    virtual void end_step(const ConservedState& /*state*/) {}
};

}  // namespace wbsw
