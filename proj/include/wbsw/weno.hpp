#pragma once

#include <array>
#include <span>

namespace wbsw {

/// Five cell averages centred on the reconstructed cell: v[0] = cell i-2, ..., v[4] = cell i+2.
using Window = std::array<double, 5>;

/// Interface values reconstructed from inside one cell.
struct InterfacePair {
    double right = 0.0;  ///< U^-_{i+1/2}
    double left = 0.0;   ///< U^+_{i-1/2}
};

/// Nonlinear WENO5 coefficients of one cell expressed as 5-point linear
/// functionals: right-interface value = sum(right[k] * v[k]), likewise left.
struct StencilWeights {
    Window right{};
    Window left{};
};

inline constexpr double kWenoEpsilon = 1e-6;

/// Smoothness indicators for the three quadratic candidate stencils.
std::array<double, 3> smoothness_indicators(const Window& v);

/// Coefficients realised by the WENO5-JS reconstruction on this window.
StencilWeights frozen_weights(const Window& v);

/// Applies frozen coefficients to another set of values.
InterfacePair apply_frozen(const StencilWeights& w, const Window& values);

/// Fifth-order WENO-JS reconstruction (epsilon 1e-6, power 2). Equal to
/// apply_frozen(frozen_weights(v), v) bit for bit.
InterfacePair weno5_reconstruct(const Window& v);

/// Point values at arbitrary offsets xi in [-1/2, 1/2] (units of dx, relative to
/// the cell centre) of the quartic whose cell averages match the window.
double quartic_point_value(const Window& v, double xi);

/// Point value at the cell centre of the quartic matching the window.
double central_point_value(const Window& v);

}  // namespace wbsw
