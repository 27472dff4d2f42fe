#include "wbsw/weno.hpp"

namespace wbsw {

namespace {

// Candidate-stencil coefficients for the value at x_{i+1/2}; stencil r uses
// cells i-2+r .. i+r, stored here in window coordinates.
constexpr double kRightStencil[3][5] = {
    {2.0 / 6.0, -7.0 / 6.0, 11.0 / 6.0, 0.0, 0.0},
    {0.0, -1.0 / 6.0, 5.0 / 6.0, 2.0 / 6.0, 0.0},
    {0.0, 0.0, 2.0 / 6.0, 5.0 / 6.0, -1.0 / 6.0},
};
constexpr double kRightLinear[3] = {0.1, 0.6, 0.3};

// Mirror images for the value at x_{i-1/2}.
constexpr double kLeftStencil[3][5] = {
    {-1.0 / 6.0, 5.0 / 6.0, 2.0 / 6.0, 0.0, 0.0},
    {0.0, 2.0 / 6.0, 5.0 / 6.0, -1.0 / 6.0, 0.0},
    {0.0, 0.0, 11.0 / 6.0, -7.0 / 6.0, 2.0 / 6.0},
};
constexpr double kLeftLinear[3] = {0.3, 0.6, 0.1};

std::array<double, 3> nonlinear_weights(const std::array<double, 3>& beta, const double (&linear)[3]) {
    std::array<double, 3> alpha{};
    double sum = 0.0;
    for (int r = 0; r < 3; ++r) {
        const double d = kWenoEpsilon + beta[r];
        alpha[r] = linear[r] / (d * d);
        sum += alpha[r];
    }
    for (auto& a : alpha) a /= sum;
    return alpha;
}

Window combine(const std::array<double, 3>& omega, const double (&stencil)[3][5]) {
    Window c{};
    for (int k = 0; k < 5; ++k) {
        c[k] = omega[0] * stencil[0][k] + omega[1] * stencil[1][k] + omega[2] * stencil[2][k];
    }
    return c;
}

double dot(const Window& a, const Window& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3] + a[4] * b[4];
}

}  // namespace

std::array<double, 3> smoothness_indicators(const Window& v) {
    const double c = 13.0 / 12.0;
    const double b0 = c * (v[0] - 2.0 * v[1] + v[2]) * (v[0] - 2.0 * v[1] + v[2]) +
                      0.25 * (v[0] - 4.0 * v[1] + 3.0 * v[2]) * (v[0] - 4.0 * v[1] + 3.0 * v[2]);
    const double b1 = c * (v[1] - 2.0 * v[2] + v[3]) * (v[1] - 2.0 * v[2] + v[3]) +
                      0.25 * (v[1] - v[3]) * (v[1] - v[3]);
    const double b2 = c * (v[2] - 2.0 * v[3] + v[4]) * (v[2] - 2.0 * v[3] + v[4]) +
                      0.25 * (3.0 * v[2] - 4.0 * v[3] + v[4]) * (3.0 * v[2] - 4.0 * v[3] + v[4]);
    return {b0, b1, b2};
}

StencilWeights frozen_weights(const Window& v) {
    const auto beta = smoothness_indicators(v);
    return {combine(nonlinear_weights(beta, kRightLinear), kRightStencil),
            combine(nonlinear_weights(beta, kLeftLinear), kLeftStencil)};
}

InterfacePair apply_frozen(const StencilWeights& w, const Window& values) {
    return {dot(w.right, values), dot(w.left, values)};
}

InterfacePair weno5_reconstruct(const Window& v) { return apply_frozen(frozen_weights(v), v); }

double quartic_point_value(const Window& v, double xi) {
    // p(s) = a0 + a1 s + ... + a4 s^4 in cell units, matched to the averages of
    // cells s in [j - 1/2, j + 1/2], j = -2..2.
    const double even1 = 0.5 * (v[3] + v[1]) - v[2];
    const double even2 = 0.5 * (v[4] + v[0]) - v[2];
    const double odd1 = 0.5 * (v[3] - v[1]);
    const double odd2 = 0.5 * (v[4] - v[0]);

    const double a4 = (even2 - 4.0 * even1) / 12.0;
    const double a2 = even1 - 1.5 * a4;
    const double a0 = v[2] - a2 / 12.0 - a4 / 80.0;
    const double a3 = (odd2 - 2.0 * odd1) / 6.0;
    const double a1 = odd1 - 1.25 * a3;
    return a0 + xi * (a1 + xi * (a2 + xi * (a3 + xi * a4)));
}

double central_point_value(const Window& v) { return quartic_point_value(v, 0.0); }

}  // namespace wbsw
