#pragma once

#include <cstddef>

#include "tqe/kernels/api.hpp"

namespace tqe {

/// Composite Gauss-Legendre value of
///   int_0^pi f(c * cos(phi)) * sin(phi)^sin_pow dphi,
/// f = sinc^2 or cos, evaluated through the active kernel set in fixed chunk
/// order (deterministic). This is the shared core of the sphere averages:
/// mode integrals and ball transforms after the xi_1 = cos(phi) substitution.
double sphere_phi_integral(double c, int sin_pow, kernels::Integrand kind, std::size_t panels,
                           int order);

/// Panel count giving ~2*pi phase change per panel at oscillation parameter c.
std::size_t sphere_panel_count(double c);

}  // namespace tqe
