#pragma once

#include "novikov/spectral_field.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace novikov {

enum class ReductionTag { full_3ns, two_component, novikov, degasperis_procesi };

std::string to_string(ReductionTag tag);
ReductionTag reduction_from_string(std::string_view name);

/// (rho, u, v) at one instant.
struct PrimitiveState {
    SpectralField rho;
    SpectralField u;
    SpectralField v;
    double time = 0.0;
    ReductionTag reduction = ReductionTag::full_3ns;

    const Grid1D& grid() const { return rho.grid(); }
    /// Throws std::invalid_argument on mismatched grids or non-finite samples.
    void validate() const;

    static PrimitiveState zeros(const Grid1D& grid, double time = 0.0);
};

/// (rho, m, n) with m = u - u_xx and n = v - v_xx.
struct MomentumState {
    SpectralField rho;
    SpectralField m;
    SpectralField n;
    double time = 0.0;
    ReductionTag reduction = ReductionTag::full_3ns;

    const Grid1D& grid() const { return rho.grid(); }
    void validate() const;
};

struct MomentumTendency {
    SpectralField rho_t;
    SpectralField m_t;
    SpectralField n_t;
};

struct PrimitiveTendency {
    SpectralField rho_t;
    SpectralField u_t;
    SpectralField v_t;
};

struct RhsOptions {
    /// Retained band for every composite product; 1 disables dealiasing.
    double dealias_fraction = 0.5;
};

MomentumState to_momentum(const PrimitiveState& s);
PrimitiveState to_primitive(const MomentumState& s);

/// (rho_t, m_t, n_t) from the momentum form:
///   rho_t = -(rho u v)_x
///   m_t   = -3 m u_x v - m_x u v - rho^2 u
///   n_t   = -3 n u v_x - n_x u v + rho^2 v
MomentumTendency rhs_momentum(const MomentumState& s, const RhsOptions& opt = {});

/// Same tendency when u, v are already known (skips the Helmholtz solves).
MomentumTendency rhs_momentum(const MomentumState& s, const PrimitiveState& p, const RhsOptions& opt = {});

/// (rho_t, u_t, v_t) from the nonlocal form with g = exp(-|x|)/2:
///   u_t = -u u_x v - g*(3 u u_x v + u_x^2 v_x + u u_xx v_x + rho^2 u) - g_x*(u u_x v_x)
///   v_t = -u v v_x - g*(3 u v v_x + u_x v_x^2 + u_x v v_xx - rho^2 v) - g_x*(u_x v v_x)
PrimitiveTendency rhs_convolution(const PrimitiveState& s, const RhsOptions& opt = {});

/// Variant that takes u_xx = u - m and v_xx = v - n from a matching momentum state.
PrimitiveTendency rhs_convolution(const PrimitiveState& s, const MomentumState& carried, const RhsOptions& opt = {});

/// Maps (rho_t, m_t, n_t) to (rho_t, u_t, v_t) through the Helmholtz inverse.
PrimitiveTendency to_primitive_tendency(const MomentumTendency& t);

struct ReductionResult {
    PrimitiveState state;
    std::vector<std::string> warnings;
};

/// Enforces the constraint of `tag` exactly: rho = 0 for every reduction,
/// v = u for novikov, v = 1 for degasperis_procesi.
ReductionResult apply_reduction(const PrimitiveState& s, ReductionTag tag);

/// (rho, u, v) -> (rho, v, u).
PrimitiveState swap_uv(const PrimitiveState& s);

} // namespace novikov
