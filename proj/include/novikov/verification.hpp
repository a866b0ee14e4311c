#pragma once

#include "novikov/evolution.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace novikov {

struct LaxPairSpec {
    double lambda = 1.0;
    /// Throws std::invalid_argument unless lambda is finite and nonzero.
    void validate() const;
};

/// 3x3 matrix of fields on one grid, indexed from 0.
struct MatrixField {
    std::vector<SpectralField> entries; ///< row-major, 9 entries

    const SpectralField& operator()(int i, int j) const { return entries[static_cast<std::size_t>(3 * i + j)]; }
    const Grid1D& grid() const { return entries.front().grid(); }
};

struct LaxPair {
    MatrixField U;
    MatrixField V;
};

///     [ 0        1  0 ]
/// U = [ 1+l rho^2 0  m ]
///     [ l n      0  0 ]
///
///     [ 1/(3l) + u v_x        -u v         u/l              ]
/// V = [ u_x v_x - l rho^2 u v  1/(3l) - u_x v  u_x/l - m u v ]
///     [ -l n u v - v_x         v           u_x v - u v_x - 2/(3l) ]
LaxPair lax_matrices(const PrimitiveState& s, const LaxPairSpec& spec);

/// R = U_t - V_x + [U, V] at one snapshot, given the time derivatives of rho^2, m, n.
MatrixField zero_curvature_at(const PrimitiveState& s, const SpectralField& rho2_t, const SpectralField& m_t,
                              const SpectralField& n_t, const LaxPairSpec& spec);

struct ZeroCurvatureReport {
    double lambda = 1.0;
    int order = 4;                  ///< accuracy order of the time differences
    std::vector<double> times;      ///< snapshot times where R was evaluated
    std::vector<double> max_entry;  ///< per time: max over entries of sup |R_ij|
    std::vector<double> l2;         ///< per time: sqrt(sum_ij ||R_ij||_{L^2}^2)
    std::array<double, 9> entry_max{}; ///< sup over times of sup |R_ij|
    double max_norm = 0.0;
    double l2_norm = 0.0; ///< max over times of l2
};

/// U_t by centered differences across snapshots (order 2 or 4), V_x spectrally.
/// Needs at least order + 1 equally spaced snapshots; irregular ones (for example
/// a shortened final step) are left out of the stencils.
ZeroCurvatureReport zero_curvature_residual(const Trajectory& traj, const LaxPairSpec& spec, int order = 4);

/// L times the mean of rho.
double mass_integral(const SpectralField& rho);

/// phi(t, x) = amplitude B((x - x_center)/x_width) B((t - t_center)/t_width), B(s) = (1 - s^2)^order on |s| < 1.
struct TestFunction {
    double amplitude = 1.0;
    double x_center = 0.0;
    double x_width = 1.0;
    double t_center = 0.5;
    double t_width = 0.25;
    int order = 6; ///< B is C^{order-1}

    double bump(double s, int derivative) const;
    /// d^a/dx^a d^b/dt^b phi, a <= 3, b <= 1.
    double eval(double t, double x, int dx, int dt) const;
    double eval_space(double x, int dx) const;
    /// Empty when the support fits strictly inside the domain (and the time window
    /// when t_end > 0); otherwise a description of the violation.
    std::optional<std::string> support_violation(const Grid1D& g, double t_end) const;
};

/// `count` seeded bumps with supports inside the domain and (0, t_end).
std::vector<TestFunction> make_test_functions(std::uint64_t seed, int count, const Grid1D& g, double t_end);

struct WeakResidual {
    std::array<double, 3> value{}; ///< rho, u and v pairings
    bool rejected = false;
    std::string reason;
};

struct WeakReport {
    std::vector<WeakResidual> per_test;
    std::array<double, 3> max_abs{}; ///< over accepted tests
    int rejected = 0;
};

/// Space-time pairings of a trajectory with each test function:
///   <rho, phi_t> + <rho u v, phi_x>
///   <u, phi_t - phi_txx> - <4 u v u_x + rho^2 u - u u_x v_xx, phi> + <2 u u_x v_x, phi_x> + <u v u_x, phi_xx>
///   <v, phi_t - phi_txx> - <4 u v v_x - rho^2 v - u_xx v v_x, phi> + <2 u_x v v_x, phi_x> + <u v v_x, phi_xx>
/// Spatial integrals are grid sums (spectral for periodic integrands); the time
/// integral is the composite trapezoid over snapshots.
WeakReport weak_residual(const Trajectory& traj, const std::vector<TestFunction>& tests);

struct TravelingResidual {
    std::vector<std::array<double, 3>> per_test;
    double norm = 0.0; ///< sqrt of the sum of squares over tests and equations
};

/// Stationary pairings for z(t, x) = Z(x - c t) with spatial test functions:
///   <-c P, phi_x> + <P U V, phi_x>
///   <-c U, (1 - d^2) phi_x> - <4 U V U_x + P^2 U - U U_x V_xx, phi> + <2 U_x V_x U, phi_x> + <U V U_x, phi_xx>
///   <-c V, (1 - d^2) phi_x> - <4 U V V_x - P^2 V - U_xx V V_x, phi> + <2 U_x V_x V, phi_x> + <U V V_x, phi_xx>
TravelingResidual traveling_weak_residual(const PrimitiveState& z, double c, const std::vector<TestFunction>& tests);

struct SpeedFit {
    double c = 0.0;
    double norm = 0.0;
};

/// Minimizes the traveling residual norm over c (it is affine in c, so the
/// minimizer is a closed-form least-squares solution).
SpeedFit best_traveling_speed(const PrimitiveState& z, const std::vector<TestFunction>& tests);

/// f(2b - x), applied as a Fourier phase; exact when 2b is a multiple of the spacing.
SpectralField reflect_about(const SpectralField& f, double b);

struct SymmetryReport {
    double best_axis = 0.0;
    double defect = 0.0; ///< sum over rho, u, v of ||f - reflected f||_{L^2}
    std::optional<double> symmetrized_residual; ///< traveling residual of the symmetrized state
};

/// Defect about a fixed axis.
SymmetryReport symmetry_defect(const PrimitiveState& s, double b);

/// Axis found by a scan followed by golden-section refinement. Reflections about
/// b and b + L/2 coincide on the periodic domain; the axis is reported in (-L/4, L/4].
SymmetryReport symmetry_defect_optimized(const PrimitiveState& s);

/// Adds the traveling residual (at its best speed) of (s + reflected s)/2 to a report.
void attach_symmetrized_residual(SymmetryReport& r, const PrimitiveState& s, const std::vector<TestFunction>& tests);

struct AsymmetryRow {
    double epsilon = 0.0;
    double best_c = 0.0;
    double residual = 0.0;   ///< minimized traveling residual norm
    double obstruction = 0.0; ///< sqrt(sum over tests of <P^2 U, psi>^2)
};

struct AsymmetryReport {
    std::vector<AsymmetryRow> rows;
    bool strictly_increasing = false;
    double obstruction_exponent = 0.0; ///< log-log slope of `obstruction` over nonzero epsilons
    bool floor_at_zero = false;        ///< residual at epsilon = 0 is the smallest
};

struct AsymmetryFamily {
    Grid1D grid{1024, 40.0};
    double peak_amplitude = 1.0;
    double mollifier = 0.1;
    double rho_width = 1.0; ///< std of the Gaussian rho profile
    std::vector<double> epsilons{0.0, 0.1, 0.2, 0.4};
    int test_count = 16;
    std::uint64_t seed = 7;
};

/// U = V = mollified peakon, P = epsilon * Gaussian; all even about 0.
AsymmetryReport asymmetry_probe(const AsymmetryFamily& family);

} // namespace novikov
