#include "novikov/system.hpp"

#include "novikov/spectral_ops.hpp"

#include <stdexcept>

namespace novikov {

std::string to_string(ReductionTag tag)
{
    switch (tag) {
    case ReductionTag::full_3ns: return "full_3ns";
    case ReductionTag::two_component: return "two_component";
    case ReductionTag::novikov: return "novikov";
    case ReductionTag::degasperis_procesi: return "degasperis_procesi";
    }
    return "unknown";
}

ReductionTag reduction_from_string(std::string_view name)
{
    for (auto tag : {ReductionTag::full_3ns, ReductionTag::two_component, ReductionTag::novikov,
                     ReductionTag::degasperis_procesi}) {
        if (to_string(tag) == name) {
            return tag;
        }
    }
    throw std::invalid_argument("unknown reduction '" + std::string(name) +
                                "' (expected full_3ns, two_component, novikov or degasperis_procesi)");
}

namespace {

void validate_triplet(const SpectralField& a, const SpectralField& b, const SpectralField& c, const char* where)
{
    require_same_grid(a.grid(), b.grid(), where);
    require_same_grid(a.grid(), c.grid(), where);
    a.require_finite(where);
    b.require_finite(where);
    c.require_finite(where);
}

// Builds a field from a per-sample expression.
SpectralField pointwise(const Grid1D& g, auto&& fn)
{
    std::vector<double> out(static_cast<std::size_t>(g.n_points()));
    for (int i = 0; i < g.n_points(); ++i) {
        out[static_cast<std::size_t>(i)] = fn(i);
    }
    return SpectralField::from_values(g, std::move(out));
}

} // namespace

void PrimitiveState::validate() const
{
    validate_triplet(rho, u, v, "PrimitiveState");
}

void MomentumState::validate() const
{
    validate_triplet(rho, m, n, "MomentumState");
}

PrimitiveState PrimitiveState::zeros(const Grid1D& grid, double time)
{
    auto z = SpectralField::zeros(grid);
    return {z, z, z, time, ReductionTag::full_3ns};
}

MomentumState to_momentum(const PrimitiveState& s)
{
    return {s.rho, helmholtz_forward(s.u), helmholtz_forward(s.v), s.time, s.reduction};
}

PrimitiveState to_primitive(const MomentumState& s)
{
    return {s.rho, helmholtz_inverse(s.m), helmholtz_inverse(s.n), s.time, s.reduction};
}

MomentumTendency rhs_momentum(const MomentumState& s, const RhsOptions& opt)
{
    return rhs_momentum(s, to_primitive(s), opt);
}

MomentumTendency rhs_momentum(const MomentumState& s, const PrimitiveState& p, const RhsOptions& opt)
{
    const Grid1D& g = s.grid();
    const auto ux = spectral_derivative(p.u, 1);
    const auto vx = spectral_derivative(p.v, 1);
    const auto mx = spectral_derivative(s.m, 1);
    const auto nx = spectral_derivative(s.n, 1);
    const auto r = s.rho.values();
    const auto u = p.u.values();
    const auto v = p.v.values();
    const auto m = s.m.values();
    const auto n = s.n.values();

    auto flux = pointwise(g, [&](int i) { return r[i] * u[i] * v[i]; });
    auto mt = pointwise(g, [&](int i) {
        return -(3.0 * m[i] * ux.value(i) * v[i] + mx.value(i) * u[i] * v[i] + r[i] * r[i] * u[i]);
    });
    auto nt = pointwise(g, [&](int i) {
        return -(3.0 * n[i] * u[i] * vx.value(i) + nx.value(i) * u[i] * v[i] - r[i] * r[i] * v[i]);
    });
    const double f = opt.dealias_fraction;
    return {-spectral_derivative(dealias(flux, f), 1), dealias(mt, f), dealias(nt, f)};
}

namespace {

PrimitiveTendency convolution_impl(const PrimitiveState& s, const SpectralField& uxx, const SpectralField& vxx,
                                   const RhsOptions& opt)
{
    const Grid1D& g = s.grid();
    const auto uxf = spectral_derivative(s.u, 1);
    const auto vxf = spectral_derivative(s.v, 1);
    const auto r = s.rho.values();
    const auto u = s.u.values();
    const auto v = s.v.values();
    const auto ux = uxf.values();
    const auto vx = vxf.values();
    const auto uxx_v = uxx.values();
    const auto vxx_v = vxx.values();
    const double f = opt.dealias_fraction;

    auto flux = pointwise(g, [&](int i) { return r[i] * u[i] * v[i]; });

    auto u_local = pointwise(g, [&](int i) { return u[i] * ux[i] * v[i]; });
    auto u_green = pointwise(g, [&](int i) {
        return 3.0 * u[i] * ux[i] * v[i] + ux[i] * ux[i] * vx[i] + u[i] * uxx_v[i] * vx[i] + r[i] * r[i] * u[i];
    });
    auto u_dgreen = pointwise(g, [&](int i) { return u[i] * ux[i] * vx[i]; });

    auto v_local = pointwise(g, [&](int i) { return u[i] * v[i] * vx[i]; });
    auto v_green = pointwise(g, [&](int i) {
        return 3.0 * u[i] * v[i] * vx[i] + ux[i] * vx[i] * vx[i] + ux[i] * v[i] * vxx_v[i] - r[i] * r[i] * v[i];
    });
    auto v_dgreen = pointwise(g, [&](int i) { return ux[i] * v[i] * vx[i]; });

    auto ut = -dealias(u_local, f) - green_convolve(dealias(u_green, f)) - green_deriv_convolve(dealias(u_dgreen, f));
    auto vt = -dealias(v_local, f) - green_convolve(dealias(v_green, f)) - green_deriv_convolve(dealias(v_dgreen, f));
    return {-spectral_derivative(dealias(flux, f), 1), std::move(ut), std::move(vt)};
}

} // namespace

PrimitiveTendency rhs_convolution(const PrimitiveState& s, const RhsOptions& opt)
{
    return convolution_impl(s, spectral_derivative(s.u, 2), spectral_derivative(s.v, 2), opt);
}

PrimitiveTendency rhs_convolution(const PrimitiveState& s, const MomentumState& carried, const RhsOptions& opt)
{
    require_same_grid(s.grid(), carried.grid(), "rhs_convolution");
    return convolution_impl(s, s.u - carried.m, s.v - carried.n, opt);
}

PrimitiveTendency to_primitive_tendency(const MomentumTendency& t)
{
    return {t.rho_t, helmholtz_inverse(t.m_t), helmholtz_inverse(t.n_t)};
}

ReductionResult apply_reduction(const PrimitiveState& s, ReductionTag tag)
{
    ReductionResult out{s, {}};
    out.state.reduction = tag;
    if (tag == ReductionTag::full_3ns) {
        return out;
    }
    out.state.rho = SpectralField::zeros(s.grid());
    if (tag == ReductionTag::novikov) {
        out.state.v = s.u;
    } else if (tag == ReductionTag::degasperis_procesi) {
        out.state.v = SpectralField::constant(s.grid(), 1.0);
        out.warnings.push_back("degasperis_procesi: v = 1 does not decay; tail diagnostics are skipped for this state");
    }
    return out;
}

PrimitiveState swap_uv(const PrimitiveState& s)
{
    return {s.rho, s.v, s.u, s.time, s.reduction};
}

} // namespace novikov
