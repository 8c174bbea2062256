#include "abm/momentum.hpp"

#include <algorithm>
#include <cmath>

#include "abm/quadrature.hpp"

namespace abm {

namespace {

double rel_residual(const Vec3& a, const Vec3& b) {
    const double denom = std::max(a.norm(), b.norm());
    if (denom == 0.0) return 0.0;
    return (a + b).norm() / denom;
}

double max_pairwise_rel_diff(const std::vector<std::pair<const char*, Vec3>>& ps) {
    double worst = 0.0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        for (std::size_t j = i + 1; j < ps.size(); ++j) {
            const double denom = std::max(ps[i].second.norm(), ps[j].second.norm());
            if (denom == 0.0) continue;
            worst = std::max(worst, (ps[i].second - ps[j].second).norm() / denom);
        }
    }
    return worst;
}

}  // namespace

std::vector<std::pair<const char*, Vec3>> MomentumReport::populated() const {
    std::vector<std::pair<const char*, Vec3>> out = {{"p_qa", p_qa},
                                                     {"p_drift_sum", p_drift_sum},
                                                     {"p_energy_flux", p_energy_flux},
                                                     {"p_dipole", p_dipole}};
    if (p_two_arm) out.emplace_back("p_two_arm", *p_two_arm);
    if (p_field_integral) out.emplace_back("p_field_integral", *p_field_integral);
    return out;
}

Vec3 momentum_qa(const PointCharge& charge, const Vec3& A_at_charge, const Constants& k) {
    return A_at_charge * (charge.q / k.c);
}

MassEquivalentElement mass_equivalent(const CircuitElement& e, const PointCharge& charge,
                                      const Constants& k) {
    const double dist = (e.position - charge.position).norm();
    if (!(dist > 0)) throw SamePoint("mass_equivalent: element at the charge position");
    MassEquivalentElement me;
    me.delta_m = charge.q * e.drift.line_charge_density() * e.dl / (k.c * k.c * dist);
    me.velocity = e.tangent * e.drift.drift_speed;
    return me;
}

Vec3 momentum_two_arm_rect(const RectangularLoop& loop, const PointCharge& charge,
                           const Constants& k) {
    loop.validate();
    const Vec3 d = charge.position - loop.center;
    const double R1 = d.norm();
    if (!(R1 > 0)) throw GeometryMismatch("momentum_two_arm_rect: charge at the loop center");
    const Vec3 w = loop.gap_axis();
    const Vec3 off_axis = d - w * dot(d, w);
    if (off_axis.norm() > 1e-9 * R1) {
        std::ostringstream os;
        os << "momentum_two_arm_rect: charge " << charge.position
           << " must lie on the gap axis through the loop center";
        throw GeometryMismatch(os.str());
    }
    if (!(loop.half_gap_r < R1))
        throw GeometryMismatch("momentum_two_arm_rect: requires r < R1");

    // Drift direction of the arm nearer the charge.
    const Vec3 t_near = cross(loop.normal, d / R1);
    const double coef = charge.q * loop.drift.line_charge_density() * loop.arm_length_s *
                        loop.drift.drift_speed / (k.c * k.c);
    return t_near * (coef * (1.0 / (R1 - loop.half_gap_r) - 1.0 / (R1 + loop.half_gap_r)));
}

Vec3 momentum_dipole(const Vec3& E_at_loop, const RectangularLoop& loop, const Constants& k) {
    return cross(E_at_loop, loop.area_vector()) * (loop.current / (k.c * k.c));
}

Vec3 momentum_dipole(const Vec3& E_at_loop, const CircularLoop& loop, const Constants& k) {
    return cross(E_at_loop, loop.area_vector()) * (loop.current / (k.c * k.c));
}

Vec3 momentum_energy_flux(std::span<const CircuitElement> elements, const Vec3& center,
                          const Vec3& E_uniform, const Constants& k) {
    const std::size_t n = elements.size();
    if (n == 0) return {};
    if (n % 2 != 0)
        throw UnpairableDiscretization("momentum_energy_flux: odd element count cannot pair");

    auto mirrors = [&](std::size_t i, std::size_t j) {
        const CircuitElement& a = elements[i];
        const CircuitElement& b = elements[j];
        const double pos_tol = 1e-9 * ((a.position - center).norm() + a.dl);
        return ((b.position - center) + (a.position - center)).norm() <= pos_tol &&
               (b.tangent + a.tangent).norm() <= 1e-9 && std::fabs(b.dl - a.dl) <= 1e-9 * a.dl;
    };

    std::vector<char> used(n, 0);
    const double inv_c2 = 1.0 / (k.c * k.c);
    Vec3 p{};
    for (std::size_t i = 0; i < n; ++i) {
        if (used[i]) continue;
        std::size_t j = (i + n / 2) % n;  // fast path for the library discretizers
        if (used[j] || j == i || !mirrors(i, j)) {
            bool found = false;
            for (std::size_t cand = i + 1; cand < n && !found; ++cand) {
                if (!used[cand] && mirrors(i, cand)) {
                    j = cand;
                    found = true;
                }
            }
            if (!found) {
                std::ostringstream os;
                os << "momentum_energy_flux: element at " << elements[i].position
                   << " has no centrally symmetric partner";
                throw UnpairableDiscretization(os.str());
            }
        }
        used[i] = used[j] = 1;
        // dP = I (E . dl) s / c^2, s from the draining element to the fed one;
        // evaluating from either pair member gives the identical product.
        const CircuitElement& a = elements[i];
        p += (a.position - elements[j].position) *
             (a.current * dot(E_uniform, a.tangent) * a.dl * inv_c2);
    }
    return p;
}

Vec3 momentum_field_integral(const Solenoid& s, const PointCharge& charge,
                             const VolumeQuadSpec& quad, const Constants& k, par::ExecMode mode) {
    s.validate();
    const auto cf = detail::axial_frame(s.center, s.axis, charge.position);
    if (cf.R <= s.radius) {
        std::ostringstream os;
        os << "momentum_field_integral: charge at " << charge.position
           << " lies inside the solenoid (R = " << cf.R << " <= r = " << s.radius << ")";
        throw ChargeInsideSolenoid(os.str());
    }
    if (quad.n_radial < 1) throw InvalidInput("VolumeQuadSpec: n_radial must be >= 1");
    if (quad.n_azimuthal < 2 || quad.n_azimuthal % 2 != 0)
        throw InvalidInput("VolumeQuadSpec: n_azimuthal must be even and >= 2");
    int n_axial = quad.n_axial;
    if (n_axial <= 0)
        n_axial = std::max(128L, std::lround(1.28 * s.length / s.radius));

    const GaussLegendre glR = gauss_legendre(quad.n_radial);
    const GaussLegendre glZ = gauss_legendre(n_axial);

    // Uniform azimuthal rule (spectrally accurate for periodic integrands);
    // the second half of the direction table is the exact negation of the
    // first, keeping the node set centrally symmetric to round-off.
    const int n_phi = quad.n_azimuthal;
    std::vector<double> cphi(static_cast<std::size_t>(n_phi)), sphi(static_cast<std::size_t>(n_phi));
    for (int j = 0; j < n_phi; ++j) {
        if (j >= n_phi / 2) {
            cphi[static_cast<std::size_t>(j)] = -cphi[static_cast<std::size_t>(j - n_phi / 2)];
            sphi[static_cast<std::size_t>(j)] = -sphi[static_cast<std::size_t>(j - n_phi / 2)];
        } else {
            const double phi = two_pi * (j + 0.5) / n_phi;
            cphi[static_cast<std::size_t>(j)] = std::cos(phi);
            sphi[static_cast<std::size_t>(j)] = std::sin(phi);
        }
    }
    const double w_phi = two_pi / n_phi;

    const Vec3 u = any_perpendicular(s.axis);
    const Vec3 v = cross(s.axis, u);
    const Vec3 B_inside = s.axis * (4.0 * pi * s.current * s.loops_per_length / k.c);
    const double half_r = 0.5 * s.radius;
    const double half_L = 0.5 * s.length;
    const double prefactor = 1.0 / (4.0 * pi * k.c);

    const std::size_t nodes =
        static_cast<std::size_t>(quad.n_radial) * static_cast<std::size_t>(n_phi) *
        static_cast<std::size_t>(n_axial);
    const std::size_t plane = static_cast<std::size_t>(n_phi) * static_cast<std::size_t>(n_axial);

    return par::reduce_indexed<Vec3>(
        nodes,
        [&](std::size_t i) {
            const std::size_t iR = i / plane;
            const std::size_t rem = i % plane;
            const std::size_t iPhi = rem / static_cast<std::size_t>(n_axial);
            const std::size_t iZ = rem % static_cast<std::size_t>(n_axial);
            const double R = half_r * (glR.nodes[iR] + 1.0);
            const double wR = half_r * glR.weights[iR];
            const double z = half_L * glZ.nodes[iZ];
            const double wz = half_L * glZ.weights[iZ];
            const Vec3 pos = s.center + (u * cphi[iPhi] + v * sphi[iPhi]) * R + s.axis * z;
            const Vec3 E = coulomb_E(charge, pos);
            // cylindrical volume element R dR dphi dz
            return cross(E, B_inside) * (prefactor * R * wR * w_phi * wz);
        },
        mode);
}

Vec3 MomentumScene::source_center() const {
    return std::visit([](const auto& src) { return src.center; }, source);
}

namespace {

// Applies fn(elements_of_one_loop, loop_center) for every planar loop of
// the scene's source (a solenoid contributes one call per stacked loop).
template <class Fn>
void for_each_scene_loop(const MomentumScene& scene, Fn&& fn) {
    if (const auto* rect = std::get_if<RectangularLoop>(&scene.source)) {
        const auto elements = discretize(*rect, scene.elements_per_unit);
        fn(std::span<const CircuitElement>(elements), rect->center);
    } else if (const auto* circ = std::get_if<CircularLoop>(&scene.source)) {
        const auto elements = discretize(*circ, scene.elements_per_unit);
        fn(std::span<const CircuitElement>(elements), circ->center);
    } else {
        const auto& sol = std::get<Solenoid>(scene.source);
        const SolenoidElements lattice(sol, scene.elements_per_unit);
        const std::size_t per = lattice.per_loop();
        std::vector<CircuitElement> ring(per);
        for (long loop = 0; loop < lattice.loops(); ++loop) {
            for (std::size_t j = 0; j < per; ++j)
                ring[j] = lattice[static_cast<std::size_t>(loop) * per + j];
            fn(std::span<const CircuitElement>(ring), lattice.loop_center(loop));
        }
    }
}

}  // namespace

MomentumReport momentum_report(const MomentumScene& scene, par::ExecMode mode) {
    MomentumReport rep;
    const Constants& k = scene.constants;
    const PointCharge& q = scene.charge;

    if (const auto* sol = std::get_if<Solenoid>(&scene.source)) {
        const SolenoidElements elements(*sol, scene.elements_per_unit);
        rep.p_qa = momentum_qa(q, vector_potential_numeric(elements, q.position, k, mode), k);
        rep.p_drift_sum = momentum_drift_sum(elements, q, k, mode);
        rep.diagnostics.element_count = elements.size();
        rep.p_field_integral = momentum_field_integral(*sol, q, scene.volume_quad, k, mode);
    } else {
        std::size_t count = 0;
        if (const auto* rect = std::get_if<RectangularLoop>(&scene.source)) {
            const auto elements = discretize(*rect, scene.elements_per_unit);
            count = elements.size();
            rep.p_qa = momentum_qa(q, vector_potential_numeric(elements, q.position, k, mode), k);
            rep.p_drift_sum = momentum_drift_sum(elements, q, k, mode);
            try {
                rep.p_two_arm = momentum_two_arm_rect(*rect, q, k);
            } catch (const GeometryMismatch&) {
                // charge off the gap axis: the closed form does not apply
            }
        } else {
            const auto& circ = std::get<CircularLoop>(scene.source);
            const auto elements = discretize(circ, scene.elements_per_unit);
            count = elements.size();
            rep.p_qa = momentum_qa(q, vector_potential_numeric(elements, q.position, k, mode), k);
            rep.p_drift_sum = momentum_drift_sum(elements, q, k, mode);
        }
        rep.diagnostics.element_count = count;
    }

    // Loop-sum formulations: E sampled at each loop center and treated as
    // uniform over that loop (a solenoid sums its stacked loops).
    Vec3 p_dip{}, p_flux{};
    for_each_scene_loop(scene, [&](std::span<const CircuitElement> ring, const Vec3& center) {
        const Vec3 E = coulomb_E(q, center);
        if (const auto* rect = std::get_if<RectangularLoop>(&scene.source)) {
            p_dip += momentum_dipole(E, *rect, k);
        } else if (const auto* circ = std::get_if<CircularLoop>(&scene.source)) {
            p_dip += momentum_dipole(E, *circ, k);
        } else {
            const auto& sol = std::get<Solenoid>(scene.source);
            CircularLoop proto;
            proto.center = center;
            proto.radius = sol.radius;
            proto.normal = sol.axis;
            proto.current = sol.current;
            proto.drift = DriftParams::for_current(sol.current);
            p_dip += momentum_dipole(E, proto, k);
        }
        p_flux += momentum_energy_flux(ring, center, E, k);
    });
    rep.p_dipole = p_dip;
    rep.p_energy_flux = p_flux;

    rep.diagnostics.max_pairwise_rel_diff = max_pairwise_rel_diff(rep.populated());
    return rep;
}

SymmetricPairReport symmetric_pair_report(const MomentumScene& scene, const PointCharge& charge2,
                                          par::ExecMode mode) {
    const Vec3 center = scene.source_center();
    const Vec3 mirror = center - (scene.charge.position - center);
    const double R1 = (scene.charge.position - center).norm();
    const double q_scale = std::max(std::fabs(scene.charge.q), std::fabs(charge2.q));
    if ((charge2.position - mirror).norm() > 1e-12 * std::max(R1, 1.0) ||
        std::fabs(charge2.q - scene.charge.q) > 1e-12 * q_scale) {
        throw AsymmetricScene(
            "symmetric_pair_report: charge2 must equal charge1 point-reflected through the source "
            "center");
    }

    SymmetricPairReport out;
    out.first = momentum_report(scene, mode);
    MomentumScene scene2 = scene;
    scene2.charge = charge2;
    out.second = momentum_report(scene2, mode);

    const auto p1 = out.first.populated();
    const auto p2 = out.second.populated();
    for (std::size_t i = 0; i < p1.size(); ++i)
        out.max_antisymmetry_residual =
            std::max(out.max_antisymmetry_residual, rel_residual(p1[i].second, p2[i].second));

    // Per-element power fed by the two charges' center-sampled fields: the
    // pair's energy fluxes compensate elementwise.
    for_each_scene_loop(scene, [&](std::span<const CircuitElement> ring, const Vec3& lc) {
        const Vec3 E1 = coulomb_E(scene.charge, lc);
        const Vec3 E2 = coulomb_E(charge2, lc);
        double scale = 0.0;
        for (const CircuitElement& e : ring) {
            const double w1 = e.current * dot(E1, e.tangent) * e.dl;
            const double w2 = e.current * dot(E2, e.tangent) * e.dl;
            scale = std::max({scale, std::fabs(w1), std::fabs(w2)});
        }
        if (scale == 0.0) return;
        for (const CircuitElement& e : ring) {
            const double w1 = e.current * dot(E1, e.tangent) * e.dl;
            const double w2 = e.current * dot(E2, e.tangent) * e.dl;
            out.max_power_residual = std::max(out.max_power_residual, std::fabs(w1 + w2) / scale);
        }
    });
    return out;
}

NeutralLoopReport neutral_loop_check(std::span<const CircuitElement> elements,
                                     const PointCharge& charge, const Constants& k) {
    NeutralLoopReport rep{};
    const double c2 = k.c * k.c;
    Vec3 p_carriers{}, p_ions{};
    double energy = 0.0, scale = 0.0;
    for (const CircuitElement& e : elements) {
        const double dist = (e.position - charge.position).norm();
        if (dist < filament_guard_fraction * e.dl)
            throw TooCloseToFilament("neutral_loop_check: charge on a filament element");
        const double carrier_q = e.drift.line_charge_density() * e.dl;
        const double ion_q = -carrier_q;  // lattice exactly neutralizes the carriers
        const double phi = charge.q / dist;
        energy += carrier_q * phi;
        energy += ion_q * phi;
        scale += std::fabs(carrier_q * phi) + std::fabs(ion_q * phi);
        p_carriers += e.tangent * (charge.q * carrier_q / (c2 * dist) * e.drift.drift_speed);
        // ions are fixed in the lattice: drift speed identically zero
        p_ions += e.tangent * (charge.q * ion_q / (c2 * dist) * 0.0);
    }
    rep.p_carriers = p_carriers;
    rep.p_with_ions = p_carriers + p_ions;
    rep.potential_energy = energy;
    rep.potential_energy_scale = scale;
    return rep;
}

}  // namespace abm
