#include "berrytop/loops.hpp"

#include "berrytop/errors.hpp"
#include "berrytop/gauge.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace berrytop {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::pair<Vec3, Vec3> plane_basis(Axis normal) {
    switch (normal) {
        case Axis::X: return {Vec3::UnitY(), Vec3::UnitZ()};
        case Axis::Y: return {Vec3::UnitZ(), Vec3::UnitX()};
        case Axis::Z: return {Vec3::UnitX(), Vec3::UnitY()};
    }
    return {Vec3::UnitX(), Vec3::UnitY()};
}

std::vector<Vec3> loop_vertices(const LoopSpec& loop) {
    std::vector<Vec3> out;
    for (const LoopSample& s : discretize(loop)) out.push_back(s.start);
    return out;
}

}  // namespace

LoopSpec LoopSpec::circle(double radius, int steps, Vec3 center, int turns, int orientation) {
    LoopSpec spec{CircleLoop{center, radius, Axis::Z, turns}, steps, orientation};
    spec.validate();
    return spec;
}

LoopSpec LoopSpec::polyline(std::vector<Vec3> points, int steps, int orientation) {
    LoopSpec spec{PolylineLoop{std::move(points)}, steps, orientation};
    spec.validate();
    return spec;
}

void LoopSpec::validate() const {
    if (steps < 8) throw InvalidArgument("loop steps must be >= 8");
    if (orientation != 1 && orientation != -1) throw InvalidArgument("loop orientation must be +1 or -1");
    if (const auto* c = std::get_if<CircleLoop>(&shape)) {
        if (!(c->radius > 0.0) || !std::isfinite(c->radius)) throw InvalidArgument("circle radius must be positive");
        if (c->turns < 1) throw InvalidArgument("circle turns must be >= 1");
        if (!c->center.allFinite()) throw InvalidArgument("circle center must be finite");
    } else {
        const auto& p = std::get<PolylineLoop>(shape).points;
        if (p.size() < 4) throw InvalidArgument("polyline needs at least three distinct points plus closure");
        if (p.front() != p.back()) throw InvalidArgument("polyline is not closed (first point != last point)");
        for (const Vec3& v : p)
            if (!v.allFinite()) throw InvalidArgument("polyline points must be finite");
    }
}

void SphereSpec::validate() const {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidArgument("sphere radius must be positive");
    if (n_theta < 16 || n_phi < 16) throw InvalidArgument("sphere grid needs n_theta, n_phi >= 16");
}

std::vector<LoopSample> discretize(const LoopSpec& loop) {
    loop.validate();
    std::vector<LoopSample> out;
    const double dir = static_cast<double>(loop.orientation);
    if (const auto* c = std::get_if<CircleLoop>(&loop.shape)) {
        const auto [u, v] = plane_basis(c->normal);
        const long n = static_cast<long>(loop.steps) * c->turns;
        const double dt = dir * kTwoPi / loop.steps;
        auto point = [&](double t) -> Vec3 { return c->center + c->radius * (std::cos(t) * u + std::sin(t) * v); };
        out.reserve(static_cast<std::size_t>(n));
        for (long i = 0; i < n; ++i) {
            const double t0 = static_cast<double>(i) * dt;
            const double tm = (static_cast<double>(i) + 0.5) * dt;
            const Vec3 tangent = c->radius * (-std::sin(tm) * u + std::cos(tm) * v);
            out.push_back({point(tm), tangent * dt, point(t0)});
        }
        return out;
    }
    std::vector<Vec3> pts = std::get<PolylineLoop>(loop.shape).points;
    if (loop.orientation < 0) std::reverse(pts.begin(), pts.end());
    const std::size_t segments = pts.size() - 1;
    const int sub = std::max<int>(1, static_cast<int>((static_cast<std::size_t>(loop.steps) + segments - 1) / segments));
    for (std::size_t s = 0; s < segments; ++s) {
        const Vec3 delta = (pts[s + 1] - pts[s]) / sub;
        for (int i = 0; i < sub; ++i) {
            const Vec3 start = pts[s] + static_cast<double>(i) * delta;
            out.push_back({start + 0.5 * delta, delta, start});
        }
    }
    return out;
}

PhaseResult berry_phase_loop(const SpinorSystem& system, const LoopSpec& loop, Branch branch, ChartPolicy policy) {
    const std::vector<LoopSample> samples = discretize(loop);
    const SpinorSystem sys = system.with_branch(branch);
    const std::size_t n = samples.size();

    std::vector<BVector> fields(n);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        fields[i] = eval_field(sys, KVector::from(samples[i].midpoint));
        scale = std::max(scale, fields[i].magnitude());
    }
    auto degenerate = [](const Vec3& k) {
        return DegenerateField("loop passes through a zero of b(k) near k = (" + std::to_string(k.x()) + ", " +
                               std::to_string(k.y()) + ", " + std::to_string(k.z()) + ")");
    };
    for (std::size_t i = 0; i < n; ++i) {
        if (!(fields[i].magnitude() > 1e-12 * scale)) throw degenerate(samples[i].midpoint);
        if (!(eval_field(sys, KVector::from(samples[i].start)).magnitude() > 1e-12 * scale))
            throw degenerate(samples[i].start);
    }

    std::vector<Chart> charts(n);
    for (std::size_t i = 0; i < n; ++i) {
        switch (policy) {
            case ChartPolicy::Auto: charts[i] = auto_chart(fields[i]); break;
            case ChartPolicy::North: charts[i] = Chart::North; break;
            case ChartPolicy::South: charts[i] = Chart::South; break;
        }
    }

    double sum = 0.0;
    double transitions = 0.0;
    int switches = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const GaugeVector a = pullback_gauge_K(sys, KVector::from(samples[i].midpoint), charts[i]);
        sum += a.components.dot(samples[i].displacement);
        const Chart prev = charts[(i + n - 1) % n];
        if (prev != charts[i]) {
            ++switches;
            // Entering the south chart at azimuth phi costs -phi, leaving it +phi.
            const double phi = polar_angles(eval_field(sys, KVector::from(samples[i].start))).phi;
            transitions += charts[i] == Chart::South ? -phi : phi;
        }
    }
    return {0.5 * sum + sign(branch) * transitions, switches, branch};
}

double flux_sphere(const CurvatureField& field, const SphereSpec& sphere) {
    sphere.validate();
    const double ht = std::numbers::pi / sphere.n_theta;
    const double hp = kTwoPi / sphere.n_phi;
    const double r2 = sphere.radius * sphere.radius;
    double total = 0.0;
    for (int i = 0; i < sphere.n_theta; ++i) {
        const double theta = (i + 0.5) * ht;
        const double st = std::sin(theta), ct = std::cos(theta);
        double ring = 0.0;
        for (int j = 0; j < sphere.n_phi; ++j) {
            const double phi = (j + 0.5) * hp;
            const Vec3 normal(st * std::cos(phi), st * std::sin(phi), ct);
            const Vec3 value = field(sphere.radius * normal);
            if (!value.allFinite()) throw Error("non-finite curvature sample on the sphere");
            ring += value.dot(normal);
        }
        total += ring * r2 * st;
    }
    return total * ht * hp;
}

double flux_disk(const SpinorSystem& system, double radius, Branch branch, int n_r, int n_phi) {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidArgument("disk radius must be positive");
    if (n_r < 1 || n_phi < 1) throw InvalidArgument("disk grid sizes must be positive");
    const bool punctured = eval_field(system, KVector{}).magnitude() == 0.0;
    const double r_in = punctured ? 1e-3 * radius : 0.0;
    const double hr = (radius - r_in) / n_r;
    const double hp = kTwoPi / n_phi;
    double total = 0.0;
    for (int i = 0; i < n_r; ++i) {
        const double r = r_in + (i + 0.5) * hr;
        double ring = 0.0;
        for (int j = 0; j < n_phi; ++j) {
            const double phi = (j + 0.5) * hp;
            const KVector k{r * std::cos(phi), r * std::sin(phi), 0.0};
            ring += curvature_K(system, k, branch).components.z();
        }
        total += ring * r;
    }
    return total * hr * hp;
}

int winding_number(const SpinorSystem& system, const LoopSpec& loop) {
    const std::vector<Vec3> vertices = loop_vertices(loop);
    std::vector<double> angles;
    angles.reserve(vertices.size());
    for (const Vec3& v : vertices) {
        const BVector b = eval_field(system, KVector::from(v));
        const double mag = b.magnitude();
        if (!(mag > 0.0)) throw DegenerateField("winding undefined: b(k) vanishes on the loop");
        if (std::abs(b.bz) > 1e-12 * mag) throw NonPlanarField("winding requires a planar field (bz = 0 on the loop)");
        angles.push_back(std::atan2(b.by, b.bx));
    }
    double total = 0.0;
    for (std::size_t i = 0; i < angles.size(); ++i) {
        double d = angles[(i + 1) % angles.size()] - angles[i];
        d -= kTwoPi * std::round(d / kTwoPi);
        total += d;
    }
    const double turns = total / kTwoPi;
    const double rounded = std::round(turns);
    if (std::abs(turns - rounded) > 1e-6)
        throw ContractViolation("winding did not round to an integer (residual " + std::to_string(turns - rounded) + ")");
    return static_cast<int>(rounded);
}

PhaseResult adiabatic_phase_oracle(const BPath& path, double mu_b_T, long steps, Branch branch) {
    if (!(mu_b_T > 0.0) || !std::isfinite(mu_b_T)) throw InvalidArgument("adiabaticity scale must be positive");
    if (steps < 8) throw InvalidArgument("propagator steps must be >= 8");
    using C = std::complex<double>;
    const double ds = 1.0 / static_cast<double>(steps);
    const double s_branch = sign(branch);

    BVector b_prev = path(0.0);
    const Spinor z0 = eigenspinor(b_prev, branch);
    C up = z0.up, down = z0.down;
    C overlap_prev(1.0, 0.0);
    double geometric = 0.0;

    for (long i = 0; i < steps; ++i) {
        const BVector b_mid = path((static_cast<double>(i) + 0.5) * ds);
        const double mag = b_mid.magnitude();
        if (!(mag > 0.0)) throw DegenerateField("field path passes through b = 0");
        // exp(-i alpha n.sigma) = cos(alpha) - i sin(alpha) n.sigma
        const double alpha = ds * mu_b_T * mag;
        const Vec3 n = b_mid.vec() / mag;
        const C c(std::cos(alpha), 0.0);
        const C mis(0.0, -std::sin(alpha));
        const C n_up = up * n.z() + down * C(n.x(), -n.y());
        const C n_down = up * C(n.x(), n.y()) - down * n.z();
        up = c * up + mis * n_up;
        down = c * down + mis * n_down;

        const BVector b_next = path(static_cast<double>(i + 1) * ds);
        const Spinor z = eigenspinor(b_next, branch);
        const C overlap = std::conj(z.up) * up + std::conj(z.down) * down;
        const double dynamic = s_branch * mu_b_T * ds * 0.5 * (b_prev.magnitude() + b_next.magnitude());
        // strip the dynamic part before wrapping so large per-step rotations stay unambiguous
        geometric += std::arg(overlap / overlap_prev * std::polar(1.0, dynamic));
        overlap_prev = overlap;
        b_prev = b_next;
    }
    return {-geometric, 0, branch};
}

}  // namespace berrytop
