#include "berrytop/hopf.hpp"

#include "berrytop/errors.hpp"

#include <cmath>
#include <numbers>

namespace berrytop {

namespace {

constexpr double kPullbackStep = 1e-5;

}  // namespace

S3Point S3Param::point() const {
    return {std::polar(std::cos(0.5 * theta), eps1), std::polar(std::sin(0.5 * theta), eps2)};
}

Vec3 hopf_project(const S3Param& p) {
    const double d = p.eps1 - p.eps2;
    const double st = std::sin(p.theta);
    return {st * std::cos(d), st * std::sin(d), std::cos(p.theta)};
}

Vec3 hopf_project(const S3Point& p) {
    const std::complex<double> w = p.z1 * std::conj(p.z2);
    return {2.0 * w.real(), 2.0 * w.imag(), std::norm(p.z1) - std::norm(p.z2)};
}

S3Point section(Chart chart, double theta, double phi) {
    const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
    if (chart == Chart::North) return {{c, 0.0}, std::polar(s, -phi)};
    return {std::polar(c, phi), {s, 0.0}};
}

std::array<double, 4> inclusion(const S3Point& p) { return {p.z1.real(), p.z1.imag(), p.z2.real(), p.z2.imag()}; }

OneFormCoeffs omega_pullback(Chart chart, double theta, double phi) {
    using C = std::complex<double>;
    const auto x = inclusion(section(chart, theta, phi));

    // omega(v) for a tangent vector v in R^4, coordinates ordered (x1, y1, x2, y2).
    auto omega = [&](const std::array<double, 4>& v) -> C {
        return C(0.0, 1.0) * (-x[1] * v[0] + x[0] * v[1] - x[3] * v[2] + x[2] * v[3]);
    };
    auto derivative = [&](double t_lo, double t_hi, double p_lo, double p_hi) {
        const auto hi = inclusion(section(chart, t_hi, p_hi));
        const auto lo = inclusion(section(chart, t_lo, p_lo));
        const double span = (t_hi - t_lo) + (p_hi - p_lo);
        std::array<double, 4> v{};
        for (int i = 0; i < 4; ++i) v[i] = (hi[i] - lo[i]) / span;
        return v;
    };

    const double t_lo = std::max(0.0, theta - kPullbackStep);
    const double t_hi = std::min(std::numbers::pi, theta + kPullbackStep);
    const C w_theta = omega(derivative(t_lo, t_hi, phi, phi));
    const C w_phi = omega(derivative(theta, theta, phi - kPullbackStep, phi + kPullbackStep));

    const C a_theta = C(0.0, 1.0) * w_theta;
    const C a_phi = C(0.0, 1.0) * w_phi;
    if (std::abs(a_theta.imag()) > 1e-10 || std::abs(a_phi.imag()) > 1e-10)
        throw ContractViolation("pulled-back connection has an imaginary residue");
    return {a_theta.real(), a_phi.real()};
}

std::complex<double> transition_function(Chart from, Chart to, double phi) {
    if (from == to) throw ContractViolation("transition function needs two distinct charts");
    return from == Chart::South ? std::polar(1.0, -phi) : std::polar(1.0, phi);
}

}  // namespace berrytop
