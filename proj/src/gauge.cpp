#include "berrytop/gauge.hpp"

#include "berrytop/errors.hpp"

#include <cmath>

namespace berrytop {

namespace {

double require_nonzero(const BVector& b) {
    const double mag = b.magnitude();
    if (!(mag > 0.0)) throw DegenerateField("effective field vanishes; gauge potential is undefined");
    return mag;
}

}  // namespace

GaugeVector dirac_gauge_B(const BVector& b, Chart chart, Branch branch) {
    const double mag = require_nonzero(b);
    const double s = sign(branch);
    if (chart == Chart::North) {
        const double denom = mag + b.bz;
        if (denom < kChartSingularTolerance * mag)
            throw ChartSingular(Chart::North, "field lies on the -z Dirac string of the north chart; use the south chart");
        return {s * Vec3(-b.by, b.bx, 0.0) / (mag * denom), Space::B, chart, branch};
    }
    const double denom = mag - b.bz;
    if (denom < kChartSingularTolerance * mag)
        throw ChartSingular(Chart::South, "field lies on the +z Dirac string of the south chart; use the north chart");
    return {s * Vec3(b.by, -b.bx, 0.0) / (mag * denom), Space::B, chart, branch};
}

Chart auto_chart(const BVector& b) {
    require_nonzero(b);
    return b.bz >= 0.0 ? Chart::North : Chart::South;
}

GaugeVector pullback_gauge_K(const SpinorSystem& system, const KVector& k, Chart chart) {
    const BVector b = eval_field(system, k);
    const GaugeVector aB = dirac_gauge_B(b, chart, system.branch());
    const Mat3 jac = field_jacobian(system, k);
    return {jac.transpose() * aB.components, Space::K, chart, system.branch()};
}

GaugeVector planar_gauge_reference(const SpinorSystem& system, const KVector& k) {
    if (k.kz != 0.0) throw InvalidArgument("planar gauge reference requires kz = 0");
    const double k2 = k.kx * k.kx + k.ky * k.ky;
    if (!(k2 > 0.0)) throw DegenerateField("planar gauge is singular at k = 0");
    const double s = sign(system.branch());
    Vec3 a;
    switch (system.kind()) {
        case SystemKind::LinearDresselhaus: a = Vec3(k.ky, -k.kx, 0.0); break;
        case SystemKind::LinearRashba:
        case SystemKind::MonolayerGraphene: a = Vec3(-k.ky, k.kx, 0.0); break;
        case SystemKind::BilayerGraphene: a = Vec3(-2.0 * k.ky, 2.0 * k.kx, 0.0); break;
        default:
            throw InvalidArgument("no closed-form planar gauge for system '" + system.name() + "'");
    }
    // Positive couplings assumed by the closed forms; a negative coupling
    // rotates b by pi and leaves the winding, hence the gauge, unchanged.
    return {s * a / k2, Space::K, Chart::North, system.branch()};
}

double chart_transition_check(const BVector& b) {
    const double rho2 = b.bx * b.bx + b.by * b.by;
    if (!(rho2 > 0.0)) throw ChartSingular(Chart::North, "azimuth is undefined on the z axis");
    const Vec3 north = dirac_gauge_B(b, Chart::North, Branch::Aligned).components;
    const Vec3 south = dirac_gauge_B(b, Chart::South, Branch::Aligned).components;
    const Vec3 grad_phi(-b.by / rho2, b.bx / rho2, 0.0);
    return (north - south - 2.0 * grad_phi).norm();
}

}  // namespace berrytop
