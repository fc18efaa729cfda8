#include "berrytop/curvature.hpp"

#include "berrytop/errors.hpp"

#include <cmath>

namespace berrytop {

RegularizationParam::RegularizationParam(double epsilon) : epsilon_(epsilon) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw InvalidArgument("regularization epsilon must be positive");
}

CurvatureVector monopole_curvature_B(const BVector& b, Branch branch) {
    const double mag = b.magnitude();
    if (!(mag > 0.0)) throw DegenerateField("monopole curvature is singular at b = 0");
    return {sign(branch) * b.vec() / (mag * mag * mag), Space::B, branch};
}

CurvatureVector curvature_K(const SpinorSystem& system, const KVector& k, Branch branch) {
    const BVector b = eval_field(system, k);
    const double mag = b.magnitude();
    if (!(mag > 0.0)) throw DegenerateField("k-space curvature is singular where b(k) = 0");
    const Mat3 j = field_jacobian(system, k);
    const Vec3 bv = b.vec() / (mag * mag * mag);
    const Vec3 dx = j.col(0), dy = j.col(1), dz = j.col(2);
    const Vec3 omega(bv.dot(dy.cross(dz)), bv.dot(dz.cross(dx)), bv.dot(dx.cross(dy)));
    return {sign(branch) * omega, Space::K, branch};
}

CurvatureVector numeric_curl_oracle(const SpinorSystem& system, const KVector& k, Chart chart, Branch branch,
                                    double h) {
    if (!(h > 0.0)) throw InvalidArgument("finite-difference step must be positive");
    const SpinorSystem sys = system.with_branch(branch);
    const Vec3 k0 = k.vec();
    // d[axis] = d a / d k_axis
    Mat3 d;
    for (int axis = 0; axis < 3; ++axis) {
        Vec3 kp = k0, km = k0;
        kp[axis] += h;
        km[axis] -= h;
        const Vec3 ap = pullback_gauge_K(sys, KVector::from(kp), chart).components;
        const Vec3 am = pullback_gauge_K(sys, KVector::from(km), chart).components;
        d.col(axis) = (ap - am) / (kp[axis] - km[axis]);
    }
    const Vec3 curl(d(2, 1) - d(1, 2), d(0, 2) - d(2, 0), d(1, 0) - d(0, 1));
    return {curl, Space::K, branch};
}

CurvatureVector table1_analytic_curvature(const SpinorSystem& system, const KVector& k, Branch branch) {
    const BVector b = eval_field(system, k);
    const double mag = b.magnitude();
    if (!(mag > 0.0)) throw DegenerateField("curvature is singular where b(k) = 0");
    const double pref = sign(branch) / (mag * mag * mag);
    const double kx2 = k.kx * k.kx, ky2 = k.ky * k.ky, kz2 = k.kz * k.kz;
    switch (system.kind()) {
        case SystemKind::CubicDresselhaus: {
            const double scalar = (kx2 - ky2) + (ky2 - kz2) + (kz2 - kx2);
            return {pref * scalar * k.vec(), Space::K, branch};
        }
        case SystemKind::PerelDresselhaus: {
            const double kz4 = kz2 * kz2;
            const Vec3 v(kz4 * k.kx, kz4 * k.ky, kz4 * k.kz);
            return {pref * (ky2 - kx2) * v, Space::K, branch};
        }
        default:
            throw InvalidArgument("no printed closed-form curvature for system '" + system.name() + "'");
    }
}

CurvatureVector regularized_string_field(const BVector& b, RegularizationParam eps) {
    const double e2 = eps.epsilon() * eps.epsilon();
    const double r2 = b.bx * b.bx + b.by * b.by + b.bz * b.bz + e2;
    const double r = std::sqrt(r2);
    const double r3 = r2 * r;
    // R - bz without cancellation when bz > 0: (R^2 - bz^2) / (R + bz).
    const double rmz = b.bz > 0.0 ? (b.bx * b.bx + b.by * b.by + e2) / (r + b.bz) : r - b.bz;
    const double string = e2 / (r2 * rmz * rmz) + e2 / (r3 * rmz);
    Vec3 omega = b.vec() / r3;
    omega.z() -= string;
    return {omega, Space::B, Branch::Aligned};
}

}  // namespace berrytop
