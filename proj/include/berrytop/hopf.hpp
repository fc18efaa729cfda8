#pragma once

// Hopf bundle S^3 -> S^2 behind the two-chart monopole gauge.

#include "berrytop/types.hpp"

#include <array>
#include <complex>

namespace berrytop {

struct S3Point {
    std::complex<double> z1;
    std::complex<double> z2;

    double norm_squared() const { return std::norm(z1) + std::norm(z2); }
};

/// (cos(theta/2) e^{i eps1}, sin(theta/2) e^{i eps2}).
struct S3Param {
    double theta;
    double eps1;
    double eps2;

    S3Point point() const;
};

/// Coefficients of d theta and d phi.
struct OneFormCoeffs {
    double a_theta;
    double a_phi;
};

/// (sin theta cos(eps1 - eps2), sin theta sin(eps1 - eps2), cos theta).
Vec3 hopf_project(const S3Param& p);

/// Same map written on the point: (2 Re z1 z2*, 2 Im z1 z2*, |z1|^2 - |z2|^2).
Vec3 hopf_project(const S3Point& p);

/// North: (cos(theta/2), sin(theta/2) e^{-i phi}); South: (cos(theta/2) e^{i phi}, sin(theta/2)).
S3Point section(Chart chart, double theta, double phi);

/// Real coordinates (x1, y1, x2, y2) of the inclusion S^3 -> R^4.
std::array<double, 4> inclusion(const S3Point& p);

/// Pulls omega = i(-y1 dx1 + x1 dy1 - y2 dx2 + x2 dy2) back through the chart
/// section by central differences (step 1e-5 rad, clipped to [0, pi] in
/// theta) and returns the real gauge coefficients of i * omega. Throws
/// ContractViolation if the result has an imaginary residue above 1e-10.
OneFormCoeffs omega_pullback(Chart chart, double theta, double phi);

/// Fiber phase relating the sections: section(to) = g * section(from).
/// g_SN (from South to North) = e^{-i phi}; g_NS = e^{+i phi}.
std::complex<double> transition_function(Chart from, Chart to, double phi);

}  // namespace berrytop
