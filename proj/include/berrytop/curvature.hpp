#pragma once

#include "berrytop/field.hpp"
#include "berrytop/gauge.hpp"
#include "berrytop/types.hpp"

namespace berrytop {

struct CurvatureVector {
    Vec3 components;
    Space space;
    Branch branch;
};

class RegularizationParam {
public:
    explicit RegularizationParam(double epsilon);
    double epsilon() const { return epsilon_; }

private:
    double epsilon_;
};

/// Below this magnitude a curvature sample counts as zero (flat region of a
/// delta-curvature system).
inline constexpr double kFlatCurvatureThreshold = 1e-8;

/// Monopole field branch * b / |b|^3.
CurvatureVector monopole_curvature_B(const BVector& b, Branch branch);

/// Pullback of the monopole to k-space:
///   Omega_x = b.(d_ky b x d_kz b) / |b|^3   (and cyclic),
/// times the branch sign. For b = k this reproduces k / |k|^3.
CurvatureVector curvature_K(const SpinorSystem& system, const KVector& k, Branch branch);

/// Central-difference curl of pullback_gauge_K on a fixed chart with step h.
/// Independent of curvature_K; used as its ground truth.
CurvatureVector numeric_curl_oracle(const SpinorSystem& system, const KVector& k, Chart chart, Branch branch,
                                    double h);

/// Closed forms printed in the cubic and Perel rows of the reference table,
/// with prefactor 1/|b|^3. The cubic row's scalar "(kx^2 - ky^2) + c.p."
/// sums to zero, so that row evaluates to the zero vector. Comparison only.
CurvatureVector table1_analytic_curvature(const SpinorSystem& system, const KVector& k, Branch branch);

/// Field of the regularized south-chart potential, string along +z:
///   b / R^3 - (eps^2 / (R^2 (R - bz)^2) + eps^2 / (R^3 (R - bz))) z_hat,
///   R = sqrt(|b|^2 + eps^2).
CurvatureVector regularized_string_field(const BVector& b, RegularizationParam eps);

}  // namespace berrytop
