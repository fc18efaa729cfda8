#pragma once

// Dirac gauge potential on the two Wu-Yang charts, in reduced units where
// hbar/(2e) = 1:
//
//   North:  a =  (1 - cos theta) grad phi = (-by, bx, 0) / (|b| (|b| + bz))
//   South:  a = -(1 + cos theta) grad phi = ( by, -bx, 0) / (|b| (|b| - bz))
//
// multiplied by the branch sign. The two differ by 2 grad phi on the overlap.

#include "berrytop/field.hpp"
#include "berrytop/types.hpp"

namespace berrytop {

struct GaugeVector {
    Vec3 components;
    Space space;
    Chart chart;
    Branch branch;
};

/// Relative distance from a chart's Dirac string below which evaluation is refused.
inline constexpr double kChartSingularTolerance = 1e-12;

GaugeVector dirac_gauge_B(const BVector& b, Chart chart, Branch branch);

/// North for bz >= 0, South otherwise.
Chart auto_chart(const BVector& b);

/// a^K_mu = a^B . d b / d k_mu, using the system's branch.
GaugeVector pullback_gauge_K(const SpinorSystem& system, const KVector& k, Chart chart);

/// Closed-form planar gauges for the four linear/graphene systems at kz = 0.
GaugeVector planar_gauge_reference(const SpinorSystem& system, const KVector& k);

/// |a^N(b) - a^S(b) - 2 grad_b phi| for b off both poles.
double chart_transition_check(const BVector& b);

}  // namespace berrytop
