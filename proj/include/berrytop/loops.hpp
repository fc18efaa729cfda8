#pragma once

// Line and surface integrals of the gauge and curvature fields.
//
// Berry phases use the reduced prefactor gamma = (1/2) oint a . dk, so a
// planar field winding n times gives n * pi.

#include "berrytop/curvature.hpp"
#include "berrytop/field.hpp"
#include "berrytop/types.hpp"

#include <functional>
#include <variant>
#include <vector>

namespace berrytop {

enum class Axis { X, Y, Z };

/// Circle in the plane normal to `normal`, traversed counterclockwise about
/// that axis `turns` times.
struct CircleLoop {
    Vec3 center = Vec3::Zero();
    double radius = 1.0;
    Axis normal = Axis::Z;
    int turns = 1;
};

/// Closed polygon; the first and last points must coincide.
struct PolylineLoop {
    std::vector<Vec3> points;
};

struct LoopSpec {
    std::variant<CircleLoop, PolylineLoop> shape;
    /// Circles: intervals per turn. Polylines: total intervals, split evenly
    /// across segments.
    int steps = 4096;
    /// +1 counterclockwise, -1 reversed.
    int orientation = 1;

    static LoopSpec circle(double radius, int steps, Vec3 center = Vec3::Zero(), int turns = 1, int orientation = 1);
    static LoopSpec polyline(std::vector<Vec3> points, int steps, int orientation = 1);

    /// Throws InvalidArgument when an invariant is broken.
    void validate() const;
};

struct SphereSpec {
    double radius = 1.0;
    int n_theta = 256;
    int n_phi = 256;

    void validate() const;
};

struct PhaseResult {
    double phase;  // radians, not reduced mod 2 pi
    int chart_switches;
    Branch branch;
};

/// One midpoint-rule sample of a discretized loop: the evaluation point,
/// the displacement it stands for, and the interval's start vertex.
struct LoopSample {
    Vec3 midpoint;
    Vec3 displacement;
    Vec3 start;
};

/// Midpoint samples in traversal order. For circles the displacement is the
/// exact tangent times the parameter step, so smooth periodic integrands
/// converge spectrally; polylines use chords.
std::vector<LoopSample> discretize(const LoopSpec& loop);

enum class ChartPolicy { Auto, North, South };

/// gamma = (1/2) sum a^K(k_i) . dk_i. With ChartPolicy::Auto each sample uses
/// auto_chart and every chart change adds the transition phase, so the result
/// is independent of where the switches happen (mod 2 pi).
PhaseResult berry_phase_loop(const SpinorSystem& system, const LoopSpec& loop, Branch branch,
                             ChartPolicy policy = ChartPolicy::Auto);

using CurvatureField = std::function<Vec3(const Vec3&)>;

/// Midpoint quadrature of the outward flux through a sphere centered at the origin.
double flux_sphere(const CurvatureField& field, const SphereSpec& sphere);

/// Flux of Omega_z through the disk |k| <= radius in the kz = 0 plane. When
/// the field vanishes at the origin the disk is punctured at 1e-3 * radius,
/// so delta-curvature systems return only their smooth part.
double flux_disk(const SpinorSystem& system, double radius, Branch branch, int n_r, int n_phi);

/// Net number of turns of (bx, by) around the loop.
int winding_number(const SpinorSystem& system, const LoopSpec& loop);

/// Closed field path over dimensionless time s in [0, 1].
using BPath = std::function<BVector(double)>;

/// Time-orders exp(-i ds mu_b_T b(s).sigma) applied to the branch eigenspinor
/// of b(0), strips the dynamic phase -branch * mu_b_T * int |b| ds (trapezoid)
/// and returns the residual geometric phase. Sign convention: the reported
/// phase is the negative of the wavefunction's geometric phase, so the aligned
/// branch converges to +(1/2) oint (1 - cos theta) dphi, matching
/// berry_phase_loop.
PhaseResult adiabatic_phase_oracle(const BPath& path, double mu_b_T, long steps, Branch branch = Branch::Aligned);

}  // namespace berrytop
