#pragma once

// Semiclassical motion in the adiabatic band E(k) = k^2 / 2m + branch |b(k)|
// with an anomalous velocity from the k-space curvature:
//
//   dk/dt = -E
//   dr/dt = grad_k E - (dk/dt) x Omega(k)
//
// (reduced units: unit charge, hbar = 1).

#include "berrytop/field.hpp"
#include "berrytop/types.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace berrytop {

struct ParticleState {
    Vec3 r = Vec3::Zero();
    KVector k;
    Branch branch = Branch::Aligned;
};

struct DriveConfig {
    Vec3 E = Vec3::Zero();
    double dt = 0.01;
    long steps = 10000;
    double mass = 1.0;

    void validate() const;
};

/// Samples at every multiple of `stride` steps (steps / stride + 1 of them),
/// the final state, and the curvature-driven part of the displacement.
/// transverse_displacement is that part projected on transverse_axis().
struct TrajectoryRecord {
    struct Sample {
        double t;
        Vec3 r;
        KVector k;
    };
    std::vector<Sample> samples;
    ParticleState final_state;
    Vec3 anomalous_displacement = Vec3::Zero();
    double transverse_displacement = 0.0;
};

/// Below this |b| a trajectory is treated as having left the adiabatic regime.
inline constexpr double kDegenerateFieldThreshold = 1e-9;

/// z_hat x (dk/dt) normalized; y_hat when the drive vanishes or is along z.
Vec3 transverse_axis(const DriveConfig& drive);

double band_energy(const SpinorSystem& system, const KVector& k, Branch branch, double mass);

/// k/m + branch * J^T b / |b|.
Vec3 band_velocity(const SpinorSystem& system, const KVector& k, Branch branch, double mass);

/// Curvature source for the anomalous velocity. The default is curvature_K.
using CurvatureProvider = std::function<Vec3(const KVector&, Branch)>;

CurvatureProvider default_curvature(const SpinorSystem& system);

/// One RK4 step.
ParticleState step_semiclassical(const ParticleState& state, const DriveConfig& drive, const SpinorSystem& system);
ParticleState step_semiclassical(const ParticleState& state, const DriveConfig& drive, const SpinorSystem& system,
                                 const CurvatureProvider& curvature);

TrajectoryRecord integrate_trajectory(const ParticleState& initial, const DriveConfig& drive,
                                      const SpinorSystem& system, long stride = 100);
TrajectoryRecord integrate_trajectory(const ParticleState& initial, const DriveConfig& drive,
                                      const SpinorSystem& system, const CurvatureProvider& curvature,
                                      long stride = 100);

struct EnsembleOptions {
    double k_inner = 0.2;
    double k_outer = 1.0;
    /// 0 means "use BERRYTOP_THREADS or the hardware concurrency".
    unsigned threads = 0;
};

struct EnsembleResult {
    double mean_transverse_aligned = 0.0;
    double mean_transverse_anti = 0.0;
    double separation = 0.0;
    int used = 0;
    int dropped = 0;
};

/// Initial k drawn uniformly (by area) from the annulus k_inner <= |k| <= k_outer
/// in the kz = 0 plane using std::mt19937_64 seeded with `seed`; each raw
/// 64-bit draw maps to a double as (x >> 11) * 2^-53. Both branches start from
/// the same states; a particle that meets a field zero on either branch is
/// dropped from both.
EnsembleResult ensemble_separation(const SpinorSystem& system, const DriveConfig& drive, int n_particles,
                                   std::uint64_t seed, const EnsembleOptions& options = {});

/// Initial wavevectors used by ensemble_separation.
std::vector<KVector> sample_annulus(int n, std::uint64_t seed, double k_inner, double k_outer);

}  // namespace berrytop
