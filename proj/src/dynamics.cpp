#include "berrytop/dynamics.hpp"

#include "berrytop/curvature.hpp"
#include "berrytop/errors.hpp"
#include "berrytop/parallel.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <string>

namespace berrytop {

namespace {

struct Rates {
    Vec3 velocity;
    Vec3 omega;
};

std::string describe(const KVector& k) {
    return "(" + std::to_string(k.kx) + ", " + std::to_string(k.ky) + ", " + std::to_string(k.kz) + ")";
}

BVector checked_field(const SpinorSystem& system, const KVector& k) {
    const BVector b = eval_field(system, k);
    if (!(b.magnitude() >= kDegenerateFieldThreshold))
        throw DegenerateField("trajectory entered the field-zero neighborhood at k = " + describe(k));
    return b;
}

Vec3 velocity_from(const KVector& k, const BVector& b, const Mat3& j, Branch branch, double mass) {
    return k.vec() / mass + sign(branch) * j.transpose() * b.vec() / b.magnitude();
}

// One field and Jacobian evaluation serves both the band velocity and the curvature.
Rates default_rates(const SpinorSystem& system, const KVector& k, Branch branch, double mass) {
    const BVector b = checked_field(system, k);
    const Mat3 j = field_jacobian(system, k);
    const double mag = b.magnitude();
    const Vec3 bv = b.vec() / (mag * mag * mag);
    const Vec3 dx = j.col(0), dy = j.col(1), dz = j.col(2);
    const Vec3 omega(bv.dot(dy.cross(dz)), bv.dot(dz.cross(dx)), bv.dot(dx.cross(dy)));
    return {velocity_from(k, b, j, branch, mass), sign(branch) * omega};
}

struct StepResult {
    ParticleState state;
    Vec3 anomalous;
};

template <typename RateFn>
StepResult rk4(const ParticleState& s, const DriveConfig& drive, RateFn&& rates) {
    const Vec3 kdot = -drive.E;
    const double dt = drive.dt;
    const Vec3 k0 = s.k.vec();

    auto eval = [&](const Vec3& k) {
        const Rates r = rates(KVector::from(k));
        const Vec3 anomalous = -kdot.cross(r.omega);
        return std::pair<Vec3, Vec3>{r.velocity + anomalous, anomalous};
    };
    const auto [v1, a1] = eval(k0);
    const auto [v2, a2] = eval(k0 + 0.5 * dt * kdot);
    const auto [v3, a3] = eval(k0 + 0.5 * dt * kdot);
    const auto [v4, a4] = eval(k0 + dt * kdot);

    StepResult out;
    out.state.branch = s.branch;
    out.state.k = KVector::from(k0 + dt * kdot);
    out.state.r = s.r + dt / 6.0 * (v1 + 2.0 * v2 + 2.0 * v3 + v4);
    out.anomalous = dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
    checked_field(rates.system, out.state.k);
    return out;
}

struct DefaultRates {
    const SpinorSystem& system;
    Branch branch;
    double mass;
    Rates operator()(const KVector& k) const { return default_rates(system, k, branch, mass); }
};

struct InjectedRates {
    const SpinorSystem& system;
    Branch branch;
    double mass;
    const CurvatureProvider& curvature;
    Rates operator()(const KVector& k) const {
        return {band_velocity(system, k, branch, mass), curvature(k, branch)};
    }
};

void validate_state(const ParticleState& s) {
    if (!s.k.finite() || !s.r.allFinite()) throw InvalidArgument("particle state must be finite");
}

template <typename RateFactory>
TrajectoryRecord integrate(const ParticleState& initial, const DriveConfig& drive, long stride,
                           RateFactory&& make_rates) {
    drive.validate();
    validate_state(initial);
    if (stride <= 0) throw InvalidArgument("stride must be positive");
    auto rates = make_rates(initial.branch);

    TrajectoryRecord rec;
    rec.samples.reserve(static_cast<std::size_t>(drive.steps / stride + 1));
    ParticleState s = initial;
    rec.samples.push_back({0.0, s.r, s.k});
    for (long i = 1; i <= drive.steps; ++i) {
        const StepResult next = rk4(s, drive, rates);
        s = next.state;
        rec.anomalous_displacement += next.anomalous;
        if (i % stride == 0) rec.samples.push_back({static_cast<double>(i) * drive.dt, s.r, s.k});
    }
    rec.final_state = s;
    rec.transverse_displacement = rec.anomalous_displacement.dot(transverse_axis(drive));
    return rec;
}

double unit_double(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

void DriveConfig::validate() const {
    if (!E.allFinite()) throw InvalidArgument("drive field E must be finite");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be positive and finite");
    if (steps < 0) throw InvalidArgument("steps must be non-negative");
    if (!(mass > 0.0) || !std::isfinite(mass)) throw InvalidArgument("mass must be positive and finite");
    if (!std::isfinite(dt * static_cast<double>(steps))) throw InvalidArgument("dt * steps must be finite");
}

Vec3 transverse_axis(const DriveConfig& drive) {
    const Vec3 axis = Vec3::UnitZ().cross(-drive.E);
    const double n = axis.norm();
    if (!(n > 0.0)) return Vec3::UnitY();
    return axis / n;
}

double band_energy(const SpinorSystem& system, const KVector& k, Branch branch, double mass) {
    if (!(mass > 0.0)) throw InvalidArgument("mass must be positive");
    const double k2 = k.vec().squaredNorm();
    return k2 / (2.0 * mass) + sign(branch) * eval_field(system, k).magnitude();
}

Vec3 band_velocity(const SpinorSystem& system, const KVector& k, Branch branch, double mass) {
    if (!(mass > 0.0)) throw InvalidArgument("mass must be positive");
    const BVector b = eval_field(system, k);
    if (!(b.magnitude() > 0.0)) throw DegenerateField("band velocity undefined where b(k) = 0");
    return velocity_from(k, b, field_jacobian(system, k), branch, mass);
}

CurvatureProvider default_curvature(const SpinorSystem& system) {
    return [system](const KVector& k, Branch branch) { return curvature_K(system, k, branch).components; };
}

ParticleState step_semiclassical(const ParticleState& state, const DriveConfig& drive, const SpinorSystem& system) {
    drive.validate();
    validate_state(state);
    DefaultRates rates{system, state.branch, drive.mass};
    checked_field(system, state.k);
    return rk4(state, drive, rates).state;
}

ParticleState step_semiclassical(const ParticleState& state, const DriveConfig& drive, const SpinorSystem& system,
                                 const CurvatureProvider& curvature) {
    drive.validate();
    validate_state(state);
    InjectedRates rates{system, state.branch, drive.mass, curvature};
    checked_field(system, state.k);
    return rk4(state, drive, rates).state;
}

TrajectoryRecord integrate_trajectory(const ParticleState& initial, const DriveConfig& drive,
                                      const SpinorSystem& system, long stride) {
    checked_field(system, initial.k);
    return integrate(initial, drive, stride,
                     [&](Branch branch) { return DefaultRates{system, branch, drive.mass}; });
}

TrajectoryRecord integrate_trajectory(const ParticleState& initial, const DriveConfig& drive,
                                      const SpinorSystem& system, const CurvatureProvider& curvature,
                                      long stride) {
    checked_field(system, initial.k);
    return integrate(initial, drive, stride,
                     [&](Branch branch) { return InjectedRates{system, branch, drive.mass, curvature}; });
}

std::vector<KVector> sample_annulus(int n, std::uint64_t seed, double k_inner, double k_outer) {
    if (n < 0) throw InvalidArgument("particle count must be non-negative");
    if (!(k_inner >= 0.0) || !(k_outer > k_inner) || !std::isfinite(k_outer))
        throw InvalidArgument("annulus needs 0 <= k_inner < k_outer");
    std::mt19937_64 rng(seed);
    const double a = k_inner * k_inner, span = k_outer * k_outer - a;
    std::vector<KVector> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double u = unit_double(rng);
        const double v = unit_double(rng);
        const double r = std::sqrt(a + u * span);
        const double phi = 2.0 * std::numbers::pi * v;
        out.push_back({r * std::cos(phi), r * std::sin(phi), 0.0});
    }
    return out;
}

EnsembleResult ensemble_separation(const SpinorSystem& system, const DriveConfig& drive, int n_particles,
                                   std::uint64_t seed, const EnsembleOptions& options) {
    drive.validate();
    if (n_particles <= 0) throw InvalidArgument("n_particles must be positive");
    const std::vector<KVector> starts = sample_annulus(n_particles, seed, options.k_inner, options.k_outer);

    struct Slot {
        std::optional<double> plus;
        std::optional<double> minus;
    };
    std::vector<Slot> slots(starts.size());
    const long stride = drive.steps > 0 ? drive.steps : 1;
    parallel_for(starts.size(), worker_count(options.threads), [&](std::size_t i) {
        try {
            const ParticleState p{Vec3::Zero(), starts[i], Branch::Aligned};
            const ParticleState m{Vec3::Zero(), starts[i], Branch::AntiAligned};
            const double tp = integrate_trajectory(p, drive, system, stride).transverse_displacement;
            const double tm = integrate_trajectory(m, drive, system, stride).transverse_displacement;
            slots[i] = {tp, tm};
        } catch (const DegenerateField&) {
            slots[i] = {};
        }
    });

    EnsembleResult res;
    double sum_p = 0.0, sum_m = 0.0;
    for (const Slot& s : slots) {
        if (!s.plus || !s.minus) {
            ++res.dropped;
            continue;
        }
        sum_p += *s.plus;
        sum_m += *s.minus;
        ++res.used;
    }
    if (res.used > 0) {
        res.mean_transverse_aligned = sum_p / res.used;
        res.mean_transverse_anti = sum_m / res.used;
    }
    res.separation = res.mean_transverse_aligned - res.mean_transverse_anti;
    return res;
}

}  // namespace berrytop
