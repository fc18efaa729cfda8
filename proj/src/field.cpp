#include "berrytop/field.hpp"

#include <cmath>
#include <numbers>

namespace berrytop {

namespace {

void require_finite(const KVector& k) {
    if (!k.finite()) throw InvalidArgument("wavevector has non-finite components");
}

double require_nonzero(const BVector& b) {
    const double mag = b.magnitude();
    if (!(mag > 0.0)) throw DegenerateField("effective field vanishes; spin eigenstates are undefined");
    if (!std::isfinite(mag)) throw InvalidArgument("effective field has non-finite components");
    return mag;
}

}  // namespace

std::string_view kind_name(SystemKind kind) {
    switch (kind) {
        case SystemKind::LinearDresselhaus: return "dresselhaus";
        case SystemKind::LinearRashba: return "rashba";
        case SystemKind::MonolayerGraphene: return "monolayer";
        case SystemKind::BilayerGraphene: return "bilayer";
        case SystemKind::CubicDresselhaus: return "cubic-dresselhaus";
        case SystemKind::PerelDresselhaus: return "perel";
        case SystemKind::Custom: return "custom";
    }
    return "?";
}

std::optional<SystemKind> kind_from_name(std::string_view name) {
    for (SystemKind kind : builtin_kinds())
        if (kind_name(kind) == name) return kind;
    return std::nullopt;
}

std::string_view coupling_name(SystemKind kind) {
    switch (kind) {
        case SystemKind::LinearDresselhaus: return "eta_D";
        case SystemKind::LinearRashba: return "eta_R";
        case SystemKind::MonolayerGraphene: return "A";
        case SystemKind::BilayerGraphene: return "m";
        case SystemKind::CubicDresselhaus: return "eta_DC";
        case SystemKind::PerelDresselhaus: return "eta_Dk";
        case SystemKind::Custom: return "";
    }
    return "";
}

std::string_view field_formula(SystemKind kind) {
    switch (kind) {
        case SystemKind::LinearDresselhaus: return "eta_D * (kx, -ky, 0)";
        case SystemKind::LinearRashba: return "eta_R * (ky, -kx, 0)";
        case SystemKind::MonolayerGraphene: return "A * (kx, ky, 0)";
        case SystemKind::BilayerGraphene: return "(kx^2 - ky^2, 2 kx ky, 0) / (2 m)";
        case SystemKind::CubicDresselhaus: return "eta_DC * (kx (ky^2 - kz^2), ky (kz^2 - kx^2), kz (kx^2 - ky^2))";
        case SystemKind::PerelDresselhaus: return "eta_Dk * (-kx kz^2, ky kz^2, kz (kx^2 - ky^2))";
        case SystemKind::Custom: return "user expression";
    }
    return "";
}

const std::vector<SystemKind>& builtin_kinds() {
    static const std::vector<SystemKind> kinds = {
        SystemKind::LinearDresselhaus, SystemKind::LinearRashba,     SystemKind::MonolayerGraphene,
        SystemKind::BilayerGraphene,   SystemKind::CubicDresselhaus, SystemKind::PerelDresselhaus,
    };
    return kinds;
}

SpinorSystem SpinorSystem::builtin(SystemKind kind, const ParamMap& overrides, Branch branch) {
    if (kind == SystemKind::Custom) throw InvalidArgument("custom systems are built from a FieldSpec");
    const std::string coupling(coupling_name(kind));
    ParamMap params{{coupling, 1.0}};
    for (const auto& [key, value] : overrides) {
        if (key != coupling)
            throw InvalidArgument("system '" + std::string(kind_name(kind)) + "' has no parameter '" + key +
                                  "' (expected '" + coupling + "')");
        params[key] = value;
    }
    const double v = params[coupling];
    if (!std::isfinite(v) || v == 0.0)
        throw InvalidArgument("parameter '" + coupling + "' must be finite and nonzero");
    if (kind == SystemKind::BilayerGraphene && v <= 0.0) throw InvalidArgument("bilayer mass 'm' must be positive");
    return SpinorSystem(kind, std::move(params), branch, nullptr);
}

SpinorSystem SpinorSystem::custom(FieldSpec spec, Branch branch) {
    ParamMap params = spec.params;
    return SpinorSystem(SystemKind::Custom, std::move(params), branch,
                        std::make_shared<const FieldSpec>(std::move(spec)));
}

std::string SpinorSystem::name() const {
    if (kind_ == SystemKind::Custom) return spec_->name;
    return std::string(kind_name(kind_));
}

double SpinorSystem::param(const std::string& key) const {
    auto it = params_.find(key);
    if (it == params_.end()) throw InvalidArgument("system '" + name() + "' has no parameter '" + key + "'");
    return it->second;
}

SpinorSystem SpinorSystem::with_branch(Branch branch) const {
    SpinorSystem copy = *this;
    copy.branch_ = branch;
    return copy;
}

bool SpinorSystem::is_planar() const {
    switch (kind_) {
        case SystemKind::LinearDresselhaus:
        case SystemKind::LinearRashba:
        case SystemKind::MonolayerGraphene:
        case SystemKind::BilayerGraphene: return true;
        default: return false;
    }
}

std::optional<FieldSpec> preset_field_spec(std::string_view name, const ParamMap& overrides) {
    if (name == "gapped-rashba") {
        ParamMap params{{"eta_R", 1.0}, {"delta", 0.5}};
        for (const auto& [k, v] : overrides) {
            if (!params.count(k)) throw InvalidArgument("preset 'gapped-rashba' has no parameter '" + k + "'");
            params[k] = v;
        }
        return make_field_spec("gapped-rashba", params, "eta_R*ky", "-eta_R*kx", "delta");
    }
    if (name == "identity") {
        if (!overrides.empty()) throw InvalidArgument("preset 'identity' takes no parameters");
        return make_field_spec("identity", {}, "kx", "ky", "kz");
    }
    return std::nullopt;
}

std::vector<std::string> preset_names() { return {"gapped-rashba", "identity"}; }

std::optional<SpinorSystem> system_from_name(std::string_view name, const ParamMap& overrides, Branch branch) {
    if (auto kind = kind_from_name(name)) return SpinorSystem::builtin(*kind, overrides, branch);
    if (auto spec = preset_field_spec(name, overrides)) return SpinorSystem::custom(std::move(*spec), branch);
    return std::nullopt;
}

FieldSpec builtin_as_field_spec(const SpinorSystem& system) {
    const ParamMap& p = system.params();
    switch (system.kind()) {
        case SystemKind::LinearDresselhaus:
            return make_field_spec("dresselhaus", p, "eta_D*kx", "-(eta_D*ky)", "0");
        case SystemKind::LinearRashba:
            return make_field_spec("rashba", p, "eta_R*ky", "-(eta_R*kx)", "0");
        case SystemKind::MonolayerGraphene:
            return make_field_spec("monolayer", p, "A*kx", "A*ky", "0");
        case SystemKind::BilayerGraphene:
            return make_field_spec("bilayer", p, "(kx^2 - ky^2)/(2*m)", "2*kx*ky/(2*m)", "0");
        case SystemKind::CubicDresselhaus:
            return make_field_spec("cubic-dresselhaus", p, "eta_DC*(kx*(ky^2 - kz^2))", "eta_DC*(ky*(kz^2 - kx^2))",
                                   "eta_DC*(kz*(kx^2 - ky^2))");
        case SystemKind::PerelDresselhaus:
            return make_field_spec("perel", p, "eta_Dk*(-kx*kz^2)", "eta_Dk*(ky*kz^2)", "eta_Dk*(kz*(kx^2 - ky^2))");
        case SystemKind::Custom: return *system.custom_spec();
    }
    throw InvalidArgument("unknown system kind");
}

BVector eval_field(const SpinorSystem& system, const KVector& k) {
    require_finite(k);
    const double kx = k.kx, ky = k.ky, kz = k.kz;
    const double kx2 = kx * kx, ky2 = ky * ky, kz2 = kz * kz;
    switch (system.kind()) {
        case SystemKind::LinearDresselhaus: {
            const double eta = system.param("eta_D");
            return {eta * kx, -(eta * ky), 0.0};
        }
        case SystemKind::LinearRashba: {
            const double eta = system.param("eta_R");
            return {eta * ky, -(eta * kx), 0.0};
        }
        case SystemKind::MonolayerGraphene: {
            const double a = system.param("A");
            return {a * kx, a * ky, 0.0};
        }
        case SystemKind::BilayerGraphene: {
            const double two_m = 2.0 * system.param("m");
            return {(kx2 - ky2) / two_m, 2.0 * kx * ky / two_m, 0.0};
        }
        case SystemKind::CubicDresselhaus: {
            const double eta = system.param("eta_DC");
            return {eta * (kx * (ky2 - kz2)), eta * (ky * (kz2 - kx2)), eta * (kz * (kx2 - ky2))};
        }
        case SystemKind::PerelDresselhaus: {
            const double eta = system.param("eta_Dk");
            return {eta * (-kx * kz2), eta * (ky * kz2), eta * (kz * (kx2 - ky2))};
        }
        case SystemKind::Custom: return system.custom_spec()->evaluate(k);
    }
    throw InvalidArgument("unknown system kind");
}

Mat3 field_jacobian(const SpinorSystem& system, const KVector& k) {
    require_finite(k);
    const double kx = k.kx, ky = k.ky, kz = k.kz;
    Mat3 j = Mat3::Zero();
    switch (system.kind()) {
        case SystemKind::LinearDresselhaus: {
            const double eta = system.param("eta_D");
            j(0, 0) = eta;
            j(1, 1) = -eta;
            return j;
        }
        case SystemKind::LinearRashba: {
            const double eta = system.param("eta_R");
            j(0, 1) = eta;
            j(1, 0) = -eta;
            return j;
        }
        case SystemKind::MonolayerGraphene: {
            const double a = system.param("A");
            j(0, 0) = a;
            j(1, 1) = a;
            return j;
        }
        case SystemKind::BilayerGraphene: {
            const double m = system.param("m");
            j << kx / m, -ky / m, 0.0,
                 ky / m,  kx / m, 0.0,
                 0.0,     0.0,    0.0;
            return j;
        }
        case SystemKind::CubicDresselhaus: {
            const double eta = system.param("eta_DC");
            j << ky * ky - kz * kz, 2.0 * kx * ky,      -2.0 * kx * kz,
                 -2.0 * kx * ky,    kz * kz - kx * kx,  2.0 * ky * kz,
                 2.0 * kx * kz,     -2.0 * ky * kz,     kx * kx - ky * ky;
            return eta * j;
        }
        case SystemKind::PerelDresselhaus: {
            const double eta = system.param("eta_Dk");
            j << -kz * kz,      0.0,            -2.0 * kx * kz,
                 0.0,           kz * kz,        2.0 * ky * kz,
                 2.0 * kx * kz, -2.0 * ky * kz, kx * kx - ky * ky;
            return eta * j;
        }
        case SystemKind::Custom: {
            const Vec3 k0 = k.vec();
            const double h = 1e-5 * std::max(1.0, k0.norm());
            for (int axis = 0; axis < 3; ++axis) {
                Vec3 kp = k0, km = k0;
                kp[axis] += h;
                km[axis] -= h;
                const Vec3 bp = eval_field(system, KVector::from(kp)).vec();
                const Vec3 bm = eval_field(system, KVector::from(km)).vec();
                j.col(axis) = (bp - bm) / (kp[axis] - km[axis]);
            }
            return j;
        }
    }
    throw InvalidArgument("unknown system kind");
}

PolarAngles polar_angles(const BVector& b) {
    const double mag = require_nonzero(b);
    const double c = std::clamp(b.bz / mag, -1.0, 1.0);
    double phi = 0.0;
    if (b.bx != 0.0 || b.by != 0.0) {
        phi = std::atan2(b.by, b.bx);
        if (phi <= -std::numbers::pi) phi = std::numbers::pi;
    }
    return {std::acos(c), phi};
}

Spinor eigenspinor(const BVector& b, Branch branch) {
    const double mag = require_nonzero(b);
    // Eigenvalue -1 of n.sigma is eigenvalue +1 of (-n).sigma.
    const Vec3 n = sign(branch) * b.vec() / mag;
    using C = std::complex<double>;
    C up, down;
    // Two algebraically equivalent forms; pick the one away from cancellation.
    if (n.z() >= 0.0) {
        up = C(1.0 + n.z(), 0.0);
        down = C(n.x(), n.y());
    } else {
        up = C(n.x(), -n.y());
        down = C(1.0 - n.z(), 0.0);
    }
    const double norm = std::sqrt(std::norm(up) + std::norm(down));
    up /= norm;
    down /= norm;
    const C lead = std::abs(up) > 0.0 ? up : down;
    const C phase = std::conj(lead) / std::abs(lead);
    return {up * phase, down * phase};
}

Vec3 spin_expectation(const Spinor& z) {
    const std::complex<double> cross = std::conj(z.up) * z.down;
    return {2.0 * cross.real(), 2.0 * cross.imag(), std::norm(z.up) - std::norm(z.down)};
}

}  // namespace berrytop
