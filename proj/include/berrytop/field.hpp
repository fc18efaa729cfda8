#pragma once

// Effective Zeeman field maps b(k) for SU(2) spinor systems.
//
// Units: the Bohr magneton is absorbed into the couplings, so every builtin
// field is exactly the bracketed vector of its Hamiltonian times its coupling.

#include "berrytop/errors.hpp"
#include "berrytop/fieldspec.hpp"
#include "berrytop/types.hpp"

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace berrytop {

enum class SystemKind {
    LinearDresselhaus,
    LinearRashba,
    MonolayerGraphene,
    BilayerGraphene,
    CubicDresselhaus,
    PerelDresselhaus,
    Custom,
};

/// CLI/catalog name, e.g. "rashba", "bilayer".
std::string_view kind_name(SystemKind kind);
std::optional<SystemKind> kind_from_name(std::string_view name);

/// Name of the single coupling each builtin requires ("eta_R", "m", ...).
std::string_view coupling_name(SystemKind kind);

/// Human-readable b(k) for the catalog listing.
std::string_view field_formula(SystemKind kind);

const std::vector<SystemKind>& builtin_kinds();

class SpinorSystem {
public:
    /// Builtin system. Unset couplings default to 1.0; an override must name
    /// the kind's coupling and be nonzero (positive for the bilayer mass).
    static SpinorSystem builtin(SystemKind kind, const ParamMap& overrides = {}, Branch branch = Branch::Aligned);
    static SpinorSystem custom(FieldSpec spec, Branch branch = Branch::Aligned);

    SystemKind kind() const { return kind_; }
    const ParamMap& params() const { return params_; }
    Branch branch() const { return branch_; }
    const FieldSpec* custom_spec() const { return spec_.get(); }
    std::string name() const;
    double param(const std::string& key) const;

    SpinorSystem with_branch(Branch branch) const;

    /// Fields that vanish identically in kz and are planar for kz = 0.
    bool is_planar() const;

private:
    SpinorSystem(SystemKind kind, ParamMap params, Branch branch, std::shared_ptr<const FieldSpec> spec)
        : kind_(kind), params_(std::move(params)), branch_(branch), spec_(std::move(spec)) {}

    SystemKind kind_;
    ParamMap params_;
    Branch branch_;
    std::shared_ptr<const FieldSpec> spec_;
};

/// Custom presets shipped with the catalog: "gapped-rashba" (b = (ky, -kx, delta))
/// and "identity" (b = k). Returns nullopt for unknown names.
std::optional<FieldSpec> preset_field_spec(std::string_view name, const ParamMap& overrides = {});
std::vector<std::string> preset_names();

/// Resolves a builtin or preset name into a system.
std::optional<SpinorSystem> system_from_name(std::string_view name, const ParamMap& overrides = {},
                                             Branch branch = Branch::Aligned);

/// The builtin field re-expressed in the expression language.
FieldSpec builtin_as_field_spec(const SpinorSystem& system);

BVector eval_field(const SpinorSystem& system, const KVector& k);

/// J(i, j) = d b_i / d k_j. Analytic for builtins; central differences with
/// step 1e-5 * max(1, |k|) for custom fields.
Mat3 field_jacobian(const SpinorSystem& system, const KVector& k);

struct PolarAngles {
    double theta;  // [0, pi]
    double phi;    // (-pi, pi], 0 on the z axis
};

PolarAngles polar_angles(const BVector& b);

struct Spinor {
    std::complex<double> up;
    std::complex<double> down;
};

/// Normalized eigenvector of n.sigma with eigenvalue sign(branch). The first
/// nonzero component is made real and positive.
Spinor eigenspinor(const BVector& b, Branch branch);

/// <z|sigma|z>.
Vec3 spin_expectation(const Spinor& z);

}  // namespace berrytop
