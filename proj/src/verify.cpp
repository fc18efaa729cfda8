#include "berrytop/verify.hpp"

#include "berrytop/curvature.hpp"
#include "berrytop/dynamics.hpp"
#include "berrytop/errors.hpp"
#include "berrytop/field.hpp"
#include "berrytop/gauge.hpp"
#include "berrytop/hopf.hpp"
#include "berrytop/loops.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

namespace berrytop {

namespace {

constexpr double kPi = std::numbers::pi;

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}
    double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
    Vec3 in_box(double half) { return {uniform(-half, half), uniform(-half, half), uniform(-half, half)}; }

private:
    std::mt19937_64 rng_;
};

CheckResult check(int criterion, std::string name, double measured, double expected, double tolerance) {
    CheckResult c;
    c.criterion = criterion;
    c.name = std::move(name);
    c.measured = measured;
    c.expected = expected;
    c.tolerance = tolerance;
    c.passed = std::isfinite(measured) && std::abs(measured - expected) < tolerance;
    return c;
}

// Passes when `value` < bound.
CheckResult bound(int criterion, std::string name, double value, double limit) {
    CheckResult c;
    c.criterion = criterion;
    c.name = std::move(name);
    c.measured = value;
    c.expected = "< " + std::to_string(limit);
    c.tolerance = limit;
    c.passed = std::isfinite(value) && value < limit;
    return c;
}

CheckResult predicate(int criterion, std::string name, bool ok, nlohmann::json measured, std::string expected) {
    CheckResult c;
    c.criterion = criterion;
    c.name = std::move(name);
    c.measured = std::move(measured);
    c.expected = std::move(expected);
    c.passed = ok;
    return c;
}

std::string format_eps(double e) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "eps=%g", e);
    return buf;
}

CurvatureField monopole_field() {
    return [](const Vec3& b) { return monopole_curvature_B(BVector::from(b), Branch::Aligned).components; };
}

std::vector<CheckResult> monopole_flux(unsigned) {
    const double f1 = flux_sphere(monopole_field(), {1.0, 256, 256});
    const double f2 = flux_sphere(monopole_field(), {2.0, 256, 256});
    return {check(1, "sphere flux r=1, 256x256", f1, 4.0 * kPi, 1e-4),
            bound(1, "|flux(r=2) - flux(r=1)|", std::abs(f2 - f1), 1e-6)};
}

std::vector<CheckResult> string_cancellation(unsigned) {
    const std::vector<double> eps{0.1, 0.03, 0.01};
    nlohmann::json fluxes = nlohmann::json::object();
    std::vector<double> mags;
    for (double e : eps) {
        const RegularizationParam p(e);
        const double f = flux_sphere(
            [p](const Vec3& b) { return regularized_string_field(BVector::from(b), p).components; },
            {1.0, 1024, 1024});
        fluxes[format_eps(e)] = f;
        mags.push_back(std::abs(f));
    }
    bool monotone = true;
    for (std::size_t i = 1; i < mags.size(); ++i) monotone = monotone && mags[i] < mags[i - 1];
    auto mono = predicate(2, "|flux| decreasing as eps 0.1 -> 0.03 -> 0.01 (1024x1024)", monotone, fluxes,
                          "strictly decreasing magnitudes");
    if (!monotone)
        mono.detail = "the regularized field is the curl of a smooth potential, so its exact flux is 0 for every "
                      "eps; the residual is quadrature error, which grows as eps shrinks on a fixed grid";
    return {mono, bound(2, "|flux(eps=0.01)|", mags.back(), 0.15)};
}

struct PlanarCase {
    SystemKind kind;
    double expected;  // |gamma| for one turn
};

const std::vector<PlanarCase>& planar_cases() {
    static const std::vector<PlanarCase> cases{{SystemKind::LinearRashba, kPi},
                                               {SystemKind::LinearDresselhaus, kPi},
                                               {SystemKind::MonolayerGraphene, kPi},
                                               {SystemKind::BilayerGraphene, 2.0 * kPi}};
    return cases;
}

std::vector<CheckResult> table_phases(unsigned) {
    std::vector<CheckResult> out;
    double rashba = 0.0, dresselhaus = 0.0;
    int w_rashba = 0, w_dresselhaus = 0;
    for (const auto& pc : planar_cases()) {
        const auto sys = SpinorSystem::builtin(pc.kind);
        const std::string name(kind_name(pc.kind));
        const double g1 = berry_phase_loop(sys, LoopSpec::circle(1.0, 4096), Branch::Aligned).phase;
        const double g2 =
            berry_phase_loop(sys, LoopSpec::circle(1.0, 4096, Vec3::Zero(), 2), Branch::Aligned).phase;
        out.push_back(check(3, name + " |gamma|, unit circle", std::abs(g1), pc.expected, 1e-6));
        out.push_back(check(3, name + " |gamma|, double traversal", std::abs(g2), 2.0 * pc.expected, 1e-6));
        const int w = winding_number(sys, LoopSpec::circle(1.0, 4096));
        if (pc.kind == SystemKind::LinearRashba) rashba = g1, w_rashba = w;
        if (pc.kind == SystemKind::LinearDresselhaus) dresselhaus = g1, w_dresselhaus = w;
    }
    out.push_back(predicate(3, "dresselhaus phase sign opposite to rashba", rashba * dresselhaus < 0.0,
                            {{"rashba", rashba}, {"dresselhaus", dresselhaus}}, "opposite signs"));
    out.push_back(predicate(3, "windings rashba +1, dresselhaus -1", w_rashba == 1 && w_dresselhaus == -1,
                            {{"rashba", w_rashba}, {"dresselhaus", w_dresselhaus}}, "+1 and -1"));
    return out;
}

std::vector<CheckResult> delta_flatness(unsigned) {
    std::vector<CheckResult> out;
    for (const auto& pc : planar_cases()) {
        const auto sys = SpinorSystem::builtin(pc.kind);
        const std::string name(kind_name(pc.kind));
        Sampler rng(0x5eed0004u + static_cast<unsigned>(pc.kind));
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            Vec3 k;
            do k = rng.in_box(2.0);
            while (std::hypot(k.x(), k.y()) < 0.05);
            worst = std::max(worst, curvature_K(sys, KVector::from(k), Branch::Aligned).components.norm());
        }
        out.push_back(bound(4, name + " max |Omega_K| at 100 random k", worst, kFlatCurvatureThreshold));
        const double g = berry_phase_loop(sys, LoopSpec::circle(1.0, 4096), Branch::Aligned).phase;
        out.push_back(predicate(4, name + " loop phase nonzero", std::abs(g) > 1.0, g, "|gamma| >= pi"));
    }
    return out;
}

// Richardson-extrapolated curl of the chart gauge.
Vec3 curl_oracle(const SpinorSystem& sys, const KVector& k, Chart chart) {
    const Vec3 coarse = numeric_curl_oracle(sys, k, chart, Branch::Aligned, 2e-4).components;
    const Vec3 fine = numeric_curl_oracle(sys, k, chart, Branch::Aligned, 1e-4).components;
    return (4.0 * fine - coarse) / 3.0;
}

std::vector<CheckResult> oracle_equivalence(unsigned) {
    std::vector<std::pair<std::string, SpinorSystem>> systems{
        {"cubic-dresselhaus", SpinorSystem::builtin(SystemKind::CubicDresselhaus)},
        {"perel", SpinorSystem::builtin(SystemKind::PerelDresselhaus)},
        {"gapped-rashba", *system_from_name("gapped-rashba")},
        {"identity", *system_from_name("identity")},
    };
    std::vector<CheckResult> out;
    for (std::size_t s = 0; s < systems.size(); ++s) {
        const auto& [name, sys] = systems[s];
        Sampler rng(0x5eed0005u + s);
        double worst = 0.0;
        int accepted = 0;
        while (accepted < 100) {
            const KVector k = KVector::from(rng.in_box(1.5));
            if (k.norm() < 0.2) continue;
            const BVector b = eval_field(sys, k);
            const double mag = b.magnitude();
            if (!(mag > 1e-3)) continue;
            const Chart chart = auto_chart(b);
            // stay clear of the chart's string so the difference stencil is regular
            if (std::hypot(b.bx, b.by) < 0.05 * mag) continue;
            const Vec3 omega = curvature_K(sys, k, Branch::Aligned).components;
            if (omega.norm() < 1e-6) continue;
            const Vec3 ref = curl_oracle(sys, k, chart);
            worst = std::max(worst, (omega - ref).norm() / omega.norm());
            ++accepted;
        }
        out.push_back(bound(5, name + " max relative |curvature_K - curl oracle|", worst, 1e-5));
    }
    const auto id = *system_from_name("identity");
    Sampler rng(0x5eed0055u);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        Vec3 k;
        do k = rng.in_box(1.5);
        while (k.norm() < 0.2);
        const Vec3 expect = k / std::pow(k.norm(), 3);
        const Vec3 got = curvature_K(id, KVector::from(k), Branch::Aligned).components;
        worst = std::max(worst, (got - expect).norm() / expect.norm());
    }
    out.push_back(bound(5, "identity map reproduces k/|k|^3 (relative)", worst, 1e-8));
    return out;
}

std::vector<CheckResult> propagator(unsigned) {
    std::vector<CheckResult> out;
    const auto rashba = SpinorSystem::builtin(SystemKind::LinearRashba);
    const BPath circle = [&](double s) {
        return eval_field(rashba, {std::cos(2.0 * kPi * s), std::sin(2.0 * kPi * s), 0.0});
    };
    const double prop = adiabatic_phase_oracle(circle, 1e4, 1 << 20).phase;
    const double gauge = berry_phase_loop(rashba, LoopSpec::circle(1.0, 4096), Branch::Aligned).phase;
    auto c = check(6, "rashba unit circle: propagator vs gauge loop", prop, gauge, 2e-3);
    out.push_back(c);
    for (double theta : {0.1, kPi / 4.0, kPi / 2.0}) {
        const BPath cone = [theta](double s) {
            const double p = 2.0 * kPi * s;
            return BVector{std::sin(theta) * std::cos(p), std::sin(theta) * std::sin(p), std::cos(theta)};
        };
        const double g = adiabatic_phase_oracle(cone, 1e4, 1 << 20).phase;
        char label[64];
        std::snprintf(label, sizeof label, "cone theta=%.6g: propagator vs pi(1-cos theta)", theta);
        out.push_back(check(6, label, g, kPi * (1.0 - std::cos(theta)), 1e-3));
    }
    return out;
}

std::vector<CheckResult> chart_consistency(unsigned) {
    std::vector<CheckResult> out;
    Sampler rng(0x5eed0007u);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        Vec3 b;
        do b = rng.in_box(2.0);
        while (b.norm() < 0.2 || std::hypot(b.x(), b.y()) < 0.05 * b.norm());
        worst = std::max(worst, chart_transition_check(BVector::from(b)));
    }
    out.push_back(bound(7, "max chart transition residual, 100 random b", worst, 1e-10));

    double pull = 0.0, cocycle = 0.0, fiber = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double theta = rng.uniform(0.05, kPi - 0.05);
        const double phi = rng.uniform(-kPi, kPi);
        const auto n = omega_pullback(Chart::North, theta, phi);
        const auto s = omega_pullback(Chart::South, theta, phi);
        pull = std::max({pull, std::abs(n.a_phi - 0.5 * (1.0 - std::cos(theta))),
                         std::abs(s.a_phi + 0.5 * (1.0 + std::cos(theta))), std::abs(n.a_theta),
                         std::abs(s.a_theta)});
        const auto g_sn = transition_function(Chart::South, Chart::North, phi);
        const auto g_ns = transition_function(Chart::North, Chart::South, phi);
        cocycle = std::max(cocycle, std::abs(g_sn * g_ns - 1.0));
        const S3Point pn = section(Chart::North, theta, phi);
        const S3Point ps = section(Chart::South, theta, phi);
        const Vec3 x(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
        fiber = std::max({fiber, std::abs(pn.z1 - g_sn * ps.z1), std::abs(pn.z2 - g_sn * ps.z2),
                          (hopf_project(pn) - x).norm(), (hopf_project(ps) - x).norm()});
    }
    out.push_back(bound(7, "max |hopf pullback - (+-1/2)(1 -+ cos theta)|", pull, 1e-8));
    out.push_back(bound(7, "max |g_SN g_NS - 1|", cocycle, 1e-10));
    out.push_back(bound(7, "max fiber consistency residual", fiber, 1e-10));
    return out;
}

std::vector<CheckResult> disk_flux(unsigned) {
    const auto gapped = *system_from_name("gapped-rashba");
    const double f50 = flux_disk(gapped, 50.0, Branch::Aligned, 40000, 16);
    auto rel = check(8, "gapped rashba flux_disk(R=50) / 2pi", f50 / (2.0 * kPi), 1.0, 1e-2);
    const double f2 = flux_disk(gapped, 2.0, Branch::Aligned, 4000, 16);
    const double g2 = berry_phase_loop(gapped, LoopSpec::circle(2.0, 4096), Branch::Aligned).phase;
    return {rel, check(8, "berry_phase_loop(r=2) vs flux_disk(r=2)/2", g2, 0.5 * f2, 1e-4)};
}

std::vector<CheckResult> spin_hall(unsigned threads) {
    DriveConfig drive;
    drive.E = Vec3(-0.01, 0.0, 0.0);
    drive.dt = 0.01;
    drive.steps = 10000;
    EnsembleOptions opts;
    opts.threads = threads;
    const auto gapped = *system_from_name("gapped-rashba");
    const EnsembleResult r = ensemble_separation(gapped, drive, 100, 2024, opts);
    const double a = std::abs(r.mean_transverse_aligned), b = std::abs(r.mean_transverse_anti);
    const nlohmann::json m{{"mean_aligned", r.mean_transverse_aligned},
                           {"mean_anti", r.mean_transverse_anti},
                           {"separation", r.separation},
                           {"used", r.used},
                           {"dropped", r.dropped}};
    std::vector<CheckResult> out;
    out.push_back(predicate(9, "gapped rashba: branches displaced in opposite directions",
                            r.mean_transverse_aligned * r.mean_transverse_anti < 0.0 && r.separation != 0.0, m,
                            "opposite signs, separation != 0"));
    out.push_back(bound(9, "gapped rashba: | |mean+| - |mean-| | / max", std::abs(a - b) / std::max(a, b), 1e-2));

    const auto bare = SpinorSystem::builtin(SystemKind::LinearRashba);
    const EnsembleResult z = ensemble_separation(bare, drive, 100, 2024, opts);
    out.push_back(predicate(9, "ungapped rashba: zero transverse response",
                            z.mean_transverse_aligned == 0.0 && z.mean_transverse_anti == 0.0,
                            {{"mean_aligned", z.mean_transverse_aligned},
                             {"mean_anti", z.mean_transverse_anti},
                             {"dropped", z.dropped}},
                            "exactly 0"));
    return out;
}

struct MalformedCase {
    const char* bx;
    std::size_t position;
};

std::vector<CheckResult> parser_fidelity(unsigned) {
    std::vector<CheckResult> out;
    Sampler rng(0x5eed000au);
    for (SystemKind kind : builtin_kinds()) {
        const std::string coupling(coupling_name(kind));
        for (double value : {1.0, 0.7}) {
            const auto sys = SpinorSystem::builtin(kind, {{coupling, value}});
            const auto spec = SpinorSystem::custom(builtin_as_field_spec(sys));
            double worst = 0.0;
            for (int i = 0; i < 100; ++i) {
                Vec3 k;
                do k = rng.in_box(2.0);
                while (k.norm() > 2.0);
                const KVector kv = KVector::from(k);
                worst = std::max(worst, (eval_field(sys, kv).vec() - eval_field(spec, kv).vec()).norm());
            }
            char label[96];
            std::snprintf(label, sizeof label, "%s (%s=%g): builtin vs expression spec", kind_name(kind).data(),
                          coupling.c_str(), value);
            out.push_back(bound(10, label, worst, 1e-12));
        }
    }

    const std::vector<MalformedCase> bad{{"kx + * ky", 5}, {"2kx", 1}, {"(kx + ky", 8}, {"kx # 2", 3}, {"qq * kx", 0}};
    bool all_positioned = true;
    nlohmann::json seen = nlohmann::json::array();
    for (const auto& mc : bad) {
        try {
            (void)make_field_spec("bad", {}, mc.bx, "0", "0");
            all_positioned = false;
            seen.push_back({{"source", mc.bx}, {"error", nullptr}});
        } catch (const ParseError& e) {
            const bool ok = e.position() == mc.position && e.component() == "bx";
            all_positioned = all_positioned && ok;
            seen.push_back({{"source", mc.bx}, {"position", e.position()}, {"component", e.component()}});
        }
    }
    out.push_back(predicate(10, "malformed specs report component and byte offset", all_positioned, seen,
                            "ParseError at the offending byte of bx"));
    return out;
}

using SuiteFn = std::function<std::vector<CheckResult>(unsigned)>;

const std::vector<std::pair<SuiteInfo, SuiteFn>>& registry() {
    static const std::vector<std::pair<SuiteInfo, SuiteFn>> r{
        {{"flux", 1, "monopole flux quantization"}, monopole_flux},
        {{"string", 2, "Dirac-string cancellation"}, string_cancellation},
        {{"phases", 3, "planar Berry phases"}, table_phases},
        {{"flatness", 4, "delta-curvature flatness"}, delta_flatness},
        {{"oracle", 5, "curvature vs curl oracle"}, oracle_equivalence},
        {{"propagator", 6, "propagator vs gauge phase"}, propagator},
        {{"charts", 7, "chart and Hopf consistency"}, chart_consistency},
        {{"disk", 8, "gapped Rashba plane flux"}, disk_flux},
        {{"hall", 9, "spin-Hall separation"}, spin_hall},
        {{"parser", 10, "parser fidelity"}, parser_fidelity},
    };
    return r;
}

}  // namespace

bool VerifyReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

bool VerifyReport::criterion_passed(int criterion) const {
    bool any = false;
    for (const auto& c : checks) {
        if (c.criterion != criterion) continue;
        any = true;
        if (!c.passed) return false;
    }
    return any;
}

nlohmann::json VerifyReport::to_json() const {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& c : checks) {
        nlohmann::json j{{"criterion", c.criterion}, {"name", c.name},     {"passed", c.passed},
                         {"measured", c.measured},   {"expected", c.expected}};
        if (c.tolerance > 0.0) j["tolerance"] = c.tolerance;
        if (!c.detail.empty()) j["detail"] = c.detail;
        list.push_back(std::move(j));
    }
    return {{"passed", passed()}, {"checks", list}};
}

const std::vector<SuiteInfo>& verify_suites() {
    static const std::vector<SuiteInfo> infos = [] {
        std::vector<SuiteInfo> v;
        for (const auto& [info, fn] : registry()) v.push_back(info);
        return v;
    }();
    return infos;
}

VerifyReport run_verify(std::string_view suite, unsigned threads) {
    VerifyReport report;
    bool matched = false;
    for (const auto& [info, fn] : registry()) {
        if (suite != "all" && suite != info.name) continue;
        matched = true;
        try {
            for (auto& c : fn(threads)) report.checks.push_back(std::move(c));
        } catch (const Error& e) {
            CheckResult c;
            c.criterion = info.criterion;
            c.name = info.title;
            c.detail = std::string("raised: ") + e.what();
            report.checks.push_back(std::move(c));
        }
    }
    if (!matched) throw InvalidArgument("unknown suite '" + std::string(suite) + "'");
    return report;
}

}  // namespace berrytop
