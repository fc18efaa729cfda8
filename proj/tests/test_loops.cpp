#include "berrytop/loops.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace berrytop;

namespace {

constexpr double kPi = std::numbers::pi;

SpinorSystem builtin(SystemKind k, Branch b = Branch::Aligned) { return SpinorSystem::builtin(k, {}, b); }
SpinorSystem gapped(Branch b = Branch::Aligned) { return *system_from_name("gapped-rashba", {}, b); }

double phase(const SpinorSystem& s, const LoopSpec& l, Branch b = Branch::Aligned,
             ChartPolicy p = ChartPolicy::Auto) {
    return berry_phase_loop(s, l, b, p).phase;
}

CurvatureField monopole() {
    return [](const Vec3& b) { return monopole_curvature_B(BVector::from(b), Branch::Aligned).components; };
}

BPath cone(double theta) {
    return [theta](double s) {
        const double p = 2 * kPi * s;
        return BVector{std::sin(theta) * std::cos(p), std::sin(theta) * std::sin(p), std::cos(theta)};
    };
}

}  // namespace

TEST(BerryPhase, PlanarUnitCircles) {
    EXPECT_NEAR(phase(builtin(SystemKind::LinearRashba), LoopSpec::circle(1, 4096)), kPi, 1e-6);
    EXPECT_NEAR(phase(builtin(SystemKind::BilayerGraphene), LoopSpec::circle(1, 4096)), 2 * kPi, 1e-6);
    EXPECT_NEAR(phase(builtin(SystemKind::LinearDresselhaus), LoopSpec::circle(1, 4096)), -kPi, 1e-6);
    EXPECT_NEAR(phase(builtin(SystemKind::MonolayerGraphene), LoopSpec::circle(1, 4096)), kPi, 1e-6);
}

TEST(BerryPhase, LoopAwayFromOriginEnclosesNothing) {
    EXPECT_NEAR(phase(builtin(SystemKind::LinearRashba), LoopSpec::circle(0.5, 4096, {2, 0, 0})), 0.0, 1e-8);
}

TEST(BerryPhase, QuantizedForAnyRadiusAndMultipleTurns) {
    const auto r = builtin(SystemKind::LinearRashba);
    for (double radius : {0.01, 0.3, 7.0})
        EXPECT_NEAR(phase(r, LoopSpec::circle(radius, 512)), kPi, 1e-9);
    for (int n = 1; n <= 4; ++n)
        EXPECT_NEAR(phase(r, LoopSpec::circle(1, 512, Vec3::Zero(), n)), n * kPi, 1e-9);
}

TEST(BerryPhase, OrientationAndBranchReverseSign) {
    const auto g = gapped();
    const double fwd = phase(g, LoopSpec::circle(1.5, 2048));
    EXPECT_NEAR(phase(g, LoopSpec::circle(1.5, 2048, Vec3::Zero(), 1, -1)), -fwd, 1e-12);
    EXPECT_NEAR(phase(g, LoopSpec::circle(1.5, 2048), Branch::AntiAligned), -fwd, 1e-12);
}

TEST(BerryPhase, PolylineSquareConverges) {
    const auto r = builtin(SystemKind::LinearRashba);
    const auto sq = LoopSpec::polyline({{1, 1, 0}, {-1, 1, 0}, {-1, -1, 0}, {1, -1, 0}, {1, 1, 0}}, 40000);
    EXPECT_NEAR(phase(r, sq), kPi, 1e-6);
}

TEST(BerryPhase, ChartPoliciesAgreeModTwoPi) {
    const auto id = *system_from_name("identity");
    // circle at height 0.5 above the plane: b = k stays in the northern hemisphere
    const auto loop = LoopSpec::circle(1.0, 4096, {0, 0, 0.5});
    const double a = phase(id, loop, Branch::Aligned, ChartPolicy::Auto);
    const double n = phase(id, loop, Branch::Aligned, ChartPolicy::North);
    const double s = phase(id, loop, Branch::Aligned, ChartPolicy::South);
    const double cos_t = 0.5 / std::sqrt(1.25);
    EXPECT_NEAR(n, kPi * (1 - cos_t), 1e-9);
    EXPECT_NEAR(a, n, 1e-9);
    EXPECT_NEAR(std::remainder(s - n, 2 * kPi), 0.0, 1e-9);
}

TEST(BerryPhase, AutoChartCrossingEquator) {
    // tilted loop that crosses bz = 0 so auto switches charts mid-loop
    const auto id = *system_from_name("identity");
    auto tilted = LoopSpec::circle(1.0, 4096, {0.3, 0, 0.1});
    std::get<CircleLoop>(tilted.shape).normal = Axis::X;
    const PhaseResult r = berry_phase_loop(id, tilted, Branch::Aligned, ChartPolicy::Auto);
    EXPECT_GT(r.chart_switches, 0);
    const double north = phase(id, tilted, Branch::Aligned, ChartPolicy::North);
    // charts differ only by discretization error
    EXPECT_NEAR(std::remainder(r.phase - north, 2 * kPi), 0.0, 1e-6);
}

TEST(BerryPhase, DegenerateLoopThrows) {
    EXPECT_THROW(phase(builtin(SystemKind::LinearRashba), LoopSpec::circle(1, 64, {1, 0, 0})), DegenerateField);
}

TEST(LoopSpec, Validation) {
    EXPECT_THROW(LoopSpec::circle(-1, 64).validate(), InvalidArgument);
    EXPECT_THROW(LoopSpec::circle(1, 2).validate(), InvalidArgument);
    EXPECT_THROW(LoopSpec::polyline({{0, 0, 0}, {1, 0, 0}}, 64).validate(), InvalidArgument);
}

TEST(SphereFlux, Quantization) {
    EXPECT_NEAR(flux_sphere(monopole(), {1, 256, 256}), 4 * kPi, 1e-4);
    EXPECT_NEAR(flux_sphere(monopole(), {2, 256, 256}), flux_sphere(monopole(), {1, 256, 256}), 1e-6);
}

TEST(SphereFlux, MidpointConvergenceOrder) {
    double prev = std::abs(flux_sphere(monopole(), {1, 32, 32}) - 4 * kPi);
    for (int n : {64, 128, 256}) {
        const double err = std::abs(flux_sphere(monopole(), {1, n, n}) - 4 * kPi);
        EXPECT_GE(prev / err, 3.9) << n;
        prev = err;
    }
}

TEST(SphereFlux, OffCenterMonopoleOutsideGivesZero) {
    const CurvatureField shifted = [](const Vec3& b) {
        const Vec3 d = b - Vec3(3, 0, 0);
        return Vec3(d / std::pow(d.norm(), 3));
    };
    EXPECT_NEAR(flux_sphere(shifted, {1, 256, 256}), 0.0, 1e-5);
    EXPECT_LT(std::abs(flux_sphere(shifted, {1, 512, 512})), std::abs(flux_sphere(shifted, {1, 256, 256})));
}

TEST(SphereFlux, RegularizedStringBound) {
    const RegularizationParam p(0.01);
    const double f = flux_sphere([p](const Vec3& b) { return regularized_string_field(BVector::from(b), p).components; },
                                 {1, 1024, 1024});
    EXPECT_LT(std::abs(f), 0.15);
}

TEST(SphereFlux, NonFiniteSampleThrows) {
    EXPECT_THROW(flux_sphere([](const Vec3&) { return Vec3(NAN, 0, 0); }, {1, 16, 16}), Error);
    EXPECT_THROW(flux_sphere(monopole(), {1, 8, 8}), InvalidArgument);
}

TEST(DiskFlux, GappedRashba) {
    EXPECT_NEAR(flux_disk(gapped(), 50, Branch::Aligned, 40000, 16) / (2 * kPi), 1.0, 1e-2);
    EXPECT_NEAR(flux_disk(gapped(), 50, Branch::AntiAligned, 40000, 16) / (2 * kPi), -1.0, 1e-2);
    const double r2 = flux_disk(gapped(), 2, Branch::Aligned, 4000, 16);
    EXPECT_NEAR(r2, 2 * kPi * (1 - 0.5 / std::sqrt(4.25)), 1e-6);
}

TEST(DiskFlux, StokesConsistency) {
    for (double r : {0.5, 2.0, 4.0}) {
        const double disk = flux_disk(gapped(), r, Branch::Aligned, 4000, 16);
        EXPECT_NEAR(phase(gapped(), LoopSpec::circle(r, 4096)), 0.5 * disk, 1e-4) << r;
    }
}

TEST(DiskFlux, UngappedRashbaIsFlat) {
    EXPECT_LT(std::abs(flux_disk(builtin(SystemKind::LinearRashba), 1.0, Branch::Aligned, 2000, 16)), 1e-8);
}

TEST(Winding, Examples) {
    EXPECT_EQ(winding_number(builtin(SystemKind::LinearRashba), LoopSpec::circle(1, 256)), 1);
    EXPECT_EQ(winding_number(builtin(SystemKind::LinearDresselhaus), LoopSpec::circle(1, 256)), -1);
    EXPECT_EQ(winding_number(builtin(SystemKind::BilayerGraphene), LoopSpec::circle(1, 256)), 2);
    EXPECT_EQ(winding_number(builtin(SystemKind::MonolayerGraphene), LoopSpec::circle(1, 256, {3, 0, 0})), 0);
    EXPECT_THROW(winding_number(gapped(), LoopSpec::circle(1, 256)), NonPlanarField);
}

TEST(WindingVsPhase, PlanarPhaseIsPiTimesWinding) {
    for (SystemKind k : {SystemKind::LinearRashba, SystemKind::LinearDresselhaus, SystemKind::MonolayerGraphene,
                         SystemKind::BilayerGraphene}) {
        const auto loop = LoopSpec::circle(0.8, 1024);
        EXPECT_NEAR(phase(builtin(k), loop), kPi * winding_number(builtin(k), loop), 1e-9);
    }
}

TEST(Propagator, ConeClosedForm) {
    EXPECT_NEAR(std::abs(adiabatic_phase_oracle(cone(kPi / 2), 1e4, 100000).phase), kPi, 1e-3);
    EXPECT_NEAR(std::abs(adiabatic_phase_oracle(cone(0.1), 1e4, 100000).phase), kPi * (1 - std::cos(0.1)), 1e-4);
    EXPECT_NEAR(adiabatic_phase_oracle(cone(0.0), 1e4, 1000).phase, 0.0, 1e-12);
}

TEST(Propagator, AgreesWithGaugeLoopOnRashbaCircle) {
    const auto r = builtin(SystemKind::LinearRashba);
    const BPath path = [&](double s) { return eval_field(r, {std::cos(2 * kPi * s), std::sin(2 * kPi * s), 0}); };
    EXPECT_NEAR(adiabatic_phase_oracle(path, 1e4, 1 << 20).phase, phase(r, LoopSpec::circle(1, 4096)), 2e-3);
}

TEST(Propagator, AntiAlignedBranchNegates) {
    const double p = adiabatic_phase_oracle(cone(kPi / 3), 1e4, 200000, Branch::Aligned).phase;
    const double m = adiabatic_phase_oracle(cone(kPi / 3), 1e4, 200000, Branch::AntiAligned).phase;
    EXPECT_NEAR(p, kPi * (1 - std::cos(kPi / 3)), 1e-3);
    EXPECT_NEAR(std::remainder(p + m, 2 * kPi), 0.0, 2e-3);
}
