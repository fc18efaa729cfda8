#include "berrytop/mapgrid.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace berrytop;

namespace {

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::string csv(const MapGrid& g) {
    std::ostringstream s;
    write_map_csv(g, s);
    return s.str();
}

}  // namespace

TEST(Plane, Parse) {
    EXPECT_EQ(PlaneSpec::parse("z=0").fixed_axis, 2);
    EXPECT_EQ(PlaneSpec::parse("kx=1.5").fixed_axis, 0);
    EXPECT_DOUBLE_EQ(PlaneSpec::parse("y=-2").value, -2.0);
    EXPECT_THROW(PlaneSpec::parse("w=0"), InvalidArgument);
    EXPECT_THROW(PlaneSpec::parse("z=abc"), InvalidArgument);
    EXPECT_THROW(PlaneSpec::parse("z"), InvalidArgument);
}

TEST(Csv, TwoByTwoHasFiveLines) {
    const auto g = compute_map(SpinorSystem::builtin(SystemKind::LinearRashba), MapQuantity::Field, PlaneSpec{}, 1.0, 2);
    const std::string s = csv(g);
    const auto ls = lines(s);
    ASSERT_EQ(ls.size(), 5u);
    EXPECT_EQ(ls[0], "kx,ky,kz,vx,vy,vz,magnitude");
    EXPECT_EQ(s.find('\r'), std::string::npos);
    EXPECT_EQ(ls[1].substr(0, 6), "-1,-1,");
    EXPECT_EQ(ls[2].substr(0, 5), "-1,1,");
}

TEST(Csv, RowMajorOuterKxAndSeventeenDigits) {
    const auto g = compute_map(SpinorSystem::builtin(SystemKind::MonolayerGraphene), MapQuantity::Field, PlaneSpec{}, 1.0, 4);
    const auto& r = g.rows;
    EXPECT_DOUBLE_EQ(r[0].k.kx, -1.0);
    EXPECT_DOUBLE_EQ(r[1].k.kx, -1.0);
    EXPECT_DOUBLE_EQ(r[1].k.ky, -1.0 / 3.0);
    EXPECT_DOUBLE_EQ(r[4].k.kx, -1.0 / 3.0);
    EXPECT_EQ(format_double(1.0 / 3.0), "0.33333333333333331");
    EXPECT_EQ(std::stod(format_double(0.1)), 0.1);
}

TEST(Csv, DegeneratePointsAreNan) {
    const auto g = compute_map(SpinorSystem::builtin(SystemKind::LinearRashba), MapQuantity::Curvature, PlaneSpec{}, 1.0, 3);
    EXPECT_EQ(g.degenerate_count, 1);
    EXPECT_TRUE(g.rows[4].degenerate);
    EXPECT_EQ(lines(csv(g))[5], "0,0,0,nan,nan,nan,nan");
}

TEST(Csv, Deterministic) {
    const auto sys = *system_from_name("gapped-rashba");
    EXPECT_EQ(csv(compute_map(sys, MapQuantity::Gauge, PlaneSpec{}, 2.0, 16, 1)),
              csv(compute_map(sys, MapQuantity::Gauge, PlaneSpec{}, 2.0, 16, 4)));
}

TEST(Map, Validation) {
    const auto sys = SpinorSystem::builtin(SystemKind::LinearRashba);
    EXPECT_THROW(compute_map(sys, MapQuantity::Field, PlaneSpec{}, 1.0, 1), InvalidArgument);
    EXPECT_THROW(compute_map(sys, MapQuantity::Field, PlaneSpec{}, 0.0, 4), InvalidArgument);
    EXPECT_THROW(map_quantity_from_string("flux"), InvalidArgument);
    EXPECT_THROW(write_map_csv(MapGrid{}, std::string("/nonexistent-dir/x.csv")), InvalidArgument);
}

TEST(Map, Json) {
    const auto g = compute_map(SpinorSystem::builtin(SystemKind::LinearRashba), MapQuantity::Curvature, PlaneSpec{}, 1.0, 3);
    const auto j = map_to_json(g);
    EXPECT_EQ(j["rows"].size(), 9u);
    EXPECT_TRUE(j["rows"][4]["magnitude"].is_null());
    EXPECT_EQ(j["degenerate"], 1);
}
