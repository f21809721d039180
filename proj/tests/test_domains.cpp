#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include <rieszlab/domains.hpp>

using namespace rieszlab;

namespace {

constexpr double kPi = std::numbers::pi;

Domain l_shape() { return Domain::polygon({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}); }

// crossing-number reference for points away from edges
bool ray_cast(const std::vector<Point2>& v, double x, double y) {
    bool in = false;
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++)
        if ((v[i].y > y) != (v[j].y > y) && x < (v[j].x - v[i].x) * (y - v[i].y) / (v[j].y - v[i].y) + v[i].x)
            in = !in;
    return in;
}

}  // namespace

TEST(Measures, ClosedForms) {
    const auto sq = Domain::rectangle(1, 1);
    EXPECT_DOUBLE_EQ(sq.volume(), 1.0);
    EXPECT_DOUBLE_EQ(sq.boundary_measure(), 4.0);
    const auto disk = Domain::disk(1);
    EXPECT_NEAR(disk.volume(), kPi, 1e-15);
    EXPECT_NEAR(disk.boundary_measure(), 2 * kPi, 1e-15);
    const auto L = l_shape();
    EXPECT_NEAR(L.volume(), 3.0, 1e-15);
    EXPECT_NEAR(L.boundary_measure(), 8.0, 1e-15);
    const auto box = Domain::box(1, 2, 3);
    EXPECT_DOUBLE_EQ(box.volume(), 6.0);
    EXPECT_DOUBLE_EQ(box.boundary_measure(), 22.0);
    const auto iv = Domain::interval(2.5);
    EXPECT_DOUBLE_EQ(iv.volume(), 2.5);
    EXPECT_DOUBLE_EQ(iv.boundary_measure(), 2.0);
    EXPECT_EQ(iv.dim(), 1);
    EXPECT_EQ(box.dim(), 3);
}

TEST(Measures, ClockwiseInputIsReoriented) {
    const auto cw = Domain::polygon({{0, 2}, {1, 2}, {1, 1}, {2, 1}, {2, 0}, {0, 0}});
    EXPECT_NEAR(cw.volume(), 3.0, 1e-15);
    const auto& v = cw.vertices();
    double area2 = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& a = v[i];
        const auto& b = v[(i + 1) % v.size()];
        area2 += a.x * b.y - b.x * a.y;
    }
    EXPECT_GT(area2, 0.0);
}

TEST(Construction, DegenerateGeometryRejected) {
    EXPECT_THROW(Domain::rectangle(0, 1), GeometryError);
    EXPECT_THROW(Domain::disk(-1), GeometryError);
    EXPECT_THROW(Domain::interval(std::nan("")), GeometryError);
    EXPECT_THROW(Domain::polygon({{0, 0}, {1, 0}}), GeometryError);
    EXPECT_THROW(Domain::polygon({{0, 0}, {1, 0}, {2, 0}}), GeometryError);              // zero area
    EXPECT_THROW(Domain::polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), GeometryError);      // bow tie
    EXPECT_THROW(Domain::polygon({{0, 0}, {1, 0}, {1, 0}, {0, 1}}), GeometryError);      // repeated vertex
}

TEST(Contains, Examples) {
    EXPECT_TRUE(Domain::rectangle(1, 1).contains(0.5, 0.5));
    // the disk is centred at (R, R) so it sits in the positive quadrant
    const auto disk = Domain::disk(1);
    EXPECT_TRUE(disk.contains(1.0, 1.0));
    EXPECT_FALSE(disk.contains(2.1, 1.0));
    EXPECT_FALSE(l_shape().contains(1.5, 1.5));
    EXPECT_TRUE(l_shape().contains(0.5, 1.5));
}

TEST(Contains, BoundaryCountsAsInside) {
    EXPECT_TRUE(Domain::rectangle(1, 1).contains(1.0, 0.3));
    EXPECT_TRUE(Domain::rectangle(1, 1).contains(0.0, 0.0));
    EXPECT_TRUE(Domain::disk(1).contains(2.0, 1.0));
    EXPECT_TRUE(l_shape().contains(1.5, 1.0));
    EXPECT_TRUE(l_shape().contains(1.0, 1.5));
    EXPECT_TRUE(l_shape().contains(1.0, 1.0));
    EXPECT_TRUE(Domain::interval(1).contains(1.0));
}

TEST(Contains, PolygonAgainstRayCasting) {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-0.5, 2.5);
    const auto L = l_shape();
    for (int i = 0; i < 2000; ++i) {
        const double x = u(rng), y = u(rng);
        EXPECT_EQ(L.contains(x, y), ray_cast(L.vertices(), x, y)) << x << " " << y;
    }
}

TEST(Contains, NeverOutsideBoundingBox) {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-3.0, 6.0);
    for (const auto& dom : {Domain::rectangle(2, 1), Domain::disk(1.3), l_shape(), Domain::box(1, 1, 2)}) {
        const auto& bb = dom.bounding_box();
        for (int i = 0; i < 3000; ++i) {
            const std::array<double, 3> p{u(rng), u(rng), dom.dim() == 3 ? u(rng) : 0.0};
            if (!dom.contains(p)) continue;
            for (int a = 0; a < dom.dim(); ++a) {
                EXPECT_GE(p[a], bb.lo[a]);
                EXPECT_LE(p[a], bb.hi[a]);
            }
        }
    }
}

TEST(Scaling, VolumeAndBoundary) {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> us(0.2, 5.0);
    for (const auto& dom : {Domain::interval(1.5), Domain::rectangle(2, 1), Domain::disk(1.3), l_shape(),
                            Domain::box(1, 2, 0.5)}) {
        const double s = us(rng);
        const auto sc = dom.scaled(s);
        const int d = dom.dim();
        EXPECT_NEAR(sc.volume(), std::pow(s, d) * dom.volume(), 1e-12 * sc.volume());
        EXPECT_NEAR(sc.boundary_measure(), std::pow(s, d - 1) * dom.boundary_measure(), 1e-12 * sc.boundary_measure());
    }
}

TEST(Parse, SpecStrings) {
    EXPECT_EQ(parse_domain("rect:1x1").kind(), DomainKind::rectangle);
    EXPECT_DOUBLE_EQ(parse_domain("rect:2x0.5").volume(), 1.0);
    EXPECT_EQ(parse_domain("interval:3").dim(), 1);
    EXPECT_NEAR(parse_domain("disk:2").volume(), 4 * kPi, 1e-14);
    EXPECT_DOUBLE_EQ(parse_domain("box:1x2x3").volume(), 6.0);
    EXPECT_NEAR(parse_domain("poly:0,0;2,0;2,1;1,1;1,2;0,2").volume(), 3.0, 1e-15);
    for (const char* bad : {"hexagon:1", "rect:1", "rect:1xa", "disk:", "poly:0,0;1,0", "rect:-1x1", "nocolon"})
        EXPECT_THROW(parse_domain(bad), GeometryError) << bad;
}

TEST(Parse, SpecRoundTrip) {
    for (const char* s : {"interval:1.5", "rect:1x2", "box:1x1x2", "disk:0.75", "poly:0,0;2,0;2,1;1,1;1,2;0,2"}) {
        const auto d = parse_domain(s);
        const auto e = parse_domain(d.spec());
        EXPECT_EQ(d.spec(), e.spec());
        EXPECT_DOUBLE_EQ(d.volume(), e.volume());
    }
}

TEST(Diameter, Values) {
    EXPECT_NEAR(Domain::rectangle(3, 4).diameter(), 5.0, 1e-15);
    EXPECT_NEAR(Domain::disk(1).diameter(), 2.0, 1e-15);
    EXPECT_NEAR(l_shape().diameter(), std::sqrt(8.0), 1e-15);
}
