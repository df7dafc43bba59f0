#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "conefix/cone.hpp"
#include "conefix/cone_io.hpp"
#include "conefix/errors.hpp"

using namespace conefix;

namespace {

ConeVector vec(std::initializer_list<double> xs)
{
    Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v[i++] = x;
    return ConeVector(make_grid(Grid::line(0.0, 1.0, v.size())), v);
}

} // namespace

TEST_CASE("axis nodes and spacing")
{
    const Axis a{-1.0, 1.0, 5};
    CHECK(a.spacing() == 0.5);
    CHECK(a.node(0) == -1.0);
    CHECK(a.node(4) == 1.0);
    CHECK(Grid::index(4).axis(0).node(3) == 4.0);
    CHECK(Grid::plane(a, Axis{0.0, 1.0, 3}).size() == 15);
}

TEST_CASE("leq is componentwise with tolerance")
{
    const auto g = make_grid(Grid::line(0.0, 1.0, 2));
    CHECK(leq(ConeVector::zeros(g), ConeVector::zeros(g), 0.0));
    CHECK(leq(ConeVector::ones(g), ConeVector::constant(g, 2.0), 0.0));
    const ConeVector a = vec({1.0, 1.0 + 5e-13});
    const ConeVector b = a.with(Eigen::Vector2d(1.0, 1.0));
    CHECK(leq(a, b, 1e-12));
    CHECK_FALSE(leq(a, b, 1e-14));
}

TEST_CASE("sup norm")
{
    const auto g = make_grid(Grid::line(0.0, 1.0, 3));
    CHECK(sup_norm(ConeVector::zeros(g)) == 0.0);
    CHECK(sup_norm(vec({-3.0, 2.0})) == 3.0);
    CHECK(sup_norm(ConeVector::ones(g)) == 1.0);
}

TEST_CASE("segment membership")
{
    const auto g = make_grid(Grid::line(0.0, 1.0, 4));
    const ConicalSegment seg(ConeVector::zeros(g), ConeVector::ones(g));
    CHECK(segment_contains(seg, ConeVector::constant(g, 0.5), 0.0));
    CHECK_FALSE(segment_contains(seg, ConeVector::constant(g, 1.5), 1e-12));
    CHECK_THROWS_AS(ConicalSegment(ConeVector::ones(g), ConeVector::zeros(g)), DomainError);
}

TEST_CASE("linear combinations")
{
    const auto g = make_grid(Grid::line(0.0, 1.0, 3));
    const ConeVector x = ConeVector::constant(g, 7.0), y = ConeVector::ones(g);
    CHECK(axpy(0.0, x, y).values() == y.values());
    CHECK(axpy(1.0, y, y).values() == ConeVector::constant(g, 2.0).values());
    CHECK(sup_norm(axpy(-1.0, x, x)) == 0.0);
    CHECK((x - y).values() == ConeVector::constant(g, 6.0).values());
    CHECK((2.0 * y).values() == scale(2.0, y).values());
}

TEST_CASE("operations on different grids are rejected")
{
    const ConeVector a = ConeVector::ones(make_grid(Grid::line(0.0, 1.0, 3)));
    const ConeVector b = ConeVector::ones(make_grid(Grid::line(0.0, 2.0, 3)));
    CHECK_THROWS_AS(a + b, GridMismatch);
    CHECK_THROWS_AS(leq(a, b, 0.0), GridMismatch);
    CHECK_THROWS_AS(ConeVector(make_grid(Grid::line(0.0, 1.0, 3)), Eigen::VectorXd::Zero(2)), DomainError);
}

TEST_CASE("cone membership allows order_tol undershoot")
{
    CHECK(in_cone(vec({0.0, -1e-11}), default_order_tol));
    CHECK_FALSE(in_cone(vec({0.0, -1e-9}), default_order_tol));
}

TEST_CASE("csv round trip is exact")
{
    const auto g = make_grid(Grid::plane(Axis{-1.0, 1.0, 3}, Axis{0.0, 0.5, 2}));
    Eigen::VectorXd v(6);
    v << 0.1, 1.0 / 3.0, 2.0, 1e-300, 0.0, 12345.678;
    const ConeVector x(g, v);
    std::stringstream ss;
    write_csv(ss, x);
    const ConeVector y = read_csv(ss);
    CHECK(y.grid() == x.grid());
    CHECK(y.values() == x.values());
}

TEST_CASE("csv reader rejects malformed input")
{
    std::stringstream missing_header("1\n2\n");
    CHECK_THROWS_AS(read_csv(missing_header), ValidationError);
    std::stringstream short_body("# grid: dim=1 axis0=0:1:3\n1\n2\n");
    CHECK_THROWS_AS(read_csv(short_body), ValidationError);
    std::stringstream junk("# grid: dim=1 axis0=0:1:2\n1\nabc\n");
    CHECK_THROWS_AS(read_csv(junk), ValidationError);
}

TEST_CASE("format_double is shortest round trip")
{
    CHECK(format_double(0.1) == "0.1");
    CHECK(parse_double(format_double(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(parse_double("+2.5") == 2.5);
    CHECK_THROWS_AS(parse_double("2.5x"), ValidationError);
}
