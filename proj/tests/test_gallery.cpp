#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "conefix/gallery.hpp"
#include "support/generators.hpp"

using namespace conefix;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ConeVector on_index(Eigen::VectorXd v)
{
    const GridPtr g = make_grid(Grid::index(v.size()));
    return ConeVector(g, std::move(v));
}

double simpson(double lo, double hi, int n, const std::function<double(double)>& f)
{
    const double h = (hi - lo) / n;
    double s = f(lo) + f(hi);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
    return s * h / 3.0;
}

} // namespace

TEST_CASE("l-infinity operator examples")
{
    const OperatorHandle a = make_linf_operator(4);
    CHECK(a(on_index(Eigen::Vector4d::Ones())).values() == Eigen::Vector4d::Ones());
    CHECK(a(on_index(Eigen::Vector4d::Zero())).values() == Eigen::Vector4d::Zero());
    CHECK(a(on_index(Eigen::Vector4d(0.25, 0, 0, 0))).values() == Eigen::Vector4d(0.5, 0, 0, 0));
    CHECK_THROWS_AS(a(ConeVector::ones(make_grid(Grid::index(5)))), GridMismatch);
}

TEST_CASE("scalar power examples")
{
    const OperatorHandle a = make_scalar_power(0.5);
    const auto g = make_grid(Grid::point());
    CHECK(a(ConeVector::constant(g, 16.0))[0] == 4.0);
    CHECK(a(ConeVector::constant(g, 1.0))[0] == 1.0);
    CHECK(a(ConeVector::constant(g, 0.0))[0] == 0.0);
    CHECK_THROWS_AS(make_scalar_power(1.0), DomainError);
}

TEST_CASE("p-adic operator on constants")
{
    PadicSpec spec;
    const Grid g = padic_grid(spec, 12.0, 1601);
    const PadicOperator op = make_padic_operator(spec, g);
    CHECK(sup_norm(op.handle(ConeVector::zeros(op.grid))) == 0.0);
    const ConeVector one = op.handle(ConeVector::ones(op.grid));
    const Axis& a = g.axis(0);
    for (Eigen::Index i = 0; i < a.n; i += 40) {
        const double x = a.node(i);
        // int_0^12 (H(x - y) - H(x + y)) dy, H the N(0, 2) density
        const double exact = 0.5 * (std::erf(x / 2.0) - std::erf((x - 12.0) / 2.0)) -
                             0.5 * (std::erf((x + 12.0) / 2.0) - std::erf(x / 2.0));
        CHECK_THAT(one[i], WithinAbs(exact, 1e-10));
        CHECK(one[i] < 1.0);
    }
    CHECK(one[800] > 0.999); // x = 6, away from the truncation edge
    CHECK(op.mass_error <= 1e-10);
    CHECK(op.rule.budget() < 1e-9);
}

TEST_CASE("p-adic operator scales with sigma^alpha")
{
    PadicSpec spec;
    const PadicOperator op = make_padic_operator(spec, padic_grid(spec, 12.0, 401));
    for (int k = 0; k < 10; ++k) {
        const ConeVector psi = gen::vec(op.grid, 0.0, 2.0);
        const double sigma = gen::uniform(0.0, 1.0);
        const ConeVector lhs = op.handle(scale(sigma, psi));
        const ConeVector rhs = scale(std::cbrt(sigma), op.handle(psi));
        CHECK(distance(lhs, rhs) <= 1e-12 * std::max(1.0, sup_norm(rhs)));
    }
}

TEST_CASE("p-adic two-dimensional tensor operator")
{
    PadicSpec spec;
    spec.n = 2;
    spec.betas = {1.0, 0.5};
    const PadicOperator op = make_padic_operator(spec, padic_grid(spec, 10.0, 101));
    const ConeVector one = op.handle(ConeVector::ones(op.grid));
    const Axis& a = op.grid->axis(0);
    const Eigen::Index i = 30, j = 50;
    const double x = a.node(i), y = a.node(j);
    CHECK_THAT(one[op.grid->flat(i, j)],
               WithinAbs(difference_kernel_mass(1.0, x, 10.0) * difference_kernel_mass(0.5, y, 10.0), 1e-7));
    CHECK(op.kernels[0].minCoeff() >= 0.0);
    CHECK(op.kernels[1].minCoeff() >= 0.0);
}

TEST_CASE("p-adic Laplace root against independent quadrature")
{
    const double s = padic_s(1.0, 0.5);
    // int_0^inf H_1(u) e^{-s u} du
    const double q = simpson(0.0, 60.0, 60000, [s](double u) {
        return std::exp(-u * u / 4.0) / std::sqrt(4.0 * std::numbers::pi) * std::exp(-s * u);
    });
    CHECK_THAT(q, WithinAbs(0.25, 1e-10));
    CHECK_THAT(padic_laplace(1.0, 0.0), WithinAbs(0.5, 1e-15));
    CHECK_THROWS_AS(padic_s(1.0, 1.0), DomainError);
    // Large arguments use the asymptotic branch; compare with the quadrature too.
    const double big = padic_laplace(1.0, 40.0);
    const double qb = simpson(0.0, 2.0, 20000, [](double u) {
        return std::exp(-u * u / 4.0) / std::sqrt(4.0 * std::numbers::pi) * std::exp(-40.0 * u);
    });
    CHECK_THAT(big, WithinRel(qb, 1e-9));
}

TEST_CASE("Q profile limits")
{
    const double eps = 0.5, s = padic_s(1.0, eps);
    CHECK_THAT(padic_Q(1.0, eps, s, 200.0), WithinAbs(eps, 1e-12));
    // The value at 0 is the limit of the x > 0 formula.
    CHECK_THAT(padic_Q(1.0, eps, s, 0.0), WithinRel(padic_Q(1.0, eps, s, 1e-7), 1e-5));
}

TEST_CASE("p-adic theoretical sigma0 stays below the measured bracket")
{
    PadicSpec spec;
    const Grid g = padic_grid(spec, 12.0, 401);
    const PadicOperator op = make_padic_operator(spec, g);
    const double theory = padic_sigma0_theoretical(spec, 0.5, g);
    const Bracket b = verify_bracket(op.handle, ConeVector::ones(op.grid), 2);
    CHECK(theory > 0.0);
    CHECK(theory <= b.r1);
}

TEST_CASE("odd extension")
{
    PadicSpec spec;
    const auto g = make_grid(Grid::line(0.0, 4.0, 41));
    const ConeVector phi = gen::vec(g, 0.0, 1.0);
    const OddExtension e = padic_extend_odd(phi, spec);
    REQUIRE(e.f.size() == 81);
    for (Eigen::Index i = 0; i < 41; ++i) CHECK(e.f[40 + i] == -e.f[40 - i]);
    CHECK(e.f[40] == 0.0);
    const OddExtension z = padic_extend_odd(ConeVector::zeros(g), spec);
    CHECK(z.residual == 0.0);
    PadicSpec bad;
    CHECK_THROWS_AS(padic_extend_odd(ConeVector::zeros(make_grid(Grid::line(1.0, 4.0, 5))), bad), DomainError);
}

TEST_CASE("p-adic half-line residual")
{
    PadicSpec spec;
    const PadicOperator op = make_padic_operator(spec, padic_grid(spec, 12.0, 401));
    CHECK(padic_half_residual(op, ConeVector::zeros(op.grid)) == 0.0);
}

TEST_CASE("Urysohn operator on constants")
{
    UrysohnSpec spec;
    const UrysohnOperator op = make_urysohn_operator(spec, Grid::line(-8.0, 8.0, 2001));
    const ConeVector e = op.eta_image;
    const Axis& a = op.grid->axis(0);
    for (Eigen::Index i = 0; i < a.n; i += 100) {
        CHECK(e[i] >= 0.5 - 1e-12);
        CHECK(e[i] < 1.0);
        // The full line integral of the base kernel is 1.
        CHECK_THAT(e[i], WithinAbs(UrysohnSpec::amplitude(a.node(i)), 1e-9));
    }
    CHECK_THAT(e[1000], WithinAbs(0.5, 1e-9));
    CHECK(sup_norm(op.handle(ConeVector::zeros(op.grid))) == 0.0);
    CHECK(op.far_field >= 1.0 - 1e-6);
    CHECK(sup_norm(e) <= 1.0 + op.budget);
}

TEST_CASE("Urysohn residual detects a perturbation")
{
    UrysohnSpec spec;
    const UrysohnOperator op = make_urysohn_operator(spec, Grid::line(-8.0, 8.0, 2001));
    const Solution s = solve_decreasing(op.handle, ConeVector::ones(op.grid), 1, 0.5 - 1e-9);
    CHECK(urysohn_residual(op, s.x_star) <= 1e-8);
    CHECK(segment_contains(ConicalSegment(ConeVector::constant(op.grid, 0.25), ConeVector::ones(op.grid)), s.x_star,
                           1e-10));
    ConeVector bumped = s.x_star;
    Eigen::VectorXd v = bumped.values();
    v[700] += 0.01;
    CHECK(urysohn_residual(op, bumped.with(v)) >= 0.005);
}

TEST_CASE("heat closed-form bracket constants")
{
    const Grid g = Grid::plane(Axis{-8.0, 8.0, 41}, Axis{0.0, 4.0, 11});
    const HeatOperator op = make_heat_operator(HeatSpec::standard(), g);
    CHECK_THAT(op.r1, WithinAbs(1.0 / (3.0 * std::sqrt(3.0)), 1e-12));
    CHECK_THAT(op.r2, WithinAbs(3.0 * std::sqrt((std::sqrt(3.0) + 2.0) / 2.0), 1e-12));
    const ConeVector a0 = op.handle(ConeVector::zeros(op.grid));
    for (Eigen::Index i = 0; i < 41; ++i) {
        CHECK(a0[i * 11] == 0.0);
        for (Eigen::Index j = 1; j < 11; ++j) CHECK(a0[i * 11 + j] > 0.0);
    }
}

TEST_CASE("heat operator rejects data outside the declared constants")
{
    HeatSpec s = HeatSpec::standard();
    s.c0 = 1.5;
    CHECK_THROWS_AS(make_heat_operator(s, Grid::plane(Axis{-4.0, 4.0, 21}, Axis{0.0, 1.0, 5})), CertificationError);
    CHECK_THROWS_AS(make_heat_operator(HeatSpec::standard(), Grid::line(0.0, 1.0, 5)), DomainError);
}

TEST_CASE("tilde construction examples")
{
    const auto g = make_grid(Grid::index(16));
    const OperatorHandle a = make_linf_operator(16);
    const ConeVector xs = ConeVector::ones(g);
    const OperatorHandle t = make_tilde_operator(a, xs);
    CHECK(t(xs).values() == xs.values());
    for (double s : {0.0, 0.3, 0.99}) CHECK(distance(t(scale(s, xs)), scale(s, xs)) <= 1e-15);
    const ConeVector three = scale(3.0, xs);
    CHECK(distance(tilde_projection(three, xs), scale(2.0, xs)) <= 1e-15);
    // x* + A(2x*) = 2 ones, not 3 ones
    CHECK(distance(t(three), scale(2.0, xs)) <= 1e-15);
}

TEST_CASE("hat construction examples")
{
    const auto g = make_grid(Grid::index(16));
    const OperatorHandle a = make_linf_operator(16);
    const ConeVector xs = ConeVector::ones(g);
    const double lambda = 0.5;
    const OperatorHandle h = make_hat_operator(a, xs, lambda);
    const ConeVector x = scale((1.0 - lambda) / 2.0, xs);
    CHECK(distance(h(x), x) <= 1e-15);
    CHECK(distance(h(xs), xs) == 0.0);
    CHECK_THROWS_AS(h(scale(1.5, xs)), DomainError);
    // Both branches agree on |x - x*| = lambda |x*|.
    const ConeVector b = scale(1.0 - lambda, xs);
    CHECK(distance(hat_shift(b, xs, lambda), xs - b) <= 1e-12);
    CHECK(distance(hat_shift(scale(1.0 - lambda + 1e-13, xs), xs, lambda), xs - b) <= 1e-12);
}

TEST_CASE("tilde and hat intermediate points stay in the cone")
{
    const auto g = make_grid(Grid::index(8));
    const ConeVector xs = ConeVector::ones(g);
    for (int k = 0; k < 200; ++k) {
        const ConeVector x = gen::vec(g, 0.0, 4.0);
        CHECK(in_cone(tilde_projection(x, xs), 1e-14));
        const ConeVector y = gen::vec(g, 0.0, 1.0);
        CHECK(in_cone(hat_shift(y, xs, 0.5) + y, 1e-14));
    }
}
