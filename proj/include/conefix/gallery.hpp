#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "conefix/engine.hpp"
#include "conefix/quadrature.hpp"

namespace conefix {

// y_n = min(n^{1/4} sqrt(x_n), 1) on the first N coordinates of l-infinity.
OperatorHandle make_linf_operator(Eigen::Index N);

// x -> x^alpha on a one-node grid.
OperatorHandle make_scalar_power(double alpha);

// Fractional powers are taken of max(x, 0); the cone allows -order_tol noise.
Eigen::VectorXd cone_pow(const Eigen::VectorXd& x, double alpha);

// ---------------------------------------------------------------------------
// p-adic string: (A psi)(t) = int_0^R (H(t - tau) - H(t + tau)) psi^alpha(tau) dtau,
// tensorised over n <= 2 half-line axes.

struct PadicSpec {
    int n = 1;
    int p = 3;
    std::vector<double> betas{1.0};
    double gamma = 0.0; // declared profile exponent, 0 selects alpha

    double alpha() const { return 1.0 / static_cast<double>(p); }
    void validate() const;
};

Grid padic_grid(const PadicSpec& spec, double radius, Eigen::Index nodes);

struct PadicOperator {
    OperatorHandle handle;
    PadicSpec spec;
    GridPtr grid;
    std::vector<Eigen::MatrixXd> kernels; // one per axis
    QuadratureRule rule;
    double mass_error = 0.0; // worst |rule - closed form| of the kernel applied to 1
};

PadicOperator make_padic_operator(const PadicSpec& spec, const Grid& grid);

// int_0^inf H_beta(u) e^{-s u} du = (1/2) e^{beta s^2} erfc(s sqrt(beta)).
double padic_laplace(double beta, double s);
// Root s of padic_laplace(beta, s) = eps / 2.
double padic_s(double beta, double eps);
// eps (1 - e^{-s x}) / erf(x / (2 sqrt(beta))), with the x -> 0 limit at x = 0.
double padic_Q(double beta, double eps, double s, double x);
// eps^{alpha n} prod_j min_grid Q_j.
double padic_sigma0_theoretical(const PadicSpec& spec, double eps, const Grid& grid);

// Odd reflection of phi = psi^alpha onto [-R, R]^n with the full-line residual
// of  f^p = H * f  attached.
struct OddExtension {
    ConeVector f;
    double residual = 0.0;
};

OddExtension padic_extend_odd(const ConeVector& phi_half, const PadicSpec& spec);
double padic_full_residual(const ConeVector& f, const PadicSpec& spec);
// phi^p - K phi on the half grid, interior nodes.
double padic_half_residual(const PadicOperator& op, const ConeVector& phi);

// ---------------------------------------------------------------------------
// Urysohn: (A f)(x) = int c(x) k(x - t) eta^{1 - alpha} f(t)^alpha dt with
// c(x) = 1 - 1 / (2 (1 + x^2)) and k(u) = exp(-u^2) / sqrt(pi). Beyond the grid
// f is continued by its boundary values, whose Gaussian tails are added in closed form.

struct UrysohnSpec {
    double eta = 1.0;
    double alpha = 0.5;

    static double amplitude(double x);
    static double base_kernel(double u);
    void validate() const;
};

struct UrysohnOperator {
    OperatorHandle handle;
    UrysohnSpec spec;
    GridPtr grid;
    Eigen::MatrixXd kernel;   // c(x_i) w_l k(x_i - t_l)
    Eigen::VectorXd tail_lo;  // c(x_i) int_{-inf}^{lo} k(x_i - t) dt
    Eigen::VectorXd tail_hi;
    ConeVector eta_image;     // int U(x, t, eta) dt on the grid
    double far_field = 0.0;   // same integral at |x| = 1e4
    double budget = 0.0;
};

UrysohnOperator make_urysohn_operator(const UrysohnSpec& spec, const Grid& grid);
double urysohn_residual(const UrysohnOperator& op, const ConeVector& f);

// ---------------------------------------------------------------------------
// Semilinear heat problem, mild form on an (x, t) grid:
//   (A v)(x, t) = int_0^t int U(x, y, t - s) lambda(y, s) G(v + g)(y, s) dy ds,
//   g(x, t) = int U(x, y, t) u0(y) dy.

struct HeatSpec {
    std::function<double(double)> u0;
    std::function<double(double, double)> lambda;
    std::function<double(double)> lambda1;
    std::function<double(double)> lambda2;
    std::function<double(double)> G;
    double xi = 1.0;         // v0
    double c0 = 1.0;         // inf u0
    double beta0 = 2.0;      // sup u0
    double delta0 = 1.0 / 3; // inf lambda1 / lambda2
    double lambda2_l1 = 1.0; // |lambda2|_{L1(0, inf)}
    double gamma = 0.5;      // profile exponent matching G

    // u0 = 1 + e^{-x^2}, lambda = e^{-t} (2 + sin x) / 3, G = sqrt.
    static HeatSpec standard();
};

struct HeatOperator {
    OperatorHandle handle;
    HeatSpec spec;
    GridPtr grid;
    ConeVector g;
    double r1 = 0.0;
    double r2 = 0.0;
    double kernel_mass_error = 0.0; // worst deviation of the unnormalised kernel mass from 1, interior rows
    std::shared_ptr<const void> impl;
};

HeatOperator make_heat_operator(const HeatSpec& spec, const Grid& grid, int panels = 8);

// |u - g - A(u - g)| over interior nodes.
double heat_mild_residual(const HeatOperator& op, const ConeVector& u);

// ---------------------------------------------------------------------------
// Counterexample constructions over an operator with fixed point x*.

// x* when |x - x*| < |x*|, else x + (|x*| / |x - x*|)(x* - x).
ConeVector tilde_projection(const ConeVector& x, const ConeVector& x_star);
// x* - x when |x - x*| > lambda |x*|, else (|x - x*| / (lambda |x*|))(x* - x).
ConeVector hat_shift(const ConeVector& x, const ConeVector& x_star, double lambda);

// x + A(pi(x)) - pi(x)
OperatorHandle make_tilde_operator(const OperatorHandle& A, const ConeVector& x_star);
// A(P(x) + x) - P(x), defined on <0, x*>
OperatorHandle make_hat_operator(const OperatorHandle& A, const ConeVector& x_star, double lambda);

} // namespace conefix
