#include "conefix/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace conefix {

Eigen::VectorXd composite_weights(const Axis& axis)
{
    const Eigen::Index n = axis.n;
    if (n == 1) return Eigen::VectorXd::Zero(1);
    const double h = axis.spacing();
    Eigen::VectorXd w(n);
    if (n % 2 == 0) {
        w.setConstant(h);
        w[0] = w[n - 1] = 0.5 * h;
        return w;
    }
    for (Eigen::Index i = 0; i < n; ++i) w[i] = (i % 2 == 1 ? 4.0 : 2.0) * h / 3.0;
    w[0] = w[n - 1] = h / 3.0;
    return w;
}

QuadratureRule make_rule(const Grid& grid, double tail_bound, double rule_error)
{
    QuadratureRule r;
    for (int k = 0; k < grid.dim(); ++k) {
        r.weights.push_back(composite_weights(grid.axis(k)));
        r.radius.push_back(std::max(std::abs(grid.axis(k).lo), std::abs(grid.axis(k).hi)));
    }
    r.tail_bound = tail_bound;
    r.rule_error = rule_error;
    return r;
}

double gauss_kernel(double u, double beta)
{
    return std::exp(-u * u / (4.0 * beta)) / std::sqrt(4.0 * std::numbers::pi * beta);
}

double gaussian_tail(double beta, double r)
{
    return 0.5 * std::erfc(r / (2.0 * std::sqrt(beta)));
}

double gaussian_tail_radius(double beta, double tol)
{
    if (!(beta > 0.0)) throw DomainError("beta must be positive");
    if (!(tol > 0.0 && tol < 1.0)) throw DomainError("tail tolerance must lie in (0,1)");
    for (int m = 0;; ++m) {
        const double r = 0.5 * m;
        if (gaussian_tail(beta, r) <= tol) return r;
    }
}

double gaussian_simpson_error(double beta, const Axis& axis)
{
    // H_beta is the normal density with variance 2 beta; |f''''| <= 3 / (s^5 sqrt(2 pi)).
    const double s = std::sqrt(2.0 * beta);
    const double d4 = 3.0 / (std::pow(s, 5) * std::sqrt(2.0 * std::numbers::pi));
    const double h = axis.spacing();
    if (axis.n % 2 == 0) {
        // trapezoid: (b - a) h^2 / 12 |f''|, |f''| <= 1 / (s^3 sqrt(2 pi))
        const double d2 = 1.0 / (std::pow(s, 3) * std::sqrt(2.0 * std::numbers::pi));
        return (axis.hi - axis.lo) * h * h / 12.0 * d2;
    }
    return (axis.hi - axis.lo) * std::pow(h, 4) / 180.0 * d4;
}

Eigen::MatrixXd difference_kernel_matrix(double beta, const Axis& axis)
{
    if (!(axis.lo == 0.0)) throw DomainError("difference kernel needs a half-line axis starting at 0");
    const Eigen::VectorXd w = composite_weights(axis);
    const Eigen::Index n = axis.n;
    Eigen::MatrixXd k(n, n);
    for (Eigen::Index l = 0; l < n; ++l) {
        const double y = axis.node(l);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double x = axis.node(i);
            k(i, l) = w[l] * (gauss_kernel(x - y, beta) - gauss_kernel(x + y, beta));
        }
    }
    return k;
}

double difference_kernel_mass(double beta, double x, double r)
{
    const double s = 2.0 * std::sqrt(beta);
    return 0.5 * (std::erf((r - x) / s) - std::erf((r + x) / s)) + std::erf(x / s);
}

ConeVector apply_difference_kernel(double beta, const ConeVector& f, const Grid& grid)
{
    if (!(f.grid() == grid) || grid.dim() != 1) throw GridMismatch("apply_difference_kernel: grid mismatch");
    return f.with(difference_kernel_matrix(beta, grid.axis(0)) * f.values());
}

Eigen::MatrixXd heat_kernel_matrix(const Axis& axis, double tau, bool normalize)
{
    if (!(tau > 0.0)) throw DomainError("heat kernel time must be positive");
    const Eigen::VectorXd w = composite_weights(axis);
    const Eigen::Index n = axis.n;
    Eigen::MatrixXd k(n, n);
    for (Eigen::Index l = 0; l < n; ++l)
        for (Eigen::Index i = 0; i < n; ++i) k(i, l) = w[l] * gauss_kernel(axis.node(i) - axis.node(l), tau);
    if (normalize) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double s = k.row(i).sum();
            if (!(s > 0.0)) throw CertificationError("heat kernel row has no mass");
            k.row(i) /= s;
        }
    }
    return k;
}

std::vector<double> heat_graded_taus(double dt, int panels)
{
    if (panels < 2) throw DomainError("heat rule needs at least 2 panels");
    const double g = 1.0 / std::sqrt(3.0);
    std::vector<double> taus;
    for (int m = 0; m + 1 < panels; ++m) {
        const double b = dt / std::ldexp(1.0, m);
        const double a = 0.5 * b;
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        taus.push_back(mid + half * g);
        taus.push_back(mid - half * g);
    }
    return taus;
}

HeatTimeRule heat_rule(const Grid& grid, Eigen::Index t_index, int panels)
{
    if (grid.dim() != 2) throw DomainError("heat rule needs an (x, t) grid");
    const Axis& ta = grid.axis(1);
    if (t_index < 0 || t_index >= ta.n) throw DomainError("time index out of range");
    if (ta.lo != 0.0) throw DomainError("time axis must start at 0");
    HeatTimeRule rule;
    if (t_index == 0) return rule;

    const double dt = ta.spacing();
    const Eigen::Index j = t_index;

    if (j >= 2) {
        const Axis sub{0.0, static_cast<double>(j - 1) * dt, j};
        const Eigen::VectorXd w = composite_weights(sub);
        for (Eigen::Index k = 0; k < j; ++k) {
            TimeNode nd;
            nd.tau = static_cast<double>(j - k) * dt;
            nd.weight = w[k];
            nd.k0 = k;
            nd.theta = 0.0;
            nd.lag = static_cast<int>(j - k);
            rule.nodes.push_back(nd);
        }
    }

    const std::vector<double> taus = heat_graded_taus(dt, panels);
    for (std::size_t q = 0; q < taus.size(); ++q) {
        const int m = static_cast<int>(q / 2);
        const double b = dt / std::ldexp(1.0, m);
        TimeNode nd;
        nd.tau = taus[q];
        nd.weight = 0.25 * b; // half the panel width [b/2, b]
        nd.k0 = j - 1;
        nd.theta = 1.0 - taus[q] / dt;
        nd.panel = static_cast<int>(q);
        rule.nodes.push_back(nd);
    }

    const double h = dt / std::ldexp(1.0, panels - 1);
    TimeNode last;
    last.tau = 0.5 * h;
    last.weight = h;
    last.k0 = j - 1;
    last.theta = 1.0 - 0.5 * h / dt;
    last.collapsed = true;
    rule.nodes.push_back(last);
    rule.final_panel = h;
    return rule;
}

} // namespace conefix
