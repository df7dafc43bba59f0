#include <cmath>

#include "conefix/cone_io.hpp"
#include "conefix/gallery.hpp"
#include "conefix/parallel.hpp"

namespace conefix {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct OffGrid {
    double theta = 0.0;   // s = t_{j-1} + theta dt
    double weight = 0.0;
    bool collapsed = false;
    Eigen::MatrixXd kernel; // empty when collapsed
    Eigen::MatrixXd lambda; // nx x (nt - 1), column j - 1 holds time t_j - tau
    Eigen::MatrixXd g;
};

struct HeatImpl {
    Eigen::Index nx = 0, nt = 0;
    std::function<double(double)> G;
    std::vector<Eigen::MatrixXd> lag; // lag[m] = kernel at tau = m dt
    Eigen::MatrixXd uniform_w;        // (j, k) weight of grid time s_k at t_j
    Eigen::MatrixXd lambda;           // nx x nt
    Eigen::MatrixXd g;                // nx x nt
    std::vector<OffGrid> off;

    Eigen::MatrixXd integrand(const Eigen::MatrixXd& v, const Eigen::MatrixXd& lam, const Eigen::MatrixXd& gg) const
    {
        return lam.cwiseProduct((v + gg).unaryExpr([this](double z) { return G(std::max(z, 0.0)); }));
    }

    Eigen::MatrixXd apply(const Eigen::MatrixXd& v) const
    {
        Eigen::MatrixXd out = Eigen::MatrixXd::Zero(nx, nt);
        if (nt < 2) return out;
        const Eigen::MatrixXd w = integrand(v, lambda, g);

        std::vector<Eigen::MatrixXd> prod(static_cast<std::size_t>(nt));
        parallel_for(static_cast<std::size_t>(nt - 1), [&](std::size_t i) {
            const Eigen::Index m = static_cast<Eigen::Index>(i) + 1;
            prod[m].noalias() = lag[m] * w.leftCols(nt - m);
        });
        for (Eigen::Index m = 1; m < nt; ++m) {
            for (Eigen::Index k = 0; k + m < nt; ++k) {
                const Eigen::Index j = k + m;
                if (j >= 2) out.col(j) += uniform_w(j, k) * prod[m].col(k);
            }
        }

        const Eigen::Index c = nt - 1;
        std::vector<Eigen::MatrixXd> part(off.size());
        parallel_for(off.size(), [&](std::size_t q) {
            const OffGrid& o = off[q];
            const Eigen::MatrixXd vq = (1.0 - o.theta) * v.leftCols(c) + o.theta * v.rightCols(c);
            const Eigen::MatrixXd wq = integrand(vq, o.lambda, o.g);
            part[q] = o.collapsed ? Eigen::MatrixXd(o.weight * wq) : Eigen::MatrixXd(o.weight * (o.kernel * wq));
        });
        for (const auto& p : part) out.rightCols(c) += p;
        return out;
    }
};

Eigen::MatrixXd to_matrix(const ConeVector& v, Eigen::Index nx, Eigen::Index nt)
{
    return Eigen::Map<const RowMat>(v.values().data(), nx, nt);
}

Eigen::VectorXd to_values(const Eigen::MatrixXd& m)
{
    RowMat r = m;
    return Eigen::Map<const Eigen::VectorXd>(r.data(), r.size());
}

} // namespace

HeatSpec HeatSpec::standard()
{
    HeatSpec s;
    s.u0 = [](double x) { return 1.0 + std::exp(-x * x); };
    s.lambda = [](double x, double t) { return std::exp(-t) * (2.0 + std::sin(x)) / 3.0; };
    s.lambda1 = [](double t) { return std::exp(-t) / 3.0; };
    s.lambda2 = [](double t) { return std::exp(-t); };
    s.G = [](double u) { return std::sqrt(u); };
    return s;
}

HeatOperator make_heat_operator(const HeatSpec& spec, const Grid& grid, int panels)
{
    if (grid.dim() != 2) throw DomainError("heat operator needs an (x, t) grid");
    const Axis& xa = grid.axis(0);
    const Axis& ta = grid.axis(1);
    if (ta.lo != 0.0 || ta.n < 2) throw DomainError("time axis must start at 0 with at least 2 nodes");
    if (xa.n < 3) throw DomainError("space axis needs at least 3 nodes");

    auto impl = std::make_shared<HeatImpl>();
    impl->nx = xa.n;
    impl->nt = ta.n;
    impl->G = spec.G;
    const Eigen::Index nx = xa.n, nt = ta.n;
    const double dt = ta.spacing();

    Eigen::VectorXd u0(nx);
    for (Eigen::Index i = 0; i < nx; ++i) u0[i] = spec.u0(xa.node(i));

    // Declared constants must agree with the data on the grid.
    const double tol = 1e-12;
    if (u0.minCoeff() < spec.c0 - tol || u0.maxCoeff() > spec.beta0 + tol)
        throw CertificationError("u0 leaves [c0, beta0] on the grid");
    for (Eigen::Index j = 1; j < nt; ++j) {
        const double t = ta.node(j);
        const double l1 = spec.lambda1(t), l2 = spec.lambda2(t);
        if (l1 / l2 < spec.delta0 - tol) throw CertificationError("lambda1 / lambda2 drops below delta0");
        for (Eigen::Index i = 0; i < nx; ++i) {
            const double l = spec.lambda(xa.node(i), t);
            if (l < l1 - tol || l > l2 + tol) throw CertificationError("lambda leaves [lambda1, lambda2]");
        }
    }

    auto g_at = [&](double t) -> Eigen::VectorXd {
        if (t <= 0.0) return u0;
        return heat_kernel_matrix(xa, t, true) * u0;
    };

    impl->lambda.resize(nx, nt);
    impl->g.resize(nx, nt);
    for (Eigen::Index j = 0; j < nt; ++j) {
        for (Eigen::Index i = 0; i < nx; ++i) impl->lambda(i, j) = spec.lambda(xa.node(i), ta.node(j));
        impl->g.col(j) = g_at(ta.node(j));
    }

    HeatOperator op;
    impl->lag.resize(static_cast<std::size_t>(nt));
    for (Eigen::Index m = 1; m < nt; ++m) {
        impl->lag[m] = heat_kernel_matrix(xa, static_cast<double>(m) * dt, true);
        const Eigen::MatrixXd raw = heat_kernel_matrix(xa, static_cast<double>(m) * dt, false);
        for (Eigen::Index i = 0; i < nx; ++i)
            if (std::abs(xa.node(i)) <= 0.5 * std::max(std::abs(xa.lo), std::abs(xa.hi)))
                op.kernel_mass_error = std::max(op.kernel_mass_error, std::abs(raw.row(i).sum() - 1.0));
    }

    impl->uniform_w = Eigen::MatrixXd::Zero(nt, nt);
    for (Eigen::Index j = 1; j < nt; ++j) {
        const HeatTimeRule rule = heat_rule(grid, j, panels);
        for (const TimeNode& nd : rule.nodes)
            if (nd.lag > 0) impl->uniform_w(j, nd.k0) = nd.weight;
    }

    // Off-grid nodes are shared by every t_j; take their layout from t_1.
    const HeatTimeRule first = heat_rule(grid, 1, panels);
    for (const TimeNode& nd : first.nodes) {
        if (nd.lag > 0) continue;
        OffGrid o;
        o.theta = nd.theta;
        o.weight = nd.weight;
        o.collapsed = nd.collapsed;
        if (!nd.collapsed) o.kernel = heat_kernel_matrix(xa, nd.tau, true);
        o.lambda.resize(nx, nt - 1);
        o.g.resize(nx, nt - 1);
        for (Eigen::Index j = 1; j < nt; ++j) {
            const double s = ta.node(j) - nd.tau;
            for (Eigen::Index i = 0; i < nx; ++i) o.lambda(i, j - 1) = spec.lambda(xa.node(i), s);
            o.g.col(j - 1) = g_at(s);
        }
        impl->off.push_back(std::move(o));
    }

    op.spec = spec;
    op.grid = make_grid(grid);
    op.g = ConeVector(op.grid, to_values(impl->g));
    op.r1 = spec.delta0 * spec.G(spec.c0) / spec.G(spec.xi + spec.beta0);
    op.r2 = (1.0 / spec.delta0) *
            std::max(1.0, spec.G(spec.G(spec.xi + spec.beta0) * spec.lambda2_l1 + spec.beta0) /
                              spec.G(spec.xi + spec.c0));
    op.handle.name = "heat";
    op.handle.profile = Profile::power(spec.gamma);
    op.handle.apply_fn = [impl, g = op.grid](const ConeVector& v) {
        if (!(v.grid() == *g)) throw GridMismatch("heat: wrong grid");
        return v.with(to_values(impl->apply(to_matrix(v, impl->nx, impl->nt))));
    };
    op.impl = impl;
    return op;
}

double heat_mild_residual(const HeatOperator& op, const ConeVector& u)
{
    const ConeVector v = u - op.g;
    const ConeVector av = op.handle(v);
    const Eigen::Index nx = op.grid->axis(0).n, nt = op.grid->axis(1).n;
    double worst = 0.0;
    for (Eigen::Index i = 1; i + 1 < nx; ++i)
        for (Eigen::Index j = 0; j < nt; ++j) {
            const Eigen::Index f = i * nt + j;
            worst = std::max(worst, std::abs(v[f] - av[f]));
        }
    return worst;
}

} // namespace conefix
