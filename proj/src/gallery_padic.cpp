#include <cmath>
#include <limits>
#include <numbers>

#include "conefix/cone_io.hpp"
#include "conefix/gallery.hpp"

namespace conefix {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// e^{x^2} erfc(x) for x >= 0.
double erfcx(double x)
{
    if (x < 25.0) return std::exp(x * x) * std::erfc(x);
    const double z = 1.0 / (2.0 * x * x);
    return (1.0 - z + 3.0 * z * z - 15.0 * z * z * z) / (x * std::sqrt(std::numbers::pi));
}

// Tensor-product application of per-axis matrices to a row-major grid function.
Eigen::VectorXd apply_tensor(const std::vector<Eigen::MatrixXd>& k, const Grid& grid, const Eigen::VectorXd& f)
{
    if (grid.dim() == 1) return k[0] * f;
    const Eigen::Index n0 = grid.axis(0).n, n1 = grid.axis(1).n;
    Eigen::Map<const RowMat> m(f.data(), n0, n1);
    RowMat out = k[0] * m * k[1].transpose();
    return Eigen::Map<const Eigen::VectorXd>(out.data(), out.size());
}

bool interior(const Grid& g, Eigen::Index flat)
{
    if (g.dim() == 1) return flat > 0 && flat + 1 < g.axis(0).n;
    const Eigen::Index n1 = g.axis(1).n;
    const Eigen::Index i = flat / n1, j = flat % n1;
    return i > 0 && i + 1 < g.axis(0).n && j > 0 && j + 1 < n1;
}

} // namespace

void PadicSpec::validate() const
{
    if (n != 1 && n != 2) throw DomainError("p-adic dimension must be 1 or 2");
    if (p < 3 || p % 2 == 0) throw DomainError("p must be an odd integer >= 3");
    if (static_cast<int>(betas.size()) != n) throw DomainError("need one beta per axis");
    for (double b : betas)
        if (!(b > 0.0)) throw DomainError("betas must be positive");
    if (gamma != 0.0 && !(gamma >= alpha() && gamma < 1.0)) throw DomainError("gamma must lie in [alpha, 1)");
}

Grid padic_grid(const PadicSpec& spec, double radius, Eigen::Index nodes)
{
    spec.validate();
    const Axis a{0.0, radius, nodes};
    return spec.n == 1 ? Grid({a}) : Grid::plane(a, a);
}

PadicOperator make_padic_operator(const PadicSpec& spec, const Grid& grid)
{
    spec.validate();
    if (grid.dim() != spec.n) throw DomainError("grid dimension does not match p-adic dimension");

    PadicOperator op;
    op.spec = spec;
    op.grid = make_grid(grid);
    double tail = 0.0, simpson = 0.0;
    for (int k = 0; k < spec.n; ++k) {
        const Axis& a = grid.axis(k);
        const double beta = spec.betas[k];
        op.kernels.push_back(difference_kernel_matrix(beta, a));
        const Eigen::VectorXd mass = op.kernels.back().rowwise().sum();
        for (Eigen::Index i = 0; i < a.n; ++i)
            op.mass_error = std::max(op.mass_error, std::abs(mass[i] - difference_kernel_mass(beta, a.node(i), a.hi)));
        tail += gaussian_tail(beta, a.hi);
        simpson += 2.0 * gaussian_simpson_error(beta, a);
    }
    if (op.mass_error > 1e-6)
        throw CertificationError("p-adic grid too coarse: kernel mass error " + format_double(op.mass_error));
    op.rule = make_rule(grid, tail, simpson);

    const double alpha = spec.alpha();
    const double gamma = spec.gamma == 0.0 ? alpha : spec.gamma;
    op.handle.name = "padic";
    op.handle.profile = Profile::power(gamma);
    op.handle.apply_fn = [kernels = op.kernels, g = op.grid, alpha](const ConeVector& x) {
        if (!(x.grid() == *g)) throw GridMismatch("padic: wrong grid");
        return x.with(apply_tensor(kernels, *g, cone_pow(x.values(), alpha)));
    };
    return op;
}

double padic_laplace(double beta, double s)
{
    if (!(s >= 0.0)) throw DomainError("s must be nonnegative");
    return 0.5 * erfcx(s * std::sqrt(beta));
}

double padic_s(double beta, double eps)
{
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0,1)");
    const double target = 0.5 * eps;
    double lo = 0.0, hi = 1.0;
    while (padic_laplace(beta, hi) > target) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi)) throw NonConvergence("padic_s: no bracket");
    }
    for (int i = 0; i < 200; ++i) {
        if (hi - lo <= 1e-15 * hi) return 0.5 * (lo + hi);
        const double mid = 0.5 * (lo + hi);
        (padic_laplace(beta, mid) > target ? lo : hi) = mid;
    }
    throw NonConvergence("padic_s: bisection did not converge");
}

double padic_Q(double beta, double eps, double s, double x)
{
    if (x <= 0.0) return eps * s * std::sqrt(4.0 * std::numbers::pi * beta) / 2.0;
    return eps * -std::expm1(-s * x) / std::erf(x / (2.0 * std::sqrt(beta)));
}

double padic_sigma0_theoretical(const PadicSpec& spec, double eps, const Grid& grid)
{
    spec.validate();
    if (grid.dim() != spec.n) throw DomainError("grid dimension does not match p-adic dimension");
    double sigma = std::pow(eps, spec.alpha() * spec.n);
    for (int k = 0; k < spec.n; ++k) {
        const double beta = spec.betas[k];
        const double s = padic_s(beta, eps);
        double q = std::min(padic_Q(beta, eps, s, 0.0), eps);
        const Axis& a = grid.axis(k);
        for (Eigen::Index i = 1; i < a.n; ++i) q = std::min(q, padic_Q(beta, eps, s, a.node(i)));
        sigma *= q;
    }
    return sigma;
}

OddExtension padic_extend_odd(const ConeVector& phi_half, const PadicSpec& spec)
{
    spec.validate();
    const Grid& hg = phi_half.grid();
    if (hg.dim() != spec.n) throw DomainError("grid dimension does not match p-adic dimension");
    std::vector<Axis> axes;
    for (int k = 0; k < hg.dim(); ++k) {
        const Axis& a = hg.axis(k);
        if (a.lo != 0.0) throw DomainError("half grid must start at 0");
        axes.push_back(Axis{-a.hi, a.hi, 2 * a.n - 1});
    }
    auto fg = make_grid(Grid(axes));
    Eigen::VectorXd v(fg->size());
    if (spec.n == 1) {
        const Eigen::Index n = hg.axis(0).n;
        for (Eigen::Index i = 0; i < n; ++i) {
            v[n - 1 + i] = phi_half[i];
            v[n - 1 - i] = -phi_half[i];
        }
        v[n - 1] = 0.0;
    } else {
        const Eigen::Index n0 = hg.axis(0).n, n1 = hg.axis(1).n;
        const Eigen::Index m1 = 2 * n1 - 1;
        for (Eigen::Index i = 0; i < n0; ++i)
            for (Eigen::Index j = 0; j < n1; ++j) {
                const double val = (i == 0 || j == 0) ? 0.0 : phi_half[i * n1 + j];
                v[(n0 - 1 + i) * m1 + (n1 - 1 + j)] = val;
                v[(n0 - 1 - i) * m1 + (n1 - 1 + j)] = -val;
                v[(n0 - 1 + i) * m1 + (n1 - 1 - j)] = -val;
                v[(n0 - 1 - i) * m1 + (n1 - 1 - j)] = val;
            }
    }
    OddExtension out{ConeVector(fg, std::move(v)), 0.0};
    out.residual = padic_full_residual(out.f, spec);
    return out;
}

double padic_full_residual(const ConeVector& f, const PadicSpec& spec)
{
    spec.validate();
    const Grid& g = f.grid();
    if (g.dim() != spec.n) throw DomainError("grid dimension does not match p-adic dimension");
    Eigen::VectorXd rhs;
    if (spec.n == 1) {
        const Axis& a = g.axis(0);
        const Eigen::VectorXd w = composite_weights(a);
        rhs.resize(a.n);
        for (Eigen::Index i = 0; i < a.n; ++i) {
            double s = 0.0;
            for (Eigen::Index l = 0; l < a.n; ++l) s += w[l] * gauss_kernel(a.node(i) - a.node(l), spec.betas[0]) * f[l];
            rhs[i] = s;
        }
    } else {
        std::vector<Eigen::MatrixXd> k;
        for (int d = 0; d < 2; ++d) {
            const Axis& a = g.axis(d);
            const Eigen::VectorXd w = composite_weights(a);
            Eigen::MatrixXd m(a.n, a.n);
            for (Eigen::Index l = 0; l < a.n; ++l)
                for (Eigen::Index i = 0; i < a.n; ++i)
                    m(i, l) = w[l] * gauss_kernel(a.node(i) - a.node(l), spec.betas[d]);
            k.push_back(std::move(m));
        }
        rhs = apply_tensor(k, g, f.values());
    }
    double worst = 0.0;
    for (Eigen::Index i = 0; i < f.size(); ++i)
        if (interior(g, i)) worst = std::max(worst, std::abs(std::pow(f[i], spec.p) - rhs[i]));
    return worst;
}

double padic_half_residual(const PadicOperator& op, const ConeVector& phi)
{
    if (!(phi.grid() == *op.grid)) throw GridMismatch("padic residual: wrong grid");
    const Eigen::VectorXd rhs = apply_tensor(op.kernels, *op.grid, phi.values());
    double worst = 0.0;
    for (Eigen::Index i = 0; i < phi.size(); ++i)
        if (interior(*op.grid, i)) worst = std::max(worst, std::abs(std::pow(phi[i], op.spec.p) - rhs[i]));
    return worst;
}

} // namespace conefix
