#include <cmath>
#include <numbers>

#include "conefix/cone_io.hpp"
#include "conefix/gallery.hpp"

namespace conefix {

double UrysohnSpec::amplitude(double x) { return 1.0 - 1.0 / (2.0 * (1.0 + x * x)); }

double UrysohnSpec::base_kernel(double u) { return std::exp(-u * u) / std::sqrt(std::numbers::pi); }

void UrysohnSpec::validate() const
{
    if (!(eta > 0.0)) throw DomainError("eta must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
}

namespace {

struct Parts {
    double sum = 0.0, lo = 0.0, hi = 0.0;
};

// Mass of k(x - .) on the grid rule and on the two tails beyond it.
Parts kernel_parts(const Axis& a, const Eigen::VectorXd& w, double x)
{
    Parts p;
    for (Eigen::Index l = 0; l < a.n; ++l) p.sum += w[l] * UrysohnSpec::base_kernel(x - a.node(l));
    p.hi = 0.5 * std::erfc(a.hi - x);
    p.lo = 0.5 * std::erfc(x - a.lo);
    return p;
}

} // namespace

UrysohnOperator make_urysohn_operator(const UrysohnSpec& spec, const Grid& grid)
{
    spec.validate();
    if (grid.dim() != 1) throw DomainError("Urysohn operator needs a 1-d grid");
    const Axis& a = grid.axis(0);
    if (a.n < 3) throw DomainError("Urysohn grid needs at least 3 nodes");

    UrysohnOperator op;
    op.spec = spec;
    op.grid = make_grid(grid);
    const Eigen::VectorXd w = composite_weights(a);
    const Eigen::Index n = a.n;
    op.kernel.resize(n, n);
    op.tail_lo.resize(n);
    op.tail_hi.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double x = a.node(i);
        const double c = UrysohnSpec::amplitude(x);
        for (Eigen::Index l = 0; l < n; ++l) op.kernel(i, l) = c * w[l] * UrysohnSpec::base_kernel(x - a.node(l));
        op.tail_lo[i] = c * 0.5 * std::erfc(x - a.lo);
        op.tail_hi[i] = c * 0.5 * std::erfc(a.hi - x);
    }
    // k is the H_beta density with beta = 1/4.
    op.budget = gaussian_simpson_error(0.25, a) + 1e-14;

    const double scale_eta = std::pow(spec.eta, 1.0 - spec.alpha);
    const double alpha = spec.alpha;
    op.handle.name = "urysohn";
    op.handle.profile = Profile::power(spec.alpha);
    op.handle.apply_fn = [k = op.kernel, tlo = op.tail_lo, thi = op.tail_hi, g = op.grid, scale_eta,
                          alpha](const ConeVector& f) {
        if (!(f.grid() == *g)) throw GridMismatch("urysohn: wrong grid");
        const Eigen::VectorXd fa = cone_pow(f.values(), alpha);
        Eigen::VectorXd out = k * fa + tlo * fa[0] + thi * fa[fa.size() - 1];
        return f.with(scale_eta * out);
    };

    // Sup of x -> int U(x, t, eta) dt is eta, approached as |x| -> inf.
    op.eta_image = op.handle(ConeVector::constant(op.grid, spec.eta));
    if (sup_norm(op.eta_image) > spec.eta * (1.0 + op.budget))
        throw CertificationError("Urysohn kernel mass exceeds eta: " + format_double(sup_norm(op.eta_image)));
    const double far = 1e4;
    const Parts p = kernel_parts(a, w, far);
    op.far_field = UrysohnSpec::amplitude(far) * spec.eta * (p.sum + p.lo + p.hi);
    if (op.far_field < spec.eta - 1e-6)
        throw CertificationError("Urysohn kernel mass does not approach eta at infinity");
    return op;
}

double urysohn_residual(const UrysohnOperator& op, const ConeVector& f)
{
    const ConeVector af = op.handle(f);
    double worst = 0.0;
    for (Eigen::Index i = 1; i + 1 < f.size(); ++i) worst = std::max(worst, std::abs(f[i] - af[i]));
    return worst;
}

} // namespace conefix
