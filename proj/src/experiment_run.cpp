#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>
#include <random>

#include "conefix/cone_io.hpp"
#include "conefix/errors.hpp"
#include "conefix/experiment.hpp"
#include "conefix/gallery.hpp"
#include "conefix/report.hpp"

namespace conefix {

using nlohmann::json;

namespace {

class Checklist {
public:
    void add(const std::string& label, bool ok) { items_.push_back({{"check", label}, {"result", ok ? "PASS" : "FAIL"}}); all_ &= ok; }
    bool all() const { return all_; }
    json to_json() const { return items_; }

private:
    json items_ = json::array();
    bool all_ = true;
};

// Everything the runner knows about the operator beyond its handle.
struct Built {
    OperatorHandle A;
    GridPtr grid;
    json info = json::object();
    json budgets = json::object();
    std::optional<Bracket> declared;             // closed-form bracket, when one exists
    std::function<void(const Solution&, json&, Checklist&)> inspect;
    std::optional<Profile> audit_profile;        // profile used for the concavity audit
    std::optional<OperatorHandle> base;          // counterexamples only
    std::optional<ConeVector> base_fixed;
    double lambda = 0.0;
};

Grid grid_from_json(const json& g)
{
    std::vector<Axis> axes;
    for (const auto& a : g.at("axes"))
        axes.push_back(Axis{a.at("lo").get<double>(), a.at("hi").get<double>(), a.at("n").get<Eigen::Index>()});
    return Grid(axes);
}

json grid_to_json(const Grid& g)
{
    json axes = json::array();
    for (int k = 0; k < g.dim(); ++k)
        axes.push_back({{"lo", g.axis(k).lo}, {"hi", g.axis(k).hi}, {"n", g.axis(k).n}});
    return {{"axes", axes}};
}

IterationOptions options(const Tolerances& t)
{
    IterationOptions o;
    o.tol = t.tol;
    o.max_iter = t.max_iter;
    o.order_tol = t.order_tol;
    o.floor = t.floor;
    return o;
}

ConeVector start_vector(const Built& b, double v0) { return ConeVector::constant(b.grid, v0); }

// Picks the decreasing, increasing or general driver from the measured bracket.
Solution solve_auto(const Built& b, double v0, int n0, const IterationOptions& opt)
{
    const ConeVector s = start_vector(b, v0);
    if (b.declared) return solve_general(b.A, s, n0, b.declared->r1, b.declared->r2, opt);
    const Bracket br = verify_bracket(b.A, s, n0, 1, opt.floor);
    if (br.r2 <= 1.0) return solve_decreasing(b.A, s, n0, std::clamp(br.r1, 1e-300, 1.0 - 1e-12), opt);
    if (br.r1 >= 1.0) return solve_increasing(b.A, s, n0, br.r2, opt);
    return solve_general(b.A, s, n0, br.r1, br.r2, opt);
}

Built build(const std::string& name, const json& p, const json& grid_cfg, const Tolerances& tol);

Built build_base_operator(const std::string& name, const json& p, const json& grid_cfg)
{
    Built b;
    if (name == "linf") {
        const auto N = p.at("N").get<Eigen::Index>();
        b.A = make_linf_operator(N);
        b.grid = make_grid(Grid::index(N));
    } else if (name == "scalar-power") {
        b.A = make_scalar_power(p.at("alpha").get<double>());
        b.grid = make_grid(Grid::point());
    } else if (name == "padic") {
        PadicSpec spec;
        spec.n = p.at("n").get<int>();
        spec.p = p.at("p").get<int>();
        spec.betas = p.at("betas").get<std::vector<double>>();
        spec.gamma = p.at("gamma").get<double>();
        const double eps = p.at("eps").get<double>();
        const Grid g = grid_cfg.is_null() ? padic_grid(spec, 12.0, spec.n == 1 ? 1601 : 121) : grid_from_json(grid_cfg);
        auto op = std::make_shared<PadicOperator>(make_padic_operator(spec, g));
        b.A = op->handle;
        b.grid = op->grid;
        const double sigma_theory = padic_sigma0_theoretical(spec, eps, g);
        b.budgets = {{"tail_bound", op->rule.tail_bound},
                     {"rule_error", op->rule.rule_error},
                     {"budget", op->rule.budget()},
                     {"kernel_mass_error", op->mass_error}};
        b.info = {{"alpha", spec.alpha()}, {"sigma0_theoretical", sigma_theory}, {"eps", eps}};
        b.inspect = [op, sigma_theory](const Solution& s, json& extra, Checklist& cl) {
            const ConeVector phi = s.x_star.with(cone_pow(s.x_star.values(), op->spec.alpha()));
            const double half = padic_half_residual(*op, phi);
            const OddExtension odd = padic_extend_odd(phi, op->spec);
            extra["half_line_residual"] = half;
            extra["odd_extension_residual"] = odd.residual;
            extra["sigma0_theoretical"] = sigma_theory;
            cl.add("half-line equation residual <= 1e-6", half <= 1e-6);
            cl.add("odd extension residual <= 1e-5", odd.residual <= 1e-5);
            if (s.cert.mode == Mode::Decreasing)
                cl.add("theoretical sigma0 <= numeric sigma0", sigma_theory <= s.cert.sigma0);
        };
    } else if (name == "urysohn") {
        UrysohnSpec spec;
        spec.eta = p.at("eta").get<double>();
        spec.alpha = p.at("alpha").get<double>();
        const Grid g = grid_cfg.is_null() ? Grid::line(-8.0, 8.0, 2001) : grid_from_json(grid_cfg);
        auto op = std::make_shared<UrysohnOperator>(make_urysohn_operator(spec, g));
        b.A = op->handle;
        b.grid = op->grid;
        b.budgets = {{"rule_error", op->budget}};
        b.info = {{"eta_image_sup", sup_norm(op->eta_image)}, {"far_field", op->far_field}};
        b.inspect = [op](const Solution& s, json& extra, Checklist& cl) {
            const double r = urysohn_residual(*op, s.x_star);
            extra["equation_residual"] = r;
            const double eta = op->spec.eta;
            const double lo = s.x_star.values().minCoeff(), hi = s.x_star.values().maxCoeff();
            extra["solution_min"] = lo;
            extra["solution_max"] = hi;
            const double tau = std::isfinite(s.cert.tau_star) ? s.cert.tau_star : 0.0;
            cl.add("envelope tau* eta <= f <= eta", lo >= tau * eta - op->handle.order_tol &&
                                                        hi <= eta + op->handle.order_tol);
            cl.add("equation residual <= 1e-8", r <= 1e-8);
        };
    } else if (name == "heat") {
        const int panels = p.at("panels").get<int>();
        const Grid g = grid_cfg.is_null() ? Grid::plane(Axis{-8.0, 8.0, 201}, Axis{0.0, 4.0, 101})
                                          : grid_from_json(grid_cfg);
        auto op = std::make_shared<HeatOperator>(make_heat_operator(HeatSpec::standard(), g, panels));
        b.A = op->handle;
        b.grid = op->grid;
        b.declared = Bracket{op->r1, op->r2};
        b.budgets = {{"kernel_mass_error", op->kernel_mass_error}, {"time_panels", panels}};
        b.info = {{"r1_closed_form", op->r1}, {"r2_closed_form", op->r2}};
        b.inspect = [op](const Solution& s, json& extra, Checklist& cl) {
            const ConeVector u = s.x_star + op->g;
            const double r = heat_mild_residual(*op, u);
            extra["mild_residual"] = r;
            cl.add("mild-form residual <= 1e-5", r <= 1e-5);
            // G(xi + c0) int lambda1 <= A v0 <= G(xi + beta0) int lambda2, nodewise.
            const HeatSpec& hs = op->spec;
            const Axis& xa = op->grid->axis(0);
            const Axis& ta = op->grid->axis(1);
            const ConeVector av0 = op->handle(ConeVector::constant(op->grid, hs.xi));
            double worst = 0.0;
            for (Eigen::Index i = 0; i < xa.n; ++i)
                for (Eigen::Index j = 0; j < ta.n; ++j) {
                    const double t = ta.node(j);
                    const double a = av0[i * ta.n + j];
                    const double lo = hs.G(hs.xi + hs.c0) * (1.0 - std::exp(-t)) / 3.0;
                    const double hi = hs.G(hs.xi + hs.beta0) * (1.0 - std::exp(-t));
                    worst = std::max({worst, lo - a, a - hi});
                }
            extra["first_image_envelope_excess"] = worst;
            cl.add("first image within the lambda1 / lambda2 envelope", worst <= 1e-6);
        };
    } else {
        throw ValidationError("operator '" + name + "' cannot be used here");
    }
    b.audit_profile = b.A.profile;
    return b;
}

Built build(const std::string& name, const json& p, const json& grid_cfg, const Tolerances& tol)
{
    if (name != "tilde" && name != "hat") return build_base_operator(name, p, grid_cfg);

    const json& base_cfg = p.at("base");
    Built base = build_base_operator(base_cfg.at("name").get<std::string>(), base_cfg.at("params"), nullptr);
    IterationOptions opt = options(tol);
    const Solution s = solve_auto(base, p.at("v0").get<double>(), 1, opt);

    Built b;
    b.grid = base.grid;
    b.base = base.A;
    b.base_fixed = s.x_star;
    b.audit_profile = base.A.profile;
    b.info = {{"base", base.A.name}, {"base_fixed_point_residual", s.report.fixed_point_residual}};
    if (name == "tilde") {
        b.A = make_tilde_operator(base.A, s.x_star);
    } else {
        b.lambda = p.at("lambda").get<double>();
        b.A = make_hat_operator(base.A, s.x_star, b.lambda);
    }
    return b;
}

json vector_json(const ConeVector& v)
{
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v[i]));
    return a;
}

struct Audits {
    AuditResult monotone, concavity;
    bool has_concavity = false;
};

Audits run_audits(const Built& b, const ConeVector& ref, int samples, std::uint64_t seed)
{
    Audits a;
    if (samples <= 0) return a;
    ConicalSegment dom = b.A.concavity_domain ? *b.A.concavity_domain
                                              : ConicalSegment(ConeVector::zeros(b.grid), scale(2.0, ref));
    a.monotone = audit_monotone(b.A, dom, samples, seed);
    if (b.audit_profile) {
        a.concavity = audit_concavity(b.A, *b.audit_profile, dom, samples, seed + 1);
        a.has_concavity = true;
    }
    return a;
}

json audits_json(const Audits& a)
{
    json j = {{"monotone", to_json(a.monotone)}};
    j["concavity"] = a.has_concavity ? to_json(a.concavity) : json(nullptr);
    return j;
}

struct DriverOutput {
    std::optional<ConeVector> solution;
    std::optional<ConvergenceReport> report;
    std::optional<IterationCertificate> cert;
    json extra = json::object();
};

void add_probe(const Built& b, const Solution& s, const json& dp, const IterationOptions& opt, std::uint64_t seed,
               DriverOutput& out, Checklist& cl)
{
    const int starts = dp.at("probe_starts").get<int>();
    if (starts == 0) return;
    const UniquenessResult u = uniqueness_probe(b.A, s.x_star, dp.at("probe_r1").get<double>(),
                                                dp.at("probe_r2").get<double>(), starts, opt.tol, seed, opt.max_iter);
    out.extra["probe"] = {{"starts", starts},
                          {"unique", u.unique},
                          {"offending", u.offending.size()},
                          {"squeeze_horizon", u.squeeze_horizon}};
    cl.add("multi-start limits coincide", u.unique);
}

void record_solution(const Solution& s, DriverOutput& out, Checklist& cl, const IterationOptions& opt)
{
    out.solution = s.x_star;
    out.report = s.report;
    out.cert = s.cert;
    cl.add("start condition holds", true);
    cl.add("limit inside certified segment", s.report.bracket_ok);
    cl.add("fixed point residual within tolerance",
           s.report.fixed_point_residual <= std::max(10.0 * opt.tol, opt.order_tol));
    const auto bounds = s.report.certified_bounds();
    bool dominated = true;
    const double eps = 100.0 * std::numeric_limits<double>::epsilon();
    for (std::size_t n = 0; n < s.report.residuals.size(); ++n)
        if (s.report.residuals[n] > eps && s.report.residuals[n] > bounds[n] * (1.0 + 1e-9) + eps) dominated = false;
    cl.add("residuals below certified bound", dominated);
}

DriverOutput run_driver(const ExperimentConfig& cfg, const Built& b, Checklist& cl)
{
    const json& dp = cfg.driver_params;
    const IterationOptions opt = options(cfg.tolerances);
    const std::string& d = cfg.driver;
    DriverOutput out;
    auto v0 = [&] { return dp.at("v0").get<double>(); };
    auto n0 = [&] { return dp.at("n0").get<int>(); };
    auto opt_num = [&](const char* key) -> std::optional<double> {
        if (!dp.contains(key) || dp.at(key).is_null()) return std::nullopt;
        return dp.at(key).get<double>();
    };

    if (d == "decreasing" || d == "increasing" || d == "general") {
        const ConeVector s0 = start_vector(b, v0());
        Solution s;
        if (d == "decreasing") {
            std::optional<double> sigma0 = opt_num("sigma0");
            out.extra["sigma0_source"] = sigma0 ? "config" : "measured";
            if (!sigma0) sigma0 = std::min(verify_bracket(b.A, s0, n0(), 1, opt.floor).r1, 1.0 - 1e-12);
            s = solve_decreasing(b.A, s0, n0(), *sigma0, opt);
        } else if (d == "increasing") {
            std::optional<double> r0 = opt_num("r0");
            out.extra["r0_source"] = r0 ? "config" : "measured";
            if (!r0) r0 = verify_bracket(b.A, s0, n0(), 1, opt.floor).r2;
            s = solve_increasing(b.A, s0, n0(), *r0, opt);
        } else {
            std::optional<double> r1 = opt_num("r1"), r2 = opt_num("r2");
            std::string source = "config";
            if (!r1 || !r2) {
                const Bracket br = b.declared ? *b.declared : verify_bracket(b.A, s0, n0(), 1, opt.floor);
                source = b.declared ? "closed form" : "measured";
                if (!r1) r1 = br.r1;
                if (!r2) r2 = br.r2;
            }
            out.extra["bracket_source"] = source;
            s = solve_general(b.A, s0, n0(), *r1, *r2, opt);
        }
        record_solution(s, out, cl, opt);
        if (b.inspect) b.inspect(s, out.extra, cl);
        add_probe(b, s, dp, opt, cfg.seed, out, cl);
    } else if (d == "uniqueness") {
        const Solution s = solve_auto(b, v0(), n0(), opt);
        record_solution(s, out, cl, opt);
        const UniquenessResult u = uniqueness_probe(b.A, s.x_star, dp.at("r1").get<double>(),
                                                    dp.at("r2").get<double>(), dp.at("starts").get<int>(), opt.tol,
                                                    cfg.seed, opt.max_iter);
        out.extra["unique"] = u.unique;
        out.extra["offending"] = u.offending.size();
        out.extra["distinct_limits"] = count_distinct(u.limits, std::max(10.0 * opt.tol, opt.order_tol));
        out.extra["squeeze_horizon"] = u.squeeze_horizon;
        cl.add("multi-start limits coincide", u.unique);
    } else if (d == "sum") {
        const Solution s = solve_auto(b, v0(), n0(), opt);
        const double c0 = dp.at("C0").get<double>();
        const double c = dp.at("a0_scale").get<double>();
        const bool zero = dp.at("a0").get<std::string>() == "zero";
        const ConeVector x_star = s.x_star;
        OperatorHandle a0;
        a0.name = zero ? "zero" : "capped";
        a0.order_tol = b.A.order_tol;
        a0.apply_fn = [x_star, c, zero](const ConeVector& u) {
            if (zero) return ConeVector::zeros(u.grid_ptr());
            return u.with(c * u.values().cwiseMin(x_star.values()));
        };
        const SumResult r = solve_sum(b.A, a0, x_star, c0, opt, cfg.seed);
        out.solution = r.x_tilde;
        out.report = r.report;
        out.extra["x_star_residual"] = s.report.fixed_point_residual;
        out.extra["r_star"] = r.r_star;
        out.extra["k_star"] = r.k_star;
        json dist = json::array();
        for (double v : r.return_distances) dist.push_back(number(v));
        out.extra["return_distances"] = dist;
        cl.add("A0 hypotheses hold on samples", true);
        cl.add("sum fixed point inside <x*, r* x*>", r.bracket_ok);
        cl.add("return to x* within k*^n envelope", r.return_ok);
    } else if (d == "complement") {
        const Profile& phi = b.A.require_profile();
        if (phi.kind() != Profile::Kind::Power) throw ValidationError("complement driver needs a power profile");
        const double alpha = phi.gamma();
        const double g0 = dp.at("gamma0").get<double>();
        const double c_lo = std::pow(g0, 1.0 - alpha);
        const double c = dp.at("c").is_null() ? c_lo : dp.at("c").get<double>();
        if (c < c_lo - 1e-15 || c > 1.0) throw ValidationError("c must lie in [gamma0^(1-alpha), 1]");
        const ConeVector x0 = apply_power(b.A, start_vector(b, v0()), n0() - 1);
        OperatorHandle a0;
        a0.name = "complement";
        a0.order_tol = b.A.order_tol;
        a0.apply_fn = [A = b.A, x0, c](const ConeVector& u) { return axpy(-c, A(x0 - u), x0); };
        const ComplementResult r = complement_fixed_point(b.A, a0, start_vector(b, v0()), n0(), g0, alpha, opt,
                                                          cfg.seed);
        out.solution = r.x_tilde;
        out.report = r.base.report;
        out.cert = r.base.cert;
        out.extra["c"] = c;
        out.extra["x0"] = vector_json(r.x0);
        out.extra["iterations"] = r.iterations;
        out.extra["complement_residual"] = r.fixed_point_residual;
        cl.add("two-sided A0 inequality holds on samples", true);
        cl.add("complement fixed point is nonzero and differs from x0", true);
        cl.add("x0 - x* <= x~ <= x0 - gamma0 x*", r.sandwich_ok);
        cl.add("complement residual within tolerance", r.fixed_point_residual <= std::max(10.0 * opt.tol, opt.order_tol));
    } else if (d == "periodic") {
        const int m0 = dp.at("m0").get<int>();
        const PeriodicResult r = periodic_points(b.A, start_vector(b, v0()), n0(), m0, opt);
        const double tol = std::max(10.0 * opt.tol, opt.order_tol);
        json pts = json::array();
        for (const auto& p : r.points) pts.push_back(vector_json(p));
        out.solution = r.points.front();
        out.extra["points"] = pts;
        out.extra["rate"] = r.rate;
        out.extra["sweeps"] = r.sweeps;
        out.extra["bracket"] = {{"r1", r.bracket.r1}, {"r2", r.bracket.r2}};
        double worst = 0.0;
        for (double v : r.period_residuals) worst = std::max(worst, v);
        out.extra["period_residual"] = worst;
        cl.add("periodic points have period m0", worst <= tol);
        const CollapseResult c = collapse_check(r.points, dp.at("i0").get<int>(), dp.at("j0").get<int>(),
                                                dp.at("d1").get<double>(), dp.at("d2").get<double>(), tol);
        if (const auto* p = std::get_if<ConeVector>(&c)) {
            out.extra["collapse"] = {{"collapsed", true}, {"point", vector_json(*p)}};
            cl.add("periodic points collapse to one fixed point", true);
        } else {
            const auto& dc = std::get<DistinctClasses>(c);
            out.extra["collapse"] = {{"collapsed", false}, {"gcd", dc.gcd}, {"classes", dc.classes},
                                     {"classes_equal", dc.classes_equal}};
            cl.add("points agree within each residue class", dc.classes_equal);
        }
    } else if (d == "counterexample") {
        const ConeVector& xs = *b.base_fixed;
        const double r = sup_norm(xs);
        const int samples = dp.at("samples").get<int>();
        const int outside = dp.at("outside_samples").get<int>();
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const Eigen::Index n = xs.size();
        int fixed = 0, moved = 0;
        double worst_fixed = 0.0;
        const bool tilde = cfg.op == "tilde";
        for (int s = 0; s < samples; ++s) {
            Eigen::VectorXd v(n);
            if (tilde) {
                // Point of the open ball about x*, kept in the cone.
                const double rho = 0.99 * unit(rng);
                for (Eigen::Index i = 0; i < n; ++i) v[i] = std::max(xs[i] + rho * r * (2.0 * unit(rng) - 1.0), 0.0);
            } else {
                // Point of <0, x*> farther than lambda |x*| from x*.
                for (Eigen::Index i = 0; i < n; ++i) v[i] = unit(rng) * xs[i];
                Eigen::Index top = 0;
                xs.values().maxCoeff(&top);
                v[top] = unit(rng) * 0.999 * (1.0 - b.lambda) * r;
            }
            const ConeVector x = xs.with(v);
            const double d = distance(b.A(x), x);
            worst_fixed = std::max(worst_fixed, d);
            if (d <= 1e-12) ++fixed;
        }
        out.extra["fixed_samples"] = fixed;
        out.extra["worst_fixed_displacement"] = worst_fixed;
        cl.add("at least 100 sampled points fixed to 1e-12", fixed >= 100);
        if (tilde) {
            for (int s = 0; s < outside; ++s) {
                Eigen::VectorXd w(n);
                for (Eigen::Index i = 0; i < n; ++i) w[i] = unit(rng);
                w[static_cast<Eigen::Index>(unit(rng) * static_cast<double>(n)) % n] = 1.0;
                const ConeVector x = xs.with(xs.values() + (1.5 + unit(rng)) * r * w);
                if (distance(b.A(x), x) >= 1e-3) ++moved;
            }
            out.extra["moved_outside"] = moved;
            cl.add("at least 20 points outside the closed ball moved by 1e-3", moved >= 20);
            const UniquenessResult u = uniqueness_probe(b.A, xs, dp.at("r1").get<double>(), dp.at("r2").get<double>(),
                                                        dp.at("starts").get<int>(), opt.tol, cfg.seed, opt.max_iter);
            const int distinct = count_distinct(u.limits, 1e-9);
            out.extra["probe_unique"] = u.unique;
            out.extra["distinct_limits"] = distinct;
            cl.add("uniqueness probe fails with at least 2 distinct limits", !u.unique && distinct >= 2);
        }
        out.solution = xs;
    }
    return out;
}

int code_for(const std::exception& e)
{
    if (dynamic_cast<const NonConvergence*>(&e)) return 3;
    if (dynamic_cast<const CertificationError*>(&e)) return 2;
    return 1;
}

} // namespace

RunOutcome run_experiment(const ExperimentConfig& cfg, bool write_files)
{
    RunOutcome out;
    json& rep = out.report;
    rep["name"] = cfg.name;
    rep["config"] = cfg.to_json();
    Checklist cl;
    std::optional<DriverOutput> d;
    try {
        const Built b = build(cfg.op, cfg.op_params, cfg.grid, cfg.tolerances);
        if (cfg.op != "linf" && cfg.op != "scalar-power" && cfg.op != "tilde" && cfg.op != "hat")
            rep["config"]["grid"] = grid_to_json(*b.grid);
        rep["operator"] = b.info;
        rep["operator"]["name"] = b.A.name;
        rep["budgets"] = b.budgets;

        d = run_driver(cfg, b, cl);
        if (d->cert) rep["certificate"] = to_json(*d->cert);
        if (d->report) rep["convergence"] = to_json(*d->report);
        rep["driver"] = d->extra;

        const ConeVector ref = d->solution && sup_norm(*d->solution) > 0.0 ? *d->solution
                                                                            : ConeVector::ones(b.grid);
        const Audits a = run_audits(b, ref, cfg.audit_samples, cfg.seed);
        rep["audits"] = audits_json(a);
        if (cfg.audit_samples > 0) {
            if (cfg.driver == "counterexample") {
                cl.add("construction fails an audit sample", !a.monotone.passed() ||
                                                                  (a.has_concavity && !a.concavity.passed()));
            } else {
                cl.add("monotonicity audit", a.monotone.passed());
                if (a.has_concavity) cl.add("concavity audit", a.concavity.passed());
            }
        }
        rep["checklist"] = cl.to_json();
        out.exit_code = cl.all() ? 0 : 2;
        out.message = cl.all() ? "ok" : "checklist has failures";
    } catch (const NonConvergenceError& e) {
        rep["convergence"] = to_json(e.report);
        out.exit_code = 3;
        out.message = e.what();
    } catch (const std::exception& e) {
        out.exit_code = code_for(e);
        out.message = e.what();
    }
    rep["status"] = out.exit_code == 0 ? "ok" : "error";
    rep["exit_code"] = out.exit_code;
    rep["message"] = out.message;
    if (!rep.contains("checklist")) rep["checklist"] = cl.to_json();

    if (write_files) {
        try {
            std::filesystem::create_directories(cfg.output_dir);
            const std::filesystem::path dir(cfg.output_dir);
            write_json((dir / "report.json").string(), rep);
            if (d && d->report) write_residuals_csv((dir / "residuals.csv").string(), *d->report);
            if (d && d->solution) save_csv((dir / "solution.csv").string(), *d->solution);
        } catch (const std::exception& e) {
            out.exit_code = 1;
            out.message = e.what();
        }
    }
    return out;
}

} // namespace conefix
