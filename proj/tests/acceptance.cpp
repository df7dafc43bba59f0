// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <variant>

#include "conefix/engine.hpp"
#include "conefix/experiment.hpp"
#include "conefix/gallery.hpp"

using namespace conefix;
using nlohmann::json;

namespace {

struct Outcome {
    bool ok = true;
    std::ostringstream why;
    void need(bool c, const std::string& what)
    {
        if (!c) {
            ok = false;
            why << " [" << what << "]";
        }
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::mt19937_64 rng(7);
double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

bool all_pass(const json& rep)
{
    for (const auto& c : rep.at("checklist"))
        if (c.at("result") != "PASS") return false;
    return rep.at("exit_code") == 0;
}

RunOutcome run_builtin(const std::string& name, const std::function<void(json&)>& tweak = {})
{
    for (const auto& b : builtin_experiments())
        if (b.name == name) {
            json c = b.config;
            if (tweak) tweak(c);
            return run_experiment(parse_config(c), false);
        }
    throw std::runtime_error("missing builtin " + name);
}

const GridPtr point = make_grid(Grid::point());
ConeVector scalar(double x) { return ConeVector::constant(point, x); }

std::vector<Profile> shipped_profiles()
{
    return {Profile::power(0.2),  Profile::power(1.0 / 3.0), Profile::power(0.5),
            Profile::power(0.75), Profile::summix(Profile::power(0.5), 0.5)};
}

void linf_exact(Outcome& o)
{
    const auto t0 = Clock::now();
    const auto g = make_grid(Grid::index(64));
    const Solution s = solve_decreasing(make_linf_operator(64), ConeVector::constant(g, 2.0), 1, 1.0 / 3.0);
    const double dt = seconds_since(t0);
    o.need(s.x_star.values() == ConeVector::ones(g).values(), "limit is exactly ones");
    o.need(s.report.fixed_point_residual == 0.0, "residual is 0");
    o.need(std::abs(s.cert.tau_star - 1.0 / 9.0) <= 1e-14, "tau* = 1/9");
    o.need(dt < 1.0, "under 1 s");
    o.why << " time=" << dt << "s";
}

void characteristic_roots(Outcome& o)
{
    int bad = 0;
    for (double a : {0.2, 1.0 / 3.0, 0.5, 0.75}) {
        const Profile p = Profile::power(a);
        for (int k = 0; k < 20; ++k) {
            const double s0 = uniform(1e-3, 1.0 - 1e-3);
            const double tau = std::pow(s0, 1.0 / (1.0 - a));
            if (std::abs(solve_tau(p, s0) - tau) > 1e-12 * tau) ++bad;
            const double r0 = 1.0 / s0;
            const double d = std::pow(r0, 1.0 / (1.0 - a));
            if (std::abs(solve_delta(p, r0) - d) > 1e-10 * d) ++bad;
        }
    }
    o.need(bad == 0, std::to_string(bad) + " roots off the closed form");
}

void scalar_rate(Outcome& o)
{
    int violations = 0;
    const double eps = std::numeric_limits<double>::epsilon();
    for (int k = 0; k < 30; ++k) {
        const double x0 = uniform(1.0 + 1e-9, 100.0);
        const double s0 = 1.0 / std::sqrt(x0);
        const Solution s = solve_decreasing(make_scalar_power(0.5), scalar(x0), 1, s0);
        const double rate = rate_k(Profile::power(0.5), s0);
        const auto& r = s.report.residuals;
        if (r.size() < 2) continue;
        const double c = r[1] / rate;
        double bound = c;
        for (std::size_t n = 0; n < r.size(); ++n, bound *= rate)
            if (n >= 1 && r[n] - bound > 100.0 * eps) ++violations;
    }
    o.need(violations == 0, std::to_string(violations) + " residuals above C k^n");
}

void phi_envelope(Outcome& o)
{
    int bad = 0;
    for (const Profile& p : shipped_profiles())
        for (int k = 0; k < 50; ++k) {
            const double s0 = uniform(1e-4, 1.0 - 1e-4);
            const double rate = rate_k(p, s0);
            double s = s0, bound = 1.0 - s0;
            for (int n = 0; n <= 200; ++n, bound *= rate) {
                if (1.0 - s > bound + 1e-12) ++bad;
                s = phi_eval(p, s);
            }
        }
    o.need(bad == 0, std::to_string(bad) + " envelope violations");
}

void padic(Outcome& o)
{
    const auto t0 = Clock::now();
    const RunOutcome r = run_builtin("padic-n1-p3");
    const double dt = seconds_since(t0);
    const json& rep = r.report;
    o.need(all_pass(rep), "checklist");
    if (r.exit_code != 0) return;
    o.need(rep["convergence"]["bracket_ok"].get<bool>(), "bracket");
    o.need(rep["config"]["tolerances"]["tol"].get<double>() <= 1e-10, "tol 1e-10");
    o.need(rep["driver"]["half_line_residual"].get<double>() <= 1e-6, "half-line residual");
    o.need(rep["driver"]["odd_extension_residual"].get<double>() <= 1e-5, "odd extension residual");
    o.need(rep["driver"]["sigma0_theoretical"].get<double>() <= rep["certificate"]["sigma0"].get<double>(),
           "theoretical sigma0 <= numeric");
    o.need(dt < 30.0, "under 30 s");
    o.why << " time=" << dt << "s";
}

void urysohn(Outcome& o)
{
    const RunOutcome r = run_builtin("urysohn", [](json& c) { c["driver"]["params"]["probe_starts"] = 8; });
    const json& rep = r.report;
    o.need(all_pass(rep), "checklist");
    if (r.exit_code != 0) return;
    const double s0 = rep["certificate"]["sigma0"].get<double>();
    o.need(std::abs(s0 - 0.5) <= 1e-6, "sigma0 = 1/2");
    const double tau = rep["certificate"]["tau_star"].get<double>();
    o.need(rep["driver"]["solution_min"].get<double>() >= tau - 1e-10, "f >= tau* eta");
    o.need(rep["driver"]["solution_max"].get<double>() <= 1.0 + 1e-10, "f <= eta");
    o.need(rep["driver"]["equation_residual"].get<double>() <= 1e-8, "residual");
    o.need(rep["driver"]["probe"]["starts"] == 8 && rep["driver"]["probe"]["unique"].get<bool>(), "probe unique");
}

void heat(Outcome& o)
{
    const auto t0 = Clock::now();
    const HeatOperator op =
        make_heat_operator(HeatSpec::standard(), Grid::plane(Axis{-8.0, 8.0, 201}, Axis{0.0, 4.0, 101}));
    const double r1 = 1.0 / (3.0 * std::sqrt(3.0));
    // (1 / delta0) sqrt(sqrt(xi + beta0) + beta0) / sqrt(xi + c0) with xi = c0 = 1, beta0 = 2, delta0 = 1/3.
    const double r2 = 3.0 * std::sqrt((std::sqrt(3.0) + 2.0) / 2.0);
    o.need(std::abs(op.r1 - r1) <= 1e-10, "r1 closed form");
    o.need(std::abs(op.r2 - r2) <= 1e-10, "r2 closed form");
    o.why << " r1=" << op.r1 << " r2=" << op.r2;
    const ConeVector v0 = ConeVector::constant(op.grid, 1.0);
    IterationOptions opt;
    opt.tol = 1e-10;
    const Solution s = solve_general(op.handle, v0, 2, op.r1, op.r2, opt);
    o.need(s.report.converged, "converged");
    const double tau1 = op.r1 * op.r1, delta1 = op.r2 * op.r2;
    o.need(leq(scale(tau1, s.x0), s.x_star, 1e-10) && leq(s.x_star, scale(delta1, s.x0), 1e-10),
           "tau1 x0 <= u* <= delta1 x0");
    const double res = heat_mild_residual(op, s.x_star + op.g);
    o.need(res <= 1e-5, "mild residual");
    const UniquenessResult u = uniqueness_probe(op.handle, s.x_star, 0.5, 2.0, 4, opt.tol);
    o.need(u.unique, "uniqueness probe");
    const double dt = seconds_since(t0);
    o.need(dt < 300.0, "under 5 min");
    o.why << " residual=" << res << " time=" << dt << "s";
}

void sum(Outcome& o)
{
    OperatorHandle a0;
    a0.name = "capped";
    a0.apply_fn = [](const ConeVector& u) { return u.with(0.5 * u.values().cwiseMin(1.0)); };
    const SumResult s = solve_sum(make_scalar_power(0.5), a0, scalar(1.0), 0.5);
    // Independent root of x = sqrt(x) + 1/2 on [1, 4] by bisection.
    double lo = 1.0, hi = 4.0;
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (lo + hi);
        (m - std::sqrt(m) - 0.5 < 0.0 ? lo : hi) = m;
    }
    o.need(std::abs(s.x_tilde[0] - lo) <= 1e-10, "x_tilde vs root");
    o.need(std::abs(s.r_star - 2.25) <= 1e-12, "r* = 2.25");
    const auto& d = s.return_distances;
    bool env = !d.empty();
    for (std::size_t n = 0; n < d.size(); ++n) env = env && d[n] <= d[0] * std::pow(0.6, n) * (1.0 + 1e-12) + 1e-15;
    o.need(env, "return distances within C1 0.6^n");
}

void periodic(Outcome& o)
{
    const RunOutcome a = run_builtin("periodic-scalar");
    o.need(all_pass(a.report), "m0 = 3 checklist");
    if (a.exit_code == 0) {
        const json& c = a.report["driver"]["collapse"];
        o.need(c["collapsed"].get<bool>(), "m0 = 3 collapses");
        o.need(std::abs(c["point"][0].get<double>() - 1.0) <= 1e-10, "collapse point is 1");
    }
    const RunOutcome b = run_builtin("periodic-gcd2");
    o.need(b.exit_code == 0, "gcd-2 run");
    if (b.exit_code == 0) {
        const json& c = b.report["driver"]["collapse"];
        o.need(!c["collapsed"].get<bool>() && c["gcd"] == 2 && c["classes"].size() == 2, "gcd-2 residue classes");
    }
}

void counterexamples(Outcome& o)
{
    const RunOutcome t = run_builtin("counterexample-tilde");
    o.need(all_pass(t.report), "tilde checklist");
    if (t.exit_code == 0) {
        const json& d = t.report["driver"];
        o.need(d["fixed_samples"].get<int>() >= 100, "tilde fixed samples");
        o.need(d["moved_outside"].get<int>() >= 20, "tilde moved outside");
        o.need(!d["probe_unique"].get<bool>() && d["distinct_limits"].get<int>() >= 2, "tilde non-unique");
    }
    const RunOutcome h = run_builtin("counterexample-hat");
    o.need(all_pass(h.report), "hat checklist");
    if (h.exit_code == 0) o.need(h.report["driver"]["fixed_samples"].get<int>() >= 100, "hat fixed samples");
}

void audits(Outcome& o)
{
    struct Case {
        std::string name;
        OperatorHandle a;
        GridPtr grid;
    };
    std::vector<Case> cases;
    cases.push_back({"linf", make_linf_operator(64), make_grid(Grid::index(64))});
    cases.push_back({"scalar", make_scalar_power(0.5), point});
    const PadicOperator pa = make_padic_operator(PadicSpec{}, padic_grid(PadicSpec{}, 12.0, 401));
    cases.push_back({"padic", pa.handle, pa.grid});
    const UrysohnOperator ur = make_urysohn_operator(UrysohnSpec{}, Grid::line(-8.0, 8.0, 401));
    cases.push_back({"urysohn", ur.handle, ur.grid});
    // Coarser grid than the solver run so 100 samples stay cheap.
    const HeatOperator he =
        make_heat_operator(HeatSpec::standard(), Grid::plane(Axis{-8.0, 8.0, 81}, Axis{0.0, 4.0, 21}));
    cases.push_back({"heat", he.handle, he.grid});
    for (const Case& c : cases) {
        const ConicalSegment dom = c.a.concavity_domain ? *c.a.concavity_domain
                                                        : ConicalSegment(ConeVector::zeros(c.grid),
                                                                         ConeVector::constant(c.grid, 2.0));
        const AuditResult m = audit_monotone(c.a, dom, 100, 11);
        const AuditResult k = audit_concavity(c.a, c.a.require_profile(), dom, 100, 11);
        o.need(m.passed() && m.samples >= 100, c.name + " monotone");
        o.need(k.passed() && k.samples >= 100, c.name + " concave");
    }
    bool construction_fails = false;
    for (const char* name : {"counterexample-tilde", "counterexample-hat"}) {
        const RunOutcome r = run_builtin(name, [](json& c) { c["audit_samples"] = 100; });
        for (const auto& c : r.report["checklist"])
            if (c["check"] == "construction fails an audit sample" && c["result"] == "PASS") construction_fails = true;
    }
    o.need(construction_fails, "tilde or hat fails an audit sample");
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, void (*)(Outcome&)>> criteria{
        {"linf exact fixed point", linf_exact},
        {"characteristic roots", characteristic_roots},
        {"scalar geometric rate", scalar_rate},
        {"phi envelope", phi_envelope},
        {"padic string", padic},
        {"urysohn equation", urysohn},
        {"semilinear heat", heat},
        {"sum construction", sum},
        {"periodic collapse", periodic},
        {"counterexample constructions", counterexamples},
        {"hypothesis audits", audits},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            criteria[i].second(o);
        } catch (const std::exception& e) {
            o.ok = false;
            o.why << " exception: " << e.what();
        }
        if (!o.ok) ++failed;
        std::cout << (o.ok ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ":" << o.why.str()
                  << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
