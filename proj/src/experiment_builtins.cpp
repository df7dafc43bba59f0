#include "conefix/experiment.hpp"

namespace conefix {

using nlohmann::json;

namespace {

json config(const std::string& name, json op, json driver, json extra = json::object())
{
    json c = {{"name", name}, {"operator", std::move(op)}, {"driver", std::move(driver)},
              {"output", {{"dir", "runs/" + name}}}};
    for (auto& [k, v] : extra.items()) c[k] = v;
    return c;
}

json scalar(double alpha) { return {{"name", "scalar-power"}, {"params", {{"alpha", alpha}}}}; }
json linf() { return {{"name", "linf"}, {"params", {{"N", 64}}}}; }

std::vector<BuiltinExperiment> make_builtins()
{
    std::vector<BuiltinExperiment> b;
    b.push_back({"linf-theorem1", "l-infinity operator, N = 64, decreasing from 2 ones with sigma0 = 1/3",
                 config("linf-theorem1", linf(),
                        {{"name", "decreasing"}, {"params", {{"v0", 2.0}, {"n0", 1}, {"sigma0", 1.0 / 3.0}}}})});
    b.push_back({"characteristic-solvers", "scalar x^(1/5), decreasing with measured sigma0",
                 config("characteristic-solvers", scalar(0.2),
                        {{"name", "decreasing"}, {"params", {{"v0", 32.0}, {"n0", 1}}}})});
    b.push_back({"scalar-rate", "scalar sqrt, decreasing from 9 with sigma0 = 1/3",
                 config("scalar-rate", scalar(0.5),
                        {{"name", "decreasing"}, {"params", {{"v0", 9.0}, {"n0", 1}, {"sigma0", 1.0 / 3.0}}}})});
    b.push_back({"phi-envelope", "scalar x^(3/4), increasing from 1/4 with measured r0",
                 config("phi-envelope", scalar(0.75), {{"name", "increasing"}, {"params", {{"v0", 0.25}, {"n0", 1}}}})});
    b.push_back({"padic-n1-p3", "p-adic string, n = 1, p = 3, beta = 1, 1601 nodes on [0, 12]",
                 config("padic-n1-p3", {{"name", "padic"}, {"params", {{"n", 1}, {"p", 3}, {"betas", {1.0}}}}},
                        {{"name", "decreasing"}, {"params", {{"v0", 1.0}, {"n0", 2}}}},
                        {{"tolerances", {{"tol", 1e-10}}}})});
    b.push_back({"urysohn", "Urysohn equation, eta = 1, alpha = 1/2, 2001 nodes on [-8, 8]",
                 config("urysohn", {{"name", "urysohn"}, {"params", {{"eta", 1.0}, {"alpha", 0.5}}}},
                        {{"name", "decreasing"}, {"params", {{"v0", 1.0}, {"n0", 1}}}})});
    b.push_back({"heat", "semilinear heat problem on a 201 x 101 grid over [-8, 8] x [0, 4]",
                 config("heat", {{"name", "heat"}, {"params", {{"panels", 8}}}},
                        {{"name", "general"}, {"params", {{"v0", 1.0}, {"n0", 2}, {"probe_starts", 4}}}},
                        {{"tolerances", {{"tol", 1e-10}}}, {"audit_samples", 20}})});
    b.push_back({"sum-scalar", "sum A + A0 with A = sqrt, A0 u = min(u, 1) / 2",
                 config("sum-scalar", scalar(0.5),
                        {{"name", "sum"}, {"params", {{"v0", 1.0}, {"n0", 1}, {"C0", 0.5}, {"a0_scale", 0.5}}}})});
    b.push_back({"periodic-scalar", "periodic points of sqrt with m0 = 3",
                 config("periodic-scalar", scalar(0.5),
                        {{"name", "periodic"},
                         {"params", {{"v0", 4.0}, {"n0", 3}, {"m0", 3}, {"i0", 0}, {"j0", 1}}}})});
    b.push_back({"periodic-gcd2", "periodic points of sqrt with m0 = 6 and |i0 - j0| = 2",
                 config("periodic-gcd2", scalar(0.5),
                        {{"name", "periodic"},
                         {"params", {{"v0", 4.0}, {"n0", 6}, {"m0", 6}, {"i0", 0}, {"j0", 2}}}})});
    b.push_back({"counterexample-tilde", "tilde construction over the l-infinity operator",
                 config("counterexample-tilde", {{"name", "tilde"}, {"params", {{"base", linf()}, {"v0", 2.0}}}},
                        {{"name", "counterexample"}, {"params", {{"samples", 200}, {"outside_samples", 40}}}})});
    b.push_back({"counterexample-hat", "hat construction over the l-infinity operator, lambda = 1/2",
                 config("counterexample-hat",
                        {{"name", "hat"}, {"params", {{"base", linf()}, {"v0", 2.0}, {"lambda", 0.5}}}},
                        {{"name", "counterexample"}, {"params", {{"samples", 200}, {"outside_samples", 0}}}})});
    b.push_back({"audits", "100-sample monotonicity and concavity audits of the l-infinity operator",
                 config("audits", linf(), {{"name", "decreasing"}, {"params", {{"v0", 2.0}, {"n0", 1}}}},
                        {{"audit_samples", 100}})});
    b.push_back({"complement-scalar", "complement fixed point for sqrt from x0 = 2, gamma0 = 1/4",
                 config("complement-scalar", scalar(0.5),
                        {{"name", "complement"}, {"params", {{"v0", 4.0}, {"n0", 2}, {"gamma0", 0.25}}}})});
    b.push_back({"uniqueness-urysohn", "multi-start uniqueness probe for the Urysohn equation",
                 config("uniqueness-urysohn", {{"name", "urysohn"}, {"params", {{"eta", 1.0}, {"alpha", 0.5}}}},
                        {{"name", "uniqueness"},
                         {"params", {{"v0", 1.0}, {"n0", 1}, {"r1", 0.25}, {"r2", 4.0}, {"starts", 8}}}})});
    return b;
}

} // namespace

const std::vector<BuiltinExperiment>& builtin_experiments()
{
    static const std::vector<BuiltinExperiment> all = make_builtins();
    return all;
}

} // namespace conefix
