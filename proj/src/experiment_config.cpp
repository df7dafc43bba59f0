#include <filesystem>
#include <fstream>
#include <set>

#include "conefix/errors.hpp"
#include "conefix/experiment.hpp"

namespace conefix {

using nlohmann::json;

namespace {

// Reads keys of one JSON object, fills defaults and rejects leftovers.
class Reader {
public:
    Reader(const json& j, std::string where) : src_(j), where_(std::move(where))
    {
        if (!j.is_null() && !j.is_object()) throw ValidationError(where_ + " must be an object");
        out_ = json::object();
    }

    template <typename Pred>
    double num(const std::string& key, json def, Pred ok, const std::string& msg)
    {
        const json v = take(key, def);
        if (v.is_null()) {
            out_[key] = nullptr;
            return 0.0;
        }
        if (!v.is_number()) throw ValidationError(where_ + "." + key + " must be a number");
        const double d = v.get<double>();
        if (!ok(d)) throw ValidationError(msg);
        out_[key] = d;
        return d;
    }

    long long integer(const std::string& key, long long def, long long lo, long long hi)
    {
        const json v = take(key, def);
        if (!v.is_number_integer()) throw ValidationError(where_ + "." + key + " must be an integer");
        const long long i = v.get<long long>();
        if (i < lo || i > hi)
            throw ValidationError(where_ + "." + key + " must lie in [" + std::to_string(lo) + ", " +
                                  std::to_string(hi) + "]");
        out_[key] = i;
        return i;
    }

    std::string str(const std::string& key, const std::string& def)
    {
        const json v = take(key, def);
        if (!v.is_string()) throw ValidationError(where_ + "." + key + " must be a string");
        out_[key] = v;
        return v.get<std::string>();
    }

    json raw(const std::string& key, json def)
    {
        json v = take(key, std::move(def));
        out_[key] = v;
        return v;
    }

    void put(const std::string& key, json v) { out_[key] = std::move(v); }

    json finish()
    {
        if (src_.is_object())
            for (const auto& [k, v] : src_.items())
                if (!used_.count(k)) throw ValidationError("unknown key '" + k + "' in " + where_);
        return out_;
    }

private:
    json take(const std::string& key, json def)
    {
        used_.insert(key);
        if (src_.is_object() && src_.contains(key)) return src_.at(key);
        return def;
    }

    json src_;
    std::string where_;
    json out_;
    std::set<std::string> used_;
};

auto positive = [](double d) { return d > 0.0; };
auto open_unit = [](double d) { return d > 0.0 && d < 1.0; };
auto above_one = [](double d) { return d > 1.0; };
auto any_number = [](double) { return true; };

const std::set<std::string> operator_names{"linf", "scalar-power", "padic", "urysohn", "heat", "tilde", "hat"};
const std::set<std::string> driver_names{"decreasing", "increasing", "general",    "sum",
                                         "periodic",   "uniqueness", "complement", "counterexample"};

json parse_operator(const json& block, const std::string& where, bool allow_constructions);

json operator_params(const std::string& name, const json& params, const std::string& where)
{
    Reader r(params, where);
    if (name == "linf") {
        r.integer("N", 64, 1, 1000000);
    } else if (name == "scalar-power") {
        r.num("alpha", 0.5, open_unit, "alpha must lie in (0,1)");
    } else if (name == "padic") {
        const long long n = r.integer("n", 1, 1, 2);
        r.integer("p", 3, 3, 1001);
        json betas = r.raw("betas", json::array());
        if (betas.empty())
            for (long long i = 0; i < n; ++i) betas.push_back(1.0);
        if (!betas.is_array() || static_cast<long long>(betas.size()) != n)
            throw ValidationError(where + ".betas must list one value per axis");
        for (const auto& b : betas)
            if (!b.is_number() || !(b.get<double>() > 0.0)) throw ValidationError("betas must be positive");
        r.put("betas", betas);
        r.num("gamma", 0.0, [](double g) { return g == 0.0 || (g > 0.0 && g < 1.0); }, "gamma must lie in (0,1)");
        r.num("eps", 0.5, open_unit, "eps must lie in (0,1)");
    } else if (name == "urysohn") {
        r.num("eta", 1.0, positive, "eta must be positive");
        r.num("alpha", 0.5, open_unit, "alpha must lie in (0,1)");
    } else if (name == "heat") {
        r.integer("panels", 8, 2, 60);
    } else if (name == "tilde" || name == "hat") {
        r.put("base", parse_operator(r.raw("base", nullptr), where + ".base", false));
        r.num("v0", 2.0, positive, "v0 must be positive");
        if (name == "hat") r.num("lambda", 0.5, open_unit, "lambda must lie in (0,1)");
    }
    return r.finish();
}

json parse_operator(const json& block, const std::string& where, bool allow_constructions)
{
    if (!block.is_object()) throw ValidationError(where + " must be an object with a name");
    Reader r(block, where);
    const std::string name = r.str("name", "");
    if (!operator_names.count(name)) throw ValidationError("unknown operator '" + name + "'");
    if (!allow_constructions && (name == "tilde" || name == "hat"))
        throw ValidationError("counterexample constructions cannot be nested");
    const json params = r.raw("params", nullptr);
    json out = r.finish();
    out["params"] = operator_params(name, params, where + ".params");
    return out;
}

json driver_params(const std::string& name, const std::string& op, const json& params, const std::string& where)
{
    Reader r(params, where);
    if (name != "counterexample") {
        r.num("v0", 1.0, positive, "v0 must be positive");
        r.integer("n0", name == "periodic" ? 2 : 1, 1, 1000);
    }
    if (name == "decreasing" || name == "sum" || name == "complement" || name == "uniqueness")
        r.num("sigma0", nullptr, open_unit, "sigma0 must lie in (0,1)");
    if (name == "increasing") r.num("r0", nullptr, above_one, "r0 must exceed 1");
    if (name == "general" || name == "uniqueness" || name == "counterexample") {
        const json d1 = name == "general" ? json(nullptr) : json(0.5);
        const json d2 = name == "general" ? json(nullptr) : json(2.0);
        r.num("r1", d1, open_unit, "r1 must lie in (0,1)");
        r.num("r2", d2, above_one, "r2 must exceed 1");
    }
    if (name == "sum") {
        const double c0 = r.num("C0", 0.5, positive, "C0 must be positive");
        const std::string a0 = r.str("a0", "capped");
        if (a0 != "capped" && a0 != "zero") throw ValidationError("a0 must be 'capped' or 'zero'");
        r.num("a0_scale", c0, [c0](double s) { return s >= 0.0 && s <= c0; }, "a0_scale must lie in [0, C0]");
    }
    if (name == "periodic") {
        const long long m0 = r.integer("m0", 2, 1, 1000);
        const long long i0 = r.integer("i0", 0, 0, m0 - 1);
        r.integer("j0", m0 > 1 ? 1 : 0, 0, m0 - 1);
        (void)i0;
        r.num("d1", 0.5, open_unit, "d1 must lie in (0,1)");
        r.num("d2", 2.0, above_one, "d2 must exceed 1");
    }
    if (name == "uniqueness" || name == "counterexample") r.integer("starts", 8, 2, 100000);
    if (name == "decreasing" || name == "increasing" || name == "general") {
        // Optional multi-start probe around the computed fixed point.
        r.integer("probe_starts", 0, 0, 100000);
        r.num("probe_r1", 0.5, open_unit, "probe_r1 must lie in (0,1)");
        r.num("probe_r2", 2.0, above_one, "probe_r2 must exceed 1");
    }
    if (name == "complement") {
        r.num("gamma0", 0.25, open_unit, "gamma0 must lie in (0,1)");
        r.num("c", nullptr, positive, "c must be positive");
    }
    if (name == "counterexample") {
        if (op != "tilde" && op != "hat") throw ValidationError("counterexample driver needs operator tilde or hat");
        r.integer("samples", 200, 1, 1000000);
        r.integer("outside_samples", 40, 0, 1000000);
    }
    return r.finish();
}

json parse_grid(const json& g)
{
    if (g.is_null()) return nullptr;
    Reader r(g, "grid");
    const json axes = r.raw("axes", nullptr);
    r.finish();
    if (!axes.is_array() || axes.empty() || axes.size() > 2) throw ValidationError("grid.axes must list 1 or 2 axes");
    json out = json::array();
    for (std::size_t k = 0; k < axes.size(); ++k) {
        Reader a(axes[k], "grid.axes[" + std::to_string(k) + "]");
        const double lo = a.num("lo", nullptr, any_number, "");
        const double hi = a.num("hi", nullptr, any_number, "");
        a.integer("n", 2, 2, 100000);
        if (!axes[k].contains("lo") || !axes[k].contains("hi")) throw ValidationError("grid axes need lo and hi");
        if (!(hi > lo)) throw ValidationError("grid axis upper bound must exceed lower bound");
        out.push_back(a.finish());
    }
    return {{"axes", out}};
}

} // namespace

json ExperimentConfig::to_json() const
{
    return {{"name", name},
            {"operator", {{"name", op}, {"params", op_params}}},
            {"driver", {{"name", driver}, {"params", driver_params}}},
            {"grid", grid},
            {"tolerances",
             {{"tol", tolerances.tol},
              {"order_tol", tolerances.order_tol},
              {"floor", tolerances.floor},
              {"max_iter", tolerances.max_iter}}},
            {"output", {{"dir", output_dir}}},
            {"seed", seed},
            {"audit_samples", audit_samples}};
}

ExperimentConfig parse_config(const json& j)
{
    if (!j.is_object()) throw ValidationError("config must be a JSON object");
    Reader r(j, "config");
    ExperimentConfig c;
    c.name = r.str("name", "experiment");

    const json op = parse_operator(r.raw("operator", nullptr), "operator", true);
    c.op = op.at("name").get<std::string>();
    c.op_params = op.at("params");

    const json drv = r.raw("driver", nullptr);
    if (!drv.is_object()) throw ValidationError("driver must be an object with a name");
    {
        Reader d(drv, "driver");
        c.driver = d.str("name", "");
        if (!driver_names.count(c.driver)) throw ValidationError("unknown driver '" + c.driver + "'");
        d.raw("params", nullptr);
        d.finish();
    }
    c.driver_params = driver_params(c.driver, c.op, drv.contains("params") ? drv.at("params") : json(nullptr),
                                    "driver.params");

    c.grid = parse_grid(r.raw("grid", nullptr));
    if (!c.grid.is_null() && (c.op == "linf" || c.op == "scalar-power" || c.op == "tilde" || c.op == "hat"))
        throw ValidationError("operator '" + c.op + "' does not take a grid block");

    {
        Reader t(r.raw("tolerances", nullptr), "tolerances");
        c.tolerances.tol = t.num("tol", 1e-12, positive, "tol must be positive");
        c.tolerances.order_tol = t.num("order_tol", 1e-10, [](double d) { return d >= 0.0; },
                                       "order_tol must be nonnegative");
        c.tolerances.floor = t.num("floor", 1e-8, positive, "floor must be positive");
        c.tolerances.max_iter = static_cast<int>(t.integer("max_iter", 10000, 1, 100000000));
        t.finish();
    }
    {
        Reader o(r.raw("output", nullptr), "output");
        c.output_dir = o.str("dir", ".");
        o.finish();
    }
    c.seed = static_cast<std::uint64_t>(r.integer("seed", 1, 0, std::numeric_limits<long long>::max()));
    c.audit_samples = static_cast<int>(r.integer("audit_samples", 100, 0, 1000000));
    r.finish();
    return c;
}

ExperimentConfig load_config(const std::string& source)
{
    if (!std::filesystem::exists(source)) {
        for (const auto& b : builtin_experiments())
            if (b.name == source) return parse_config(b.config);
        throw IoError("no such config file or built-in experiment: " + source);
    }
    std::ifstream is(source);
    if (!is) throw IoError("cannot read " + source);
    json j;
    try {
        j = json::parse(is);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("invalid JSON in ") + source + ": " + e.what());
    }
    return parse_config(j);
}

} // namespace conefix
