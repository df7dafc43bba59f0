#include <CLI11.hpp>

#include <iostream>

#include "conefix/errors.hpp"
#include "conefix/experiment.hpp"

using namespace conefix;

namespace {

int print_status(const RunOutcome& r)
{
    const auto& rep = r.report;
    std::cout << rep.value("name", "") << ": " << (r.exit_code == 0 ? "ok" : r.message) << '\n';
    if (rep.contains("checklist"))
        for (const auto& c : rep.at("checklist"))
            std::cout << "  " << c.at("check").get<std::string>() << ": " << c.at("result").get<std::string>() << '\n';
    if (r.exit_code != 0) std::cerr << "error: " << r.message << '\n';
    return r.exit_code;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Fixed points of monotone concave operators on cones"};
    app.require_subcommand(1);

    std::string source;
    std::string out_dir;
    auto* run = app.add_subcommand("run", "run a config file or a built-in experiment");
    run->add_option("config", source, "config file or built-in name")->required();
    run->add_option("-o,--output-dir", out_dir, "override the output directory");

    auto* list = app.add_subcommand("list", "list built-in experiments");

    std::string vsource;
    auto* validate = app.add_subcommand("validate", "check a config and print it fully resolved");
    validate->add_option("config", vsource, "config file or built-in name")->required();

    std::string sname;
    auto* show = app.add_subcommand("show", "print the config of a built-in experiment");
    show->add_option("name", sname, "built-in name")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*list) {
            for (const auto& b : builtin_experiments()) std::cout << b.name << "  " << b.description << '\n';
            return 0;
        }
        if (*show) {
            for (const auto& b : builtin_experiments())
                if (b.name == sname) {
                    std::cout << b.config.dump(2) << '\n';
                    return 0;
                }
            std::cerr << "error: no built-in experiment named " << sname << '\n';
            return 1;
        }
        if (*validate) {
            const ExperimentConfig cfg = load_config(vsource);
            std::cout << cfg.to_json().dump(2) << '\n';
            return 0;
        }
        ExperimentConfig cfg = load_config(source);
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        return print_status(run_experiment(cfg));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
