#include "ratclust/errors.hpp"
#include "ratclust/experiments.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using ratclust::ExitCode;
using ratclust::ExperimentManifest;

struct Leaf {
    std::string subcommand;
    std::vector<std::pair<std::string, std::string>> options;  // flag name, parameter key
    std::map<std::string, std::string> fixed;
};

struct Common {
    std::string out = "out";
    bool check = false;
    bool csv_only = false;
    std::uint64_t seed = 1;
};

int finish(const ratclust::ExperimentResult& result) {
    for (const auto& line : result.report) {
        if (result.status == ExitCode::ok || result.status == ExitCode::check_failed)
            std::cout << line << "\n";
        else
            std::cerr << line << "\n";
    }
    for (const auto& path : result.artifacts) std::cout << "wrote " << path << "\n";
    return static_cast<int>(result.status);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rational approximation with clustered poles: experiments and figures"};
    app.require_subcommand(1);

    Common common;
    std::map<std::string, std::string> values;
    std::string manifest_path;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", common.out, "Output directory")->capture_default_str();
        cmd->add_flag("--check", common.check, "Exit 1 if any built-in check fails");
        cmd->add_flag("--csv-only", common.csv_only, "Skip gnuplot scripts");
        cmd->add_option("--seed", common.seed, "Seed for random sampling")->capture_default_str();
    };

    std::vector<std::pair<CLI::App*, Leaf>> leaves;
    auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help, Leaf spec) {
        CLI::App* cmd = parent->add_subcommand(name, help);
        add_common(cmd);
        for (const auto& [flag, key] : spec.options) cmd->add_option("--" + flag, values[key]);
        leaves.emplace_back(cmd, std::move(spec));
        return cmd;
    };

    auto* approx = app.add_subcommand("approx", "Approximation of sqrt(x) on [0,1]");
    approx->require_subcommand(1);
    leaf(approx, "sweep", "Error against n for one family",
         {"approx sweep", {{"family", "family"}, {"nmin", "nmin"}, {"nmax", "nmax"}}, {}});
    leaf(approx, "fig1", "Six families of sqrt(x) approximations", {"approx fig1", {{"nmax", "nmax"}}, {}});
    leaf(approx, "fig12", "Lawson fits with uniform and tapered poles", {"approx fig12", {{"nmax", "nmax"}}, {}});

    auto* cluster = app.add_subcommand("cluster", "Pole and node distributions");
    cluster->require_subcommand(1);
    leaf(cluster, "dump", "Distances and taper diagnostics",
         {"cluster dump", {{"kind", "kind"}, {"n", "n"}, {"sigma", "sigma"}, {"step", "h"}}, {}});

    auto* potential = app.add_subcommand("potential", "Potential-theory diagnostics");
    potential->require_subcommand(1);
    leaf(potential, "phi-curves", "|phi| along E and Gamma for fitted configurations",
         {"potential phi-curves", {{"n", "n"}}, {}});
    leaf(potential, "strip", "Strip model: Poisson integral against bilinear solution",
         {"potential strip",
          {{"alpha", "alpha"}, {"n", "n"}, {"log-eps", "log_eps"}, {"y", "y"}, {"count", "count"}},
          {}});

    auto* quad = app.add_subcommand("quad", "tanh and tanh-sinh quadrature");
    quad->require_subcommand(1);
    leaf(quad, "sweep", "Errors for sqrt(1+x)", {"quad sweep", {{"nmin", "nmin"}, {"nmax", "nmax"}}, {}});
    leaf(quad, "nodes", "Nodes, weights and endpoint gaps", {"quad nodes", {{"kind", "kind"}, {"n", "n"}, {"step", "h"}}, {}});
    leaf(quad, "gtm", "Contour-integral error identity and 1-norms", {"quad gtm", {{"nmax", "nmax"}}, {}});

    auto* lightning = app.add_subcommand("lightning", "Lightning Laplace solver");
    lightning->require_subcommand(1);
    leaf(lightning, "solve", "Dirichlet problem on a polygon",
         {"lightning solve",
          {{"polygon", "polygon"},
           {"data", "data"},
           {"data-file", "data_file"},
           {"z0", "z0"},
           {"target", "target"},
           {"nstart", "nstart"},
           {"nmax", "nmax"}},
          {}});

    leaf(&app, "fig1", "Six families of sqrt(x) approximations", {"approx fig1", {{"nmax", "nmax"}}, {}});
    leaf(&app, "fig4", "Lightning solver on the snowflake",
         {"lightning solve", {{"nmax", "nmax"}, {"target", "target"}}, {{"polygon", "snowflake"}, {"data", "logabs"}}});
    leaf(&app, "fig6", "Tapered clustering diagnostics", {"cluster dump", {{"n", "n"}}, {{"kind", "all"}}});
    leaf(&app, "fig10", "|phi| curves for uniform and tapered fits", {"potential phi-curves", {{"n", "n"}}, {}});
    leaf(&app, "fig12", "Uniform against tapered linear minimax", {"approx fig12", {{"nmax", "nmax"}}, {}});
    leaf(&app, "fig13", "tanh and tanh-sinh errors for sqrt(1+x)", {"quad sweep", {{"nmax", "nmax"}}, {}});
    leaf(&app, "fig14", "|phi - r| and its 1-norm on [-2,-1]", {"quad gtm", {{"nmax", "nmax"}}, {}});

    auto* replay = app.add_subcommand("replay", "Re-run a manifest.json");
    replay->add_option("--manifest", manifest_path, "Manifest file")->required();
    std::string replay_out;
    replay->add_option("--out", replay_out, "Override the manifest output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ExtrasError& e) {
        app.exit(e);
        // stray flags are bad parameters, stray words are unknown subcommands
        const std::string what = e.what();
        const auto list = what.find(':');
        const bool flag = list != std::string::npos && what.find(" -", list) != std::string::npos;
        return static_cast<int>(flag ? ExitCode::invalid_parameters : ExitCode::unknown_subcommand);
    } catch (const CLI::RequiredError& e) {
        app.exit(e);
        const std::string what = e.what();
        return static_cast<int>(what.find("subcommand") != std::string::npos ? ExitCode::unknown_subcommand
                                                                              : ExitCode::invalid_parameters);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(ExitCode::invalid_parameters);
    }

    if (replay->parsed()) {
        std::ifstream in(manifest_path);
        if (!in) {
            std::cerr << "cannot read manifest " << manifest_path << "\n";
            return static_cast<int>(ExitCode::io_failure);
        }
        std::stringstream text;
        text << in.rdbuf();
        ExperimentManifest manifest;
        try {
            manifest = ExperimentManifest::from_json(text.str());
        } catch (const ratclust::Error& e) {
            std::cerr << e.what() << "\n";
            return static_cast<int>(ExitCode::invalid_parameters);
        }
        if (!replay_out.empty()) manifest.out_dir = replay_out;
        return finish(ratclust::run(manifest));
    }

    for (const auto& [cmd, spec] : leaves) {
        if (!cmd->parsed()) continue;
        ExperimentManifest manifest;
        manifest.name = cmd->get_name();
        manifest.subcommand = spec.subcommand;
        manifest.parameters = spec.fixed;
        for (const auto& [flag, key] : spec.options)
            if (cmd->count("--" + flag) > 0) manifest.parameters[key] = values[key];
        manifest.out_dir = common.out;
        manifest.seed = common.seed;
        manifest.check = common.check;
        manifest.csv_only = common.csv_only;
        return finish(ratclust::run(manifest));
    }
    return static_cast<int>(ExitCode::unknown_subcommand);
}
