#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "cmcgraph/errors.hpp"
#include "cmcgraph/io.hpp"

int main(int argc, char** argv) {
    CLI::App app{"constant mean curvature radial graphs over spherical caps"};

    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
    std::string grid_spec;
    bool quiet = false;

    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--set", overrides, "override a config key, KEY=VALUE (repeatable)");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--grid", grid_spec, "grid sizes NTHETA,NPHI");
    app.add_flag("--quiet", quiet, "suppress progress output");

    CLI11_PARSE(app, argc, argv);

    cmc::RunConfig config;
    try {
        if (!config_path.empty()) config = cmc::load_config(config_path);
        for (const std::string& kv : overrides) cmc::apply_override(config, kv);
        if (!grid_spec.empty()) cmc::apply_grid_spec(config, grid_spec);
        if (!out_dir.empty()) config.out_dir = out_dir;
        if (quiet) config.quiet = true;
    } catch (const cmc::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return cmc::kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return cmc::kExitConfig;
    }

    return cmc::run(config);
}
