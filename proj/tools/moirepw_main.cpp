#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "moirepw/experiment.hpp"

namespace fs = std::filesystem;
using moirepw::ConfigError;

namespace {

int fail(const fs::path& out_dir, const std::vector<fs::path>& partial,
         const std::exception& e) {
    // partial outputs are removed; error.json is the only artifact left
    for (const fs::path& p : partial) {
        std::error_code ec;
        fs::remove(p, ec);
    }
    int code = dynamic_cast<const ConfigError*>(&e) != nullptr ? 2 : 1;
    nlohmann::json err = {
        {"error", moirepw::error_name(e)},
        {"message", e.what()},
        {"exit_code", code},
    };
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    try {
        moirepw::write_text_file(out_dir / "error.json", err.dump(2) + "\n");
    } catch (const std::exception&) {
        // out dir unusable; the message below still reaches stderr
    }
    std::fprintf(stderr, "moirepw: %s: %s\n", moirepw::error_name(e), e.what());
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Plane-wave landscape and spectral toolkit for incommensurate bilayers"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::vector<std::string> overrides;
    int threads = 0;
    long long seed = -1;
    bool dump_matrix = false;

    app.add_option("--config", config_path, "Config file (required except for example1/example2)");
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--set", overrides, "Override config entries, key=value")->allow_extra_args(false);
    app.add_option("--threads", threads, "OpenMP thread count (0 = runtime default)");
    app.add_option("--seed", seed, "Override the random seed");
    app.add_flag("--dump-matrix", dump_matrix, "Also write the assembled Hamiltonian in coordinate form");

    for (const std::string& sub : moirepw::known_subcommands())
        app.add_subcommand(sub)->fallthrough();

    CLI11_PARSE(app, argc, argv);
    std::string sub = app.get_subcommands().front()->get_name();

#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif

    std::vector<fs::path> written;
    try {
        moirepw::FlatConfig flat;
        if (sub == "example1") flat = moirepw::example1_recipe();
        else if (sub == "example2") flat = moirepw::example2_recipe();
        else if (config_path.empty()) throw ConfigError("--config is required for '" + sub + "'");
        else flat = moirepw::parse_config_file(config_path);
        if (!config_path.empty() && (sub == "example1" || sub == "example2")) {
            // recipe base, file entries override it
            moirepw::FlatConfig file = moirepw::parse_config_file(config_path);
            for (const auto& [k, v] : file) flat[k] = v;
        }
        for (const std::string& o : overrides) moirepw::apply_override(flat, o);
        if (seed >= 0) flat["seed"] = std::to_string(seed);
        if (dump_matrix) flat["dump_matrix"] = "true";

        moirepw::ExperimentConfig cfg = moirepw::validate_config(flat);
        moirepw::run_subcommand(sub, cfg, out_dir, written);
    } catch (const std::exception& e) {
        return fail(out_dir, written, e);
    }
    return 0;
}
