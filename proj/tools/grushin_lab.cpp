#include <algorithm>
#include <cmath>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "grushin/experiments.hpp"
#include "grushin/io.hpp"

namespace {

int inspect_field(const std::string& path) {
    const grushin::Field field = grushin::read_field(path);
    const grushin::GridSpec& grid = field.grid;
    std::cout << "grid: N=" << grid.params.x_dim << " l=" << grid.params.y_dim
              << " gamma=" << grushin::format_double(grid.params.gamma) << "\n";
    std::cout << "axes:";
    for (int a = 0; a < grid.axes(); ++a) {
        std::cout << " [" << grushin::format_double(grid.lo[a]) << ", "
                  << grushin::format_double(grid.hi[a]) << "] x" << grid.dims[a];
    }
    std::cout << "\nnodes: " << grid.node_count() << "\n";

    double min_v = field.values[0], max_v = field.values[0], sum_sq = 0.0;
    for (double v : field.values) {
        min_v = std::min(min_v, v);
        max_v = std::max(max_v, v);
        sum_sq += v * v;
    }
    std::cout << "min: " << grushin::format_double(min_v) << "\n";
    std::cout << "max: " << grushin::format_double(max_v) << "\n";
    std::cout << "l2: " << grushin::format_double(std::sqrt(sum_sq)) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"grushin-lab: numerical experiments for the Grushin operator"};
    app.require_subcommand(1);

    std::string config_path;
    CLI::App* run = app.add_subcommand("run", "run an experiment from a key=value config file");
    run->add_option("config", config_path, "path to the config file")->required();

    std::string suite;
    CLI::App* verify = app.add_subcommand("verify", "run a built-in verification suite");
    verify->add_option("suite", suite, "identities | kelvin | operator | solver | all")
        ->required();

    std::string field_path;
    CLI::App* inspect = app.add_subcommand("inspect", "print the header and stats of a field file");
    inspect->add_option("field", field_path, "path to a GRSH1 field file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return grushin::run_experiment_file(config_path, std::cout);
        }
        if (verify->parsed()) {
            return grushin::verify_suite(suite, std::cout) == 0 ? 0 : 1;
        }
        if (inspect->parsed()) {
            return inspect_field(field_path);
        }
    } catch (const grushin::ConfigParse& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 2;
    } catch (const grushin::BadMagic& err) {
        std::cerr << "file error: " << err.what() << "\n";
        return 2;
    } catch (const grushin::HeaderMismatch& err) {
        std::cerr << "file error: " << err.what() << "\n";
        return 2;
    } catch (const grushin::TruncatedPayload& err) {
        std::cerr << "file error: " << err.what() << "\n";
        return 2;
    } catch (const grushin::Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}
