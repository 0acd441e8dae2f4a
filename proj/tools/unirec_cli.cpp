// unirec: compose, decompose, sample, verify and fit unitary matrices over
// JSON files.
//
// Exit codes: 0 ok, 1 I/O failure, 2 malformed input or flags,
//             3 verification failure, 4 non-finite numeric input.

#include <cstdint>
#include <exception>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "unirec/io.hpp"
#include "unirec/unirec.hpp"

namespace {

enum ExitCode : int {
    kOk = 0,
    kIoFailure = 1,
    kMalformed = 2,
    kVerificationFailure = 3,
    kNumericInput = 4,
};

using unirec::io::json;

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const unirec::io::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIoFailure;
    } catch (const unirec::io::NumericInputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumericInput;
    } catch (const unirec::NotUnitaryError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kVerificationFailure;
    } catch (const unirec::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kMalformed;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kMalformed;
    }
}

unirec::ParameterSet read_parameters(const std::string& path) {
    auto parsed = unirec::io::parameters_from_json(unirec::io::read_json_file(path));
    if (parsed.shifted) {
        std::cerr << "warning: beta[0] was nonzero; shifted into alpha so that beta[0] = 0\n";
    }
    return std::move(parsed.parameters);
}

unirec::ComplexMatrix read_matrix(const std::string& path) {
    return unirec::io::matrix_from_json(unirec::io::read_json_file(path));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Recursive parameterisation of unitary matrices"};
    app.require_subcommand(1);
    app.fallthrough();

    std::optional<double> tolerance;
    std::uint64_t seed = 0;
    app.add_option("--tolerance", tolerance, "Unitarity tolerance (decompose: 1e-8, verify: 1e-8)")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "Random seed (sample, fit)");

    std::string in_path;
    std::string out_path;

    auto* compose_cmd = app.add_subcommand("compose", "ParameterFile -> MatrixFile");
    compose_cmd->add_option("input", in_path, "ParameterFile")->required();
    compose_cmd->add_option("output", out_path, "MatrixFile to write")->required();

    bool raw = false;
    auto* decompose_cmd = app.add_subcommand("decompose", "MatrixFile -> ParameterFile");
    decompose_cmd->add_option("input", in_path, "MatrixFile")->required();
    decompose_cmd->add_option("output", out_path, "ParameterFile to write")->required();
    decompose_cmd->add_flag("--raw", raw, "Write the raw peel (vectors and residual phases psi)");

    long long n = 0;
    std::string matrix_out;
    auto* sample_cmd = app.add_subcommand("sample", "Random ParameterFile");
    sample_cmd->add_option("output", out_path, "ParameterFile to write")->required();
    sample_cmd->add_option("--n", n, "Dimension")->required();
    sample_cmd->add_option("--matrix-out", matrix_out, "Also write the composed MatrixFile here");

    auto* verify_cmd = app.add_subcommand("verify", "Unitarity report for a MatrixFile");
    verify_cmd->add_option("input", in_path, "MatrixFile")->required();

    unirec::FitConfig fit_config;
    auto* fit_cmd = app.add_subcommand("fit", "Best-fit ParameterFile for any square MatrixFile");
    fit_cmd->add_option("input", in_path, "Target MatrixFile")->required();
    fit_cmd->add_option("output", out_path, "ParameterFile to write")->required();
    fit_cmd->add_option("--max-iterations", fit_config.max_iterations)->check(CLI::PositiveNumber);
    fit_cmd->add_option("--gradient-step", fit_config.gradient_step)->check(CLI::PositiveNumber);
    fit_cmd->add_option("--learning-rate", fit_config.learning_rate)->check(CLI::PositiveNumber);
    fit_cmd->add_option("--convergence-tol", fit_config.convergence_tol)->check(CLI::PositiveNumber);
    fit_cmd->add_option("--restarts", fit_config.seed_count, "Number of restarts")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kMalformed;
    }

    if (compose_cmd->parsed()) {
        return guarded([&] {
            const unirec::ComplexMatrix x = unirec::compose(read_parameters(in_path));
            unirec::io::write_json_file(out_path, unirec::io::matrix_to_json(x));
            std::cerr << "unitarity deviation: " << unirec::unitarity_deviation(x) << '\n';
            return kOk;
        });
    }

    if (decompose_cmd->parsed()) {
        return guarded([&] {
            const unirec::ComplexMatrix x = read_matrix(in_path);
            if (!unirec::is_finite(x)) throw unirec::io::NumericInputError("matrix has non-finite entries");
            const unirec::DecomposeOptions options{tolerance.value_or(unirec::kDefaultInputTolerance)};
            const unirec::RawDecomposition decomposition = unirec::decompose_raw(x, options);
            const json doc = raw ? unirec::io::raw_to_json(decomposition)
                                 : unirec::io::parameters_to_json(unirec::canonicalize(decomposition));
            unirec::io::write_json_file(out_path, doc);
            return kOk;
        });
    }

    if (sample_cmd->parsed()) {
        if (n < 1) {
            std::cerr << "error: --n must be at least 1\n";
            return kMalformed;
        }
        return guarded([&] {
            const unirec::ParameterSet p = unirec::sample_parameters(static_cast<std::size_t>(n), seed);
            unirec::io::write_json_file(out_path, unirec::io::parameters_to_json(p));
            if (!matrix_out.empty()) unirec::io::write_json_file(matrix_out, unirec::io::matrix_to_json(unirec::compose(p)));
            return kOk;
        });
    }

    if (verify_cmd->parsed()) {
        return guarded([&] {
            const unirec::ComplexMatrix x = read_matrix(in_path);
            const unirec::UnitaryCheckReport report = unirec::verify(x, tolerance.value_or(1e-8));
            std::cout << unirec::io::report_to_json(report).dump(2) << '\n';
            return report.pass ? kOk : kVerificationFailure;
        });
    }

    if (fit_cmd->parsed()) {
        return guarded([&] {
            const unirec::ComplexMatrix target = read_matrix(in_path);
            fit_config.rng_seed = seed;
            const unirec::FitResult result = unirec::fit(target, fit_config);
            unirec::io::write_json_file(out_path, unirec::io::parameters_to_json(result.parameters));
            std::cout << json{{"final_distance", result.distance}}.dump() << '\n';
            std::cerr << "best restart: " << result.best_restart << '\n';
            return kOk;
        });
    }

    return kMalformed;
}
