// Command-line front end: block decomposition and reconstruction of JSON
// matrices, corner-norm and order queries, block-sum products, named
// verification suites, truncated-corner convergence studies, and the
// C(X) (x) M_n center report.
//
// Exit codes: 0 success, 2 usage or parse failure, 3 violated precondition,
// 4 verification failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "iod/iod.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitVerification = 4;

iod::Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw iod::InvalidInput("cannot open '" + path + "'");
    iod::Json j;
    in >> j;  // nlohmann parse errors propagate
    return j;
}

iod::ProjectionFamily load_family(const std::string& path) {
    return iod::family_from_json(load_json(path));
}

iod::IodElement load_element(const std::string& path) {
    return iod::element_from_json(load_json(path),
                                  [](const std::string& ref) { return load_family(ref); });
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw iod::InvalidInput("cannot write '" + out_path + "'");
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"block order decompositions of complex matrices"};
    app.require_subcommand(1);
    app.fallthrough();

    double tol = iod::kDefaultTol;
    std::uint64_t seed = 20240501;
    std::string out_path;
    app.add_option("--tol", tol, "numeric tolerance")->capture_default_str();
    app.add_option("--seed", seed, "random seed")->capture_default_str();
    app.add_option("--out", out_path, "output file (default: stdout)");

    std::string input_path, family_path, matrix_path, lhs_path, rhs_path;
    auto* cmd_decompose = app.add_subcommand("decompose", "matrix -> block element");
    cmd_decompose->add_option("--input", input_path, "matrix JSON")->required();
    cmd_decompose->add_option("--family", family_path, "family JSON")->required();

    auto* cmd_reconstruct = app.add_subcommand("reconstruct", "block element -> matrix");
    cmd_reconstruct->add_option("--input", input_path, "element JSON")->required();

    auto* cmd_norm = app.add_subcommand("norm", "corner-sup norm of an element");
    cmd_norm->add_option("--input", input_path, "element JSON");
    cmd_norm->add_option("--matrix", matrix_path, "matrix JSON (with --family)");
    cmd_norm->add_option("--family", family_path, "family JSON (with --matrix)");

    auto* cmd_order = app.add_subcommand("order", "corner-positivity comparison");
    cmd_order->add_option("--lhs", lhs_path, "element JSON")->required();
    cmd_order->add_option("--rhs", rhs_path, "element JSON")->required();

    auto* cmd_star = app.add_subcommand("star", "block-sum product");
    cmd_star->add_option("--lhs", lhs_path, "element JSON")->required();
    cmd_star->add_option("--rhs", rhs_path, "element JSON")->required();

    std::string suite_name;
    std::size_t trials = 50;
    iod::Index dim = 0;
    auto* cmd_verify = app.add_subcommand("verify", "run a named property suite");
    cmd_verify->add_option("--suite", suite_name, "suite name")->required();
    cmd_verify->add_option("--trials", trials, "instances")->capture_default_str();
    cmd_verify->add_option("--dim", dim, "dimension (0: random 4..16)")
        ->capture_default_str();

    std::string family_name, sequence = "const";
    iod::Index unit_i = 0, unit_j = 0, width = 1, max_n = 64;
    double value = 1.0, bound = 1.0;
    auto* cmd_converge =
        app.add_subcommand("converge", "truncated corner-norm study of a lazy family");
    cmd_converge->add_option("--family", family_name, "unit|diagonal|band|shift")
        ->required();
    cmd_converge->add_option("--i", unit_i, "unit row index")->capture_default_str();
    cmd_converge->add_option("--j", unit_j, "unit column index")->capture_default_str();
    cmd_converge->add_option("--width", width, "band width")->capture_default_str();
    cmd_converge->add_option("--value", value, "coefficient value")
        ->capture_default_str();
    cmd_converge->add_option("--sequence", sequence, "const|harmonic|linear")
        ->capture_default_str();
    cmd_converge->add_option("--bound", bound, "claimed corner-norm bound")
        ->capture_default_str();
    cmd_converge->add_option("--max-n", max_n, "largest truncation size")
        ->capture_default_str();

    iod::Index model_m = 1, model_n = 1, cap = 64;
    auto* cmd_center = app.add_subcommand("center", "C(X) (x) M_n structure report");
    cmd_center->add_option("--m", model_m, "points of X")->required();
    cmd_center->add_option("--n", model_n, "matrix size")->required();
    cmd_center->add_option("--cap", cap, "largest allowed m*n")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (cmd_decompose->parsed()) {
            const iod::CMatrix a = iod::matrix_from_json(load_json(input_path));
            auto family = std::make_shared<const iod::ProjectionFamily>(
                load_family(family_path));
            const iod::IodElement x = iod::decompose(a, family);
            write_output(iod::element_to_json(x).dump(2) + "\n", out_path);
            return kExitOk;
        }
        if (cmd_reconstruct->parsed()) {
            const iod::IodElement x = load_element(input_path);
            write_output(iod::matrix_to_json(iod::reconstruct(x)).dump(2) + "\n",
                         out_path);
            return kExitOk;
        }
        if (cmd_norm->parsed()) {
            std::optional<iod::IodElement> x;
            if (!input_path.empty()) {
                x = load_element(input_path);
            } else if (!matrix_path.empty() && !family_path.empty()) {
                auto family = std::make_shared<const iod::ProjectionFamily>(
                    load_family(family_path));
                x = iod::decompose(iod::matrix_from_json(load_json(matrix_path)), family);
            } else {
                throw iod::InvalidInput("norm needs --input or --matrix with --family");
            }
            const iod::Json j{{"iod_norm", iod::iod_norm(*x)},
                              {"spectral_norm", iod::spectral_norm(iod::reconstruct(*x))}};
            write_output(j.dump(2) + "\n", out_path);
            return kExitOk;
        }
        if (cmd_order->parsed()) {
            const iod::IodElement x = load_element(lhs_path);
            const iod::IodElement y = load_element(rhs_path);
            const iod::Json j{{"leq", iod::leq(x, y, tol)}};
            write_output(j.dump(2) + "\n", out_path);
            return kExitOk;
        }
        if (cmd_star->parsed()) {
            const iod::IodElement x = load_element(lhs_path);
            const iod::IodElement y = load_element(rhs_path);
            write_output(iod::element_to_json(iod::star_product(x, y)).dump(2) + "\n",
                         out_path);
            return kExitOk;
        }
        if (cmd_verify->parsed()) {
            const iod::SuiteResult r = iod::run_suite(suite_name, trials, seed, dim);
            const iod::Json j{{"suite", r.suite},
                              {"trials", r.trials},
                              {"failures", r.failures},
                              {"worst_residual", r.worst_residual},
                              {"seed", r.seed}};
            const std::string text = j.dump(2) + "\n";
            std::cout << text;
            if (!out_path.empty()) write_output(text, out_path);
            return r.failures == 0 ? kExitOk : kExitVerification;
        }
        if (cmd_converge->parsed()) {
            iod::BuiltinParams params;
            params.i = unit_i;
            params.j = unit_j;
            params.width = width;
            params.value = iod::Complex(value, 0.0);
            params.sequence = sequence;
            params.claimed_bound = bound;
            const iod::LazyBlockFamily f = iod::builtin_family(family_name, params);
            const iod::TruncationReport report = iod::certify_bound(f, max_n);
            write_output(report.to_csv(), out_path);
            if (report.violation) {
                std::cerr << "bound " << f.claimed_bound << " refuted at n = "
                          << report.violation->n << " (excess "
                          << report.violation->excess << ")\n";
                return kExitVerification;
            }
            std::cerr << "certified up to n = " << report.sizes.back() << "\n";
            return kExitOk;
        }
        if (cmd_center->parsed()) {
            if (model_m * model_n > cap)
                throw iod::Precondition("m*n exceeds cap");
            const auto report = iod::verify_type_In(iod::build_cx_mn(model_m, model_n));
            write_output(iod::type_in_report_to_json(report).dump(2) + "\n", out_path);
            return report.passes(model_m) ? kExitOk : kExitVerification;
        }
        throw iod::InvalidInput("no subcommand");
    } catch (const iod::Precondition& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const iod::NotConverged& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const iod::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const iod::Json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
