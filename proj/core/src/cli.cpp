#include "svdup/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

#include "svdup/errors.hpp"
#include "svdup/harness.hpp"
#include "svdup/matrix_market.hpp"

namespace svdup {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

UpdateMethod parse_method(const std::string& name) {
    if (name == "rrsvd-a") return UpdateMethod::RrsvdBasic;
    if (name == "rrsvd-b") return UpdateMethod::RrsvdEnhanced;
    if (name == "zha-simon") return UpdateMethod::ZhaSimon;
    if (name == "vecharynski") return UpdateMethod::VecharynskiSV;
    throw CLI::ValidationError("--method", "unknown method '" + name + "'");
}

std::string method_name(UpdateMethod m) {
    switch (m) {
        case UpdateMethod::RrsvdBasic: return "rrsvd-a";
        case UpdateMethod::RrsvdEnhanced: return "rrsvd-b";
        case UpdateMethod::ZhaSimon: return "zha-simon";
        case UpdateMethod::VecharynskiSV: return "vecharynski";
    }
    return "?";
}

void write_report_csv(std::ostream& out, const UpdateReport& report) {
    out << "i,sigma,rel_err,residual\n";
    for (std::size_t i = 0; i < report.sigma.size(); ++i) {
        out << (i + 1) << "," << fmt(report.sigma[i]) << ",";
        if (report.rel_err) out << fmt((*report.rel_err)[i]);
        out << ",";
        if (report.residual) out << fmt((*report.residual)[i]);
        out << "\n";
    }
}

void emit_csv(const std::string& path, const UpdateReport& report) {
    if (path.empty()) {
        write_report_csv(std::cout, report);
        return;
    }
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open '" + path + "' for writing", 0);
    write_report_csv(out, report);
}

nlohmann::json report_json(const UpdateReport& report) {
    nlohmann::json j;
    j["sigma"] = report.sigma;
    if (report.rel_err) j["rel_err"] = *report.rel_err;
    if (report.residual) j["residual"] = *report.residual;
    j["max_rel_err"] = report.max_rel_err();
    j["max_residual"] = report.max_residual();
    j["flops"] = {{"build_z", report.flops.build_z},
                  {"projected_solve", report.flops.projected_solve},
                  {"recover_v", report.flops.recover_v},
                  {"total", report.flops.total}};
    j["delta"] = report.lanczos_steps;
    j["wall_time"] = report.wall_time;
    return j;
}

nlohmann::json config_json(const SequenceConfig& cfg, const std::string& matrix_path,
                           const std::string& direction) {
    nlohmann::json j;
    j["matrix"] = matrix_path;
    j["k"] = cfg.k;
    j["phi"] = cfg.phi;
    j["method"] = method_name(cfg.method);
    if (cfg.r) j["r"] = *cfg.r;
    j["lambda_factor"] = cfg.lambda_factor;
    j["seed"] = cfg.seed;
    j["direction"] = direction;
    if (cfg.split_at) j["split_at"] = *cfg.split_at;
    return j;
}

void write_json(const std::string& path, const nlohmann::json& j) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open '" + path + "' for writing", 0);
    out << j.dump(2) << "\n";
}

// A column update of A is the row update of A^H with the factor roles
// swapped, so the cols direction runs the row pipeline on the transpose.
SparseMatrix load_matrix(const std::string& path, const std::string& direction) {
    SparseMatrix a = read_matrix_market(path);
    if (direction == "cols") return transpose(a);
    return a;
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Rank-k truncated SVD updating for row/column-growing sparse matrices"};
    app.require_subcommand(1);

    std::string matrix_path, method_str = "rrsvd-a", direction = "rows";
    std::string out_path, json_path, format = "mtx";
    SequenceConfig cfg;
    long long k = 10, phi = 1, seed = 0;
    long long r = -1, split_at = -1;
    double lambda_factor = 1.01;

    auto add_common = [&](CLI::App* cmd, bool with_phi) {
        cmd->add_option("matrix", matrix_path, "Matrix Market file")->required();
        cmd->add_option("--k", k, "number of singular triplets")->required();
        if (with_phi) cmd->add_option("--phi", phi, "number of update batches")->required();
        cmd->add_option("--method", method_str, "rrsvd-a|rrsvd-b|zha-simon|vecharynski");
        cmd->add_option("--r", r, "enrichment rank (defaults to k)");
        cmd->add_option("--lambda-factor", lambda_factor, "shift factor above sigma_1^2");
        cmd->add_option("--seed", seed, "master seed for every randomized component");
        cmd->add_option("--split-at", split_at, "base rows (defaults to ceil(m/2))");
        cmd->add_option("--direction", direction, "rows|cols")
            ->check(CLI::IsMember({"rows", "cols"}));
        cmd->add_option("--out", out_path, "CSV output (stdout when omitted)");
        cmd->add_option("--json", json_path, "JSON summary output");
    };

    CLI::App* update = app.add_subcommand("update", "single rank-k update of a split matrix");
    add_common(update, false);
    CLI::App* sequence = app.add_subcommand("sequence", "batched updates, one CSV per batch");
    add_common(sequence, true);

    CLI::App* oracle = app.add_subcommand("oracle", "reference singular values");
    oracle->add_option("matrix", matrix_path, "Matrix Market file")->required();
    oracle->add_option("--k", k, "number of singular values")->required();
    oracle->add_option("--out", out_path, "CSV output (stdout when omitted)");

    CLI::App* convert = app.add_subcommand("convert", "normalize a raw triple file");
    convert->add_option("raw", matrix_path, "raw dataset file")->required();
    convert->add_option("--format", format, "target format")->check(CLI::IsMember({"mtx"}));
    convert->add_option("--out", out_path, "output path (defaults to <raw>.mtx)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    cfg.k = k;
    cfg.phi = phi;
    cfg.seed = static_cast<std::uint64_t>(seed);
    cfg.lambda_factor = lambda_factor;
    if (r >= 0) cfg.r = r;
    if (split_at >= 0) cfg.split_at = split_at;

    if (update->parsed()) {
        cfg.method = parse_method(method_str);
        const SparseMatrix a = load_matrix(matrix_path, direction);
        const UpdateReport report = run_single_update(a, cfg);
        emit_csv(out_path, report);
        nlohmann::json j = report_json(report);
        j["config"] = config_json(cfg, matrix_path, direction);
        write_json(json_path, j);
        return 0;
    }

    if (sequence->parsed()) {
        cfg.method = parse_method(method_str);
        const SparseMatrix a = load_matrix(matrix_path, direction);
        const std::vector<UpdateReport> reports = run_sequence(a, cfg);

        nlohmann::json summary;
        summary["config"] = config_json(cfg, matrix_path, direction);
        summary["batches"] = nlohmann::json::array();
        for (std::size_t b = 0; b < reports.size(); ++b) {
            std::string path = out_path;
            if (!path.empty()) {
                char suffix[32];
                std::snprintf(suffix, sizeof(suffix), "_%02zu", b + 1);
                const std::size_t dotpos = path.rfind(".csv");
                if (dotpos != std::string::npos && dotpos == path.size() - 4)
                    path.insert(dotpos, suffix);
                else
                    path += suffix;
            }
            if (path.empty()) std::cout << "# batch " << (b + 1) << "\n";
            emit_csv(path, reports[b]);
            nlohmann::json bj = report_json(reports[b]);
            bj["batch"] = b + 1;
            if (!path.empty()) bj["csv"] = path;
            summary["batches"].push_back(std::move(bj));
        }
        write_json(json_path, summary);
        return 0;
    }

    if (oracle->parsed()) {
        const SparseMatrix a = read_matrix_market(matrix_path);
        const std::vector<double> sigma = reference_singular_values(a, k);
        std::ostream* out = &std::cout;
        std::ofstream file;
        if (!out_path.empty()) {
            file.open(out_path);
            if (!file) throw ParseError("cannot open '" + out_path + "' for writing", 0);
            out = &file;
        }
        *out << "i,sigma\n";
        for (std::size_t i = 0; i < sigma.size(); ++i) *out << (i + 1) << "," << fmt(sigma[i]) << "\n";
        return 0;
    }

    if (convert->parsed()) {
        const SparseMatrix a = read_raw_triples(matrix_path);
        const std::string target = out_path.empty() ? matrix_path + ".mtx" : out_path;
        write_matrix_market(target, a);
        std::cerr << "wrote " << a.nrows << "x" << a.ncols << " (" << a.nnz() << " entries) to " << target
                  << "\n";
        return 0;
    }
    return 1;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    try {
        return run_cli(argc, argv);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const UnsupportedFormat& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NotConverged& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const NotPositiveDefinite& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace svdup
