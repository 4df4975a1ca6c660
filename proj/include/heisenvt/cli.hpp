#pragma once

/**
 * Batch front end. Subcommands:
 *   dual          enumerate the dual ball with dimensions and the census check
 *   spectrum      closed form + oracle + comparison for an operator spec
 *   symbol        the symbol matrix of a spec at one label
 *   fourier       forward/inverse transform of a level function file
 *   verify        the full invariant suite
 *   hypoell-scan  per-shell symbol extremes and fitted growth orders
 *
 * Exit codes: 0 success, 1 malformed configuration (the message names the
 * offending field), 2 a --check/verify tolerance violation. Reports are
 * byte-identical across runs for a fixed configuration and version.
 */

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "heisenvt/reports.hpp"

namespace heisenvt::cli {

namespace detail {

inline LevelFunction read_level_function(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("input: cannot open '" + path + "'");
    int first = in.peek();
    if (first == '{') {
        json j;
        in >> j;
        return level_function_from_json(j);
    }
    return read_level_function_raw(in);
}

inline void write_output(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("output: cannot open '" + path + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

inline std::vector<DualScalar> parse_dual_vector(const Prime& p, long d,
                                                 const std::string& text,
                                                 const std::string& field) {
    std::vector<DualScalar> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(parse_dual_scalar(p, item));
    if (out.empty()) out.assign(d, DualScalar::trivial(p));
    if (static_cast<long>(out.size()) != d)
        throw std::invalid_argument(field + ": expected " + std::to_string(d) +
                                    " comma-separated classes");
    return out;
}

} // namespace detail

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"harmonic analysis and VT operator spectra on the compact "
                 "Heisenberg group over the p-adic integers"};
    app.require_subcommand(1);

    long p_val = 3, d_val = 1, n_val = 1, nmax = 3, threads = 0;
    size_t dense_budget = 5000;
    std::string spec_text = "sublaplacian:alpha=1";
    std::string format = "json";
    std::string mode = "block";
    std::string input_path, output_path, output_format = "json";
    std::string lambda_text = "0", xi_text, eta_text;
    std::string config_path;
    bool check = false, forward = false, inverse_flag = false;

    // --config supplies defaults; explicit flags override them
    for (size_t i = 0; i + 1 < args.size(); ++i) {
        if (args[i] == "--config") config_path = args[i + 1];
    }
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            err << "error: config: cannot open '" << config_path << "'\n";
            return 1;
        }
        try {
            json j;
            in >> j;
            p_val = j.value("p", p_val);
            d_val = j.value("d", d_val);
            n_val = j.value("n", n_val);
            threads = j.value("threads", threads);
            dense_budget = j.value("dense_budget", dense_budget);
            mode = j.value("mode", mode);
            format = j.value("format", format);
            if (j.contains("spec"))
                spec_text = j["spec"].is_string() ? j["spec"].get<std::string>()
                                                  : j["spec"].dump();
        } catch (const std::exception& e) {
            err << "error: config: " << e.what() << "\n";
            return 1;
        }
    }

    app.add_option("--config", config_path, "JSON file with default parameters");
    app.add_option("--threads", threads,
                   "worker threads (default: HEISENVT_THREADS or 1)");

    auto add_pdn = [&](CLI::App* cmd, bool with_n = true) {
        cmd->add_option("-p,--prime", p_val, "odd prime p");
        cmd->add_option("-d,--dim", d_val, "Heisenberg parameter d");
        if (with_n) cmd->add_option("-n,--level", n_val, "truncation level n");
    };

    CLI::App* dual = app.add_subcommand("dual", "enumerate the dual ball B(n)");
    add_pdn(dual);
    dual->add_option("--format", format, "json or csv");

    CLI::App* spectrum =
        app.add_subcommand("spectrum", "closed-form and oracle spectra");
    add_pdn(spectrum);
    spectrum->add_option("--spec", spec_text, "operator spec (shorthand, JSON or file)");
    spectrum->add_option("--mode", mode, "block, dense or both");
    spectrum->add_option("--dense-budget", dense_budget, "dense-mode dimension cap");
    spectrum->add_flag("--check", check, "exit 2 on any tolerance violation");
    spectrum->add_option("--format", format, "json or csv");

    CLI::App* symbol = app.add_subcommand("symbol", "symbol matrix at one label");
    add_pdn(symbol, false);
    symbol->add_option("--lambda", lambda_text, "central class, e.g. 1/3 or 0");
    symbol->add_option("--xi", xi_text, "comma-separated xi classes");
    symbol->add_option("--eta", eta_text, "comma-separated eta classes");
    symbol->add_option("--spec", spec_text, "operator spec");

    CLI::App* fourier = app.add_subcommand("fourier", "group Fourier transform");
    fourier->add_flag("--forward", forward, "level function -> coefficients");
    fourier->add_flag("--inverse", inverse_flag, "coefficients -> level function");
    fourier->add_option("--input", input_path, "input file (JSON or raw)")->required();
    fourier->add_option("--output", output_path, "output file")->required();
    fourier->add_option("--output-format", output_format,
                        "level-function output: json or raw");

    std::string verify_format = "text";
    CLI::App* verify = app.add_subcommand("verify", "run the invariant suite");
    add_pdn(verify);
    verify->add_option("--format", verify_format, "text or json");

    CLI::App* scan = app.add_subcommand("hypoell-scan", "symbol growth over shells");
    add_pdn(scan, false);
    scan->add_option("--nmax", nmax, "largest shell exponent");
    scan->add_option("--spec", spec_text, "operator spec");

    std::vector<const char*> argv;
    argv.push_back("heisenvt");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        std::ostringstream os;
        int code = app.exit(e, os, os);
        (code == 0 ? out : err) << os.str();
        return code == 0 ? 0 : 1;
    }

    if (threads <= 0) {
        const char* env = std::getenv("HEISENVT_THREADS");
        threads = env ? std::atol(env) : 1;
    }
    set_worker_threads(threads);

    try {
        Prime p(p_val);
        if (n_val < 0) throw std::invalid_argument("n must be nonnegative");
        if (d_val < 1) throw std::invalid_argument("d must be at least 1");

        if (*dual) {
            auto labels = enumerate_dual(p, d_val, n_val);
            auto [sum, order] = verify_peter_weyl(p, d_val, n_val);
            if (format == "csv") {
                out << dual_csv(labels);
            } else {
                json j = report_header();
                j["p"] = p_val;
                j["d"] = d_val;
                j["n"] = n_val;
                json arr = json::array();
                for (const auto& l : labels) arr.push_back(label_to_json(l));
                j["count"] = labels.size();
                j["labels"] = arr;
                j["peter_weyl"] = json{{"sum_d2", sum.get_str()},
                                       {"order", order.get_str()},
                                       {"equal", sum == order}};
                out << j.dump(2) << "\n";
            }
            return 0;
        }

        if (*spectrum) {
            OperatorSpec spec = parse_spec(spec_text, d_val);
            SpectrumReport closed = closed_form_spectrum(spec, p, d_val, n_val);
            BlockComparisonReport blocks =
                compare_block_spectra(spec, p, d_val, n_val, 1e-9);
            if (format == "csv") {
                out << spectrum_csv(spec, p, d_val, n_val, blocks);
                return (check && !blocks.all_generic_match) ? 2 : 0;
            }
            json j = report_header();
            j["p"] = p_val;
            j["d"] = d_val;
            j["n"] = n_val;
            j["spec"] = spec_to_json(spec);
            j["mode"] = mode;
            j["closed_form"] = spectrum_report_to_json(closed);
            bool dense_matches = true;
            if (mode == "block" || mode == "both") {
                SpectrumReport oracle =
                    oracle_spectrum(spec, p, d_val, n_val, SpectrumMode::block);
                j["oracle"] = spectrum_report_to_json(oracle);
                if (mode == "both") {
                    SpectrumReport dense_rep = oracle_spectrum(
                        spec, p, d_val, n_val, SpectrumMode::dense, dense_budget);
                    SpectrumComparison cross = compare_spectra(dense_rep, oracle, 1e-9);
                    j["dense"] = spectrum_report_to_json(dense_rep);
                    j["dense_vs_block"] = comparison_to_json(cross);
                    dense_matches = cross.multisets_match;
                }
            } else if (mode == "dense") {
                SpectrumReport dense_rep = oracle_spectrum(
                    spec, p, d_val, n_val, SpectrumMode::dense, dense_budget);
                j["oracle"] = spectrum_report_to_json(dense_rep);
            } else {
                throw std::invalid_argument("mode: expected block, dense or both");
            }
            j["block_comparison"] = block_comparison_to_json(blocks);
            bool pass = blocks.all_generic_match && dense_matches;
            j["check"] = json{{"requested", check}, {"pass", pass}};
            out << j.dump(2) << "\n";
            return (check && !pass) ? 2 : 0;
        }

        if (*symbol) {
            std::vector<DualScalar> xi =
                detail::parse_dual_vector(p, d_val, xi_text, "xi");
            std::vector<DualScalar> eta =
                detail::parse_dual_vector(p, d_val, eta_text, "eta");
            RepLabel label(xi, eta, parse_dual_scalar(p, lambda_text));
            OperatorSpec spec = parse_spec(spec_text, d_val);
            CMatrix sigma = operator_symbol(spec, label);
            json j = report_header();
            j["p"] = p_val;
            j["d"] = d_val;
            j["label"] = label_to_json(label);
            j["spec"] = spec_to_json(spec);
            j["symbol"] = matrix_to_json(sigma);
            j["hermitian_deviation"] = sigma.deviation_from_hermitian();
            if (sigma.deviation_from_hermitian() < 1e-9)
                j["eigenvalues"] = hermitian_eigenvalues(sigma);
            out << j.dump(2) << "\n";
            return 0;
        }

        if (*fourier) {
            if (forward == inverse_flag)
                throw std::invalid_argument(
                    "fourier: exactly one of --forward/--inverse is required");
            if (forward) {
                LevelFunction f = detail::read_level_function(input_path);
                FourierCoefficients F = forward_transform(f);
                detail::write_output(
                    output_path,
                    coefficients_to_json(F, f.prime().value(), f.d()).dump(2) + "\n");
            } else {
                std::ifstream in(input_path);
                if (!in)
                    throw std::invalid_argument("input: cannot open '" + input_path +
                                                "'");
                json j;
                in >> j;
                LevelFunction f = inverse_transform(coefficients_from_json(j));
                if (output_format == "raw") {
                    std::ostringstream os(std::ios::binary);
                    write_level_function_raw(f, os);
                    detail::write_output(output_path, os.str());
                } else if (output_format == "json") {
                    detail::write_output(output_path,
                                         level_function_to_json(f).dump(2) + "\n");
                } else {
                    throw std::invalid_argument("output-format: expected json or raw");
                }
            }
            out << "ok\n";
            return 0;
        }

        if (*verify) {
            auto results = run_verify(p, d_val, n_val);
            bool all = true;
            for (const auto& c : results) all = all && c.pass;
            if (verify_format == "json") {
                out << verify_to_json(results).dump(2) << "\n";
            } else {
                for (const auto& c : results)
                    out << (c.pass ? "PASS" : "FAIL") << " " << c.name << " ("
                        << c.detail << ")\n";
                out << (all ? "verify: all checks passed"
                            : "verify: tolerance violations found")
                    << " [p=" << p_val << " d=" << d_val << " n=" << n_val << "]\n";
            }
            return all ? 0 : 2;
        }

        if (*scan) {
            OperatorSpec spec = parse_spec(spec_text, d_val);
            EllipticityReport rep = hypoellipticity_scan(spec, p, d_val, nmax);
            json j = ellipticity_to_json(rep);
            j["p"] = p_val;
            j["d"] = d_val;
            j["spec"] = spec_to_json(spec);
            out << j.dump(2) << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace heisenvt::cli
