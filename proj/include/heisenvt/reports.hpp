#pragma once

/**
 * Machine-readable interchange: JSON (canonical) and CSV (lossy flattening)
 * for labels, operator specs, level functions, Fourier coefficients, spectrum
 * reports and scan reports. Every report embeds the tool version.
 */

#include <bit>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "heisenvt/fourier.hpp"
#include "heisenvt/spectral.hpp"
#include "heisenvt/verify.hpp"
#include "heisenvt/version.hpp"

namespace heisenvt {

using json = nlohmann::ordered_json;

inline json report_header() {
    return json{{"tool", kToolName}, {"version", kVersion}};
}

// ---- dual scalars and labels ---------------------------------------------

inline DualScalar parse_dual_scalar(const Prime& p, const std::string& s) {
    if (s == "0" || s == "1" || s.empty()) return DualScalar::trivial(p);
    auto slash = s.find('/');
    if (slash == std::string::npos)
        throw std::invalid_argument("dual scalar '" + s + "': expected a/p^K or 0");
    long num = std::stol(s.substr(0, slash));
    long den = std::stol(s.substr(slash + 1));
    long k = 0, q = 1;
    while (q < den) { q *= p.value(); ++k; }
    if (q != den)
        throw std::invalid_argument("dual scalar '" + s +
                                    "': denominator is not a power of p");
    return DualScalar::make(p, num, k);
}

inline json label_to_json(const RepLabel& label) {
    json xi = json::array(), eta = json::array();
    for (long i = 0; i < label.d(); ++i) {
        xi.push_back(to_string(label.xi()[i]));
        eta.push_back(to_string(label.eta()[i]));
    }
    return json{{"xi", xi},
                {"eta", eta},
                {"lambda", to_string(label.lambda())},
                {"dim", label.dim()}};
}

// ---- operator specs --------------------------------------------------------

inline json spec_to_json(const OperatorSpec& spec) {
    json terms = json::array();
    for (const auto& t : spec.terms()) {
        if (t.kind == OperatorTerm::Kind::full_vt) {
            terms.push_back(json{{"kind", "full_vt"}, {"alpha", t.alpha}});
        } else {
            terms.push_back(json{{"kind", "directional"},
                                 {"V", json{{"a", t.a}, {"b", t.b}, {"c", t.c}}},
                                 {"alpha", t.alpha}});
        }
    }
    return json{{"name", spec.name()}, {"terms", terms}};
}

inline OperatorSpec spec_from_json(const json& j, long d) {
    if (j.contains("sublaplacian"))
        return OperatorSpec::sublaplacian(d, j["sublaplacian"].value("alpha", 1.0));
    if (j.contains("laplacian"))
        return OperatorSpec::vladimirov_laplacian(d, j["laplacian"].value("alpha", 1.0));
    if (j.contains("vt")) return OperatorSpec::vt(j["vt"].value("alpha", 1.0));
    if (!j.contains("terms"))
        throw std::invalid_argument("spec: expected 'terms' or a named shorthand");
    std::vector<OperatorTerm> terms;
    for (const auto& t : j["terms"]) {
        double alpha = t.value("alpha", 1.0);
        std::string kind = t.value("kind", "directional");
        if (kind == "full_vt") {
            terms.push_back(OperatorTerm::full_vt(alpha));
        } else if (kind == "directional") {
            if (!t.contains("V"))
                throw std::invalid_argument("spec: directional term needs V");
            std::vector<long> a = t["V"].value("a", std::vector<long>(d, 0));
            std::vector<long> b = t["V"].value("b", std::vector<long>(d, 0));
            long c = t["V"].value("c", 0L);
            if (static_cast<long>(a.size()) != d || static_cast<long>(b.size()) != d)
                throw std::invalid_argument("spec: direction length must equal d");
            terms.push_back(OperatorTerm::directional(a, b, c, alpha));
        } else {
            throw std::invalid_argument("spec: unknown term kind '" + kind + "'");
        }
    }
    return OperatorSpec::from_terms(std::move(terms));
}

/// Accepts inline JSON, the shorthand name:key=value[,...], or a file path.
inline OperatorSpec parse_spec(const std::string& text, long d) {
    if (text.empty()) throw std::invalid_argument("spec: empty");
    if (text.front() == '{') return spec_from_json(json::parse(text), d);
    auto colon = text.find(':');
    std::string name = text.substr(0, colon);
    double alpha = 1.0;
    if (colon != std::string::npos) {
        std::string args = text.substr(colon + 1);
        std::istringstream in(args);
        std::string kv;
        while (std::getline(in, kv, ',')) {
            auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("spec: bad argument '" + kv + "'");
            std::string key = kv.substr(0, eq);
            double val = std::stod(kv.substr(eq + 1));
            if (key == "alpha" || key == "s") alpha = val;
            else throw std::invalid_argument("spec: unknown key '" + key + "'");
        }
    }
    if (name == "sublaplacian") return OperatorSpec::sublaplacian(d, alpha);
    if (name == "laplacian") return OperatorSpec::vladimirov_laplacian(d, alpha);
    if (name == "vt") return OperatorSpec::vt(alpha);
    std::ifstream file(text);
    if (file.good()) {
        json j;
        file >> j;
        return spec_from_json(j, d);
    }
    throw std::invalid_argument("spec: unknown operator '" + name + "'");
}

// ---- level functions --------------------------------------------------------

inline json level_function_to_json(const LevelFunction& f) {
    json values = json::array();
    for (size_t i = 0; i < f.size(); ++i)
        values.push_back(json::array({f[i].real(), f[i].imag()}));
    return json{{"p", f.prime().value()},
                {"d", f.d()},
                {"n", f.level()},
                {"values", values}};
}

inline LevelFunction level_function_from_json(const json& j) {
    Prime p(j.at("p").get<long>());
    LevelFunction f(p, j.at("d").get<long>(), j.at("n").get<long>());
    const auto& values = j.at("values");
    if (values.size() != f.size())
        throw std::invalid_argument("level function: expected " +
                                    std::to_string(f.size()) + " values, got " +
                                    std::to_string(values.size()));
    for (size_t i = 0; i < f.size(); ++i)
        f[i] = cdouble(values[i][0].get<double>(), values[i][1].get<double>());
    return f;
}

/// Raw stream: 3 little-endian uint32 (p, d, n), then interleaved
/// little-endian doubles re, im in index order.
inline void write_level_function_raw(const LevelFunction& f, std::ostream& os) {
    auto put_u32 = [&](uint32_t v) {
        unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                              static_cast<unsigned char>((v >> 8) & 0xff),
                              static_cast<unsigned char>((v >> 16) & 0xff),
                              static_cast<unsigned char>((v >> 24) & 0xff)};
        os.write(reinterpret_cast<const char*>(b), 4);
    };
    put_u32(static_cast<uint32_t>(f.prime().value()));
    put_u32(static_cast<uint32_t>(f.d()));
    put_u32(static_cast<uint32_t>(f.level()));
    static_assert(std::endian::native == std::endian::little,
                  "raw format assumes a little-endian host");
    for (size_t i = 0; i < f.size(); ++i) {
        double re = f[i].real(), im = f[i].imag();
        os.write(reinterpret_cast<const char*>(&re), 8);
        os.write(reinterpret_cast<const char*>(&im), 8);
    }
}

inline LevelFunction read_level_function_raw(std::istream& is) {
    auto get_u32 = [&]() -> uint32_t {
        unsigned char b[4];
        is.read(reinterpret_cast<char*>(b), 4);
        if (!is) throw std::invalid_argument("raw stream: truncated header");
        return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
               (static_cast<uint32_t>(b[2]) << 16) |
               (static_cast<uint32_t>(b[3]) << 24);
    };
    long p = get_u32(), d = get_u32(), n = get_u32();
    LevelFunction f(Prime(p), d, n);
    for (size_t i = 0; i < f.size(); ++i) {
        double re, im;
        is.read(reinterpret_cast<char*>(&re), 8);
        is.read(reinterpret_cast<char*>(&im), 8);
        if (!is) throw std::invalid_argument("raw stream: truncated data");
        f[i] = cdouble(re, im);
    }
    return f;
}

// ---- Fourier coefficients -----------------------------------------------------

inline json coefficients_to_json(const FourierCoefficients& coeffs, long p, long d) {
    json labels = json::array();
    for (size_t i = 0; i < coeffs.labels.size(); ++i) {
        json matrix = json::array();
        const CMatrix& m = coeffs.mats[i];
        for (size_t r = 0; r < m.rows(); ++r) {
            json row = json::array();
            for (size_t c = 0; c < m.cols(); ++c)
                row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
            matrix.push_back(row);
        }
        json entry = label_to_json(coeffs.labels[i]);
        entry["matrix"] = matrix;
        labels.push_back(entry);
    }
    json j = report_header();
    j["p"] = p;
    j["d"] = d;
    j["n"] = coeffs.level;
    j["labels"] = labels;
    return j;
}

inline FourierCoefficients coefficients_from_json(const json& j) {
    Prime p(j.at("p").get<long>());
    long d = j.at("d").get<long>();
    FourierCoefficients coeffs;
    coeffs.level = j.at("n").get<long>();
    for (const auto& entry : j.at("labels")) {
        std::vector<DualScalar> xi, eta;
        for (const auto& s : entry.at("xi"))
            xi.push_back(parse_dual_scalar(p, s.get<std::string>()));
        for (const auto& s : entry.at("eta"))
            eta.push_back(parse_dual_scalar(p, s.get<std::string>()));
        if (static_cast<long>(xi.size()) != d)
            throw std::invalid_argument("coefficients: xi length must equal d");
        RepLabel label(xi, eta,
                       parse_dual_scalar(p, entry.at("lambda").get<std::string>()));
        const auto& matrix = entry.at("matrix");
        size_t dim = static_cast<size_t>(label.dim());
        if (matrix.size() != dim)
            throw std::invalid_argument("coefficients: matrix size mismatch");
        CMatrix m(dim, dim);
        for (size_t r = 0; r < dim; ++r)
            for (size_t c = 0; c < dim; ++c)
                m(r, c) = cdouble(matrix[r][c][0].get<double>(),
                                  matrix[r][c][1].get<double>());
        coeffs.labels.push_back(label);
        coeffs.mats.push_back(std::move(m));
    }
    return coeffs;
}

// ---- spectrum and scan reports ---------------------------------------------------

inline json spectrum_report_to_json(const SpectrumReport& rep) {
    json entries = json::array();
    for (const auto& e : rep.entries)
        entries.push_back(json{{"value", e.value},
                               {"mult", e.mult},
                               {"labels", e.provenance},
                               {"generic", e.generic}});
    json j = report_header();
    j["p"] = rep.p;
    j["d"] = rep.d;
    j["n"] = rep.n;
    j["spec"] = rep.spec_name;
    j["mode"] = rep.mode;
    j["count"] = rep.raw.size();
    j["trace"] = rep.trace;
    j["entries"] = entries;
    return j;
}

inline json comparison_to_json(const SpectrumComparison& cmp) {
    return json{{"multisets_match", cmp.multisets_match},
                {"matched", cmp.matched},
                {"max_err", cmp.max_err},
                {"unmatched_left", cmp.unmatched_left},
                {"unmatched_right", cmp.unmatched_right}};
}

inline json block_comparison_to_json(const BlockComparisonReport& rep) {
    json blocks = json::array();
    for (const auto& b : rep.blocks)
        blocks.push_back(json{{"label", b.label_str},
                              {"h_prime", b.h_prime_str},
                              {"generic", b.generic},
                              {"closed", b.closed_values},
                              {"oracle", b.oracle_values},
                              {"matched", b.matched},
                              {"max_err", b.max_err}});
    json j{{"all_generic_match", rep.all_generic_match},
           {"generic_count", rep.generic_count},
           {"degenerate_count", rep.degenerate_count},
           {"fully_generic_blocks", rep.fully_generic_blocks},
           {"support_minus_2d_csub", rep.support_minus_2d_csub},
           {"support_minus_2_csub", rep.support_minus_2_csub},
           {"blocks", blocks}};
    return j;
}

inline json ellipticity_to_json(const EllipticityReport& rep) {
    json shells = json::array();
    for (const auto& s : rep.shells)
        shells.push_back(json{{"j", s.j},
                              {"sigma_inf_min", s.sigma_inf},
                              {"sigma_op_max", s.sigma_op}});
    json j = report_header();
    j["shells"] = shells;
    j["window_lo"] = rep.window_lo;
    j["inf_order"] = rep.inf_order;
    j["op_order"] = rep.op_order;
    j["inf_order_all_shells"] = rep.inf_order_all;
    j["op_order_all_shells"] = rep.op_order_all;
    j["C1"] = rep.c1;
    j["C2"] = rep.c2;
    j["subelliptic_gap"] = rep.subelliptic_gap;
    j["not_hypoelliptic"] = rep.not_hypoelliptic;
    return j;
}

inline json matrix_to_json(const CMatrix& m) {
    json rows = json::array();
    for (size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (size_t c = 0; c < m.cols(); ++c)
            row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
        rows.push_back(row);
    }
    return rows;
}

inline json verify_to_json(const std::vector<CheckResult>& results) {
    json checks = json::array();
    bool all = true;
    for (const auto& c : results) {
        checks.push_back(json{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        all = all && c.pass;
    }
    json j = report_header();
    j["all_pass"] = all;
    j["checks"] = checks;
    return j;
}

// ---- CSV flattenings ---------------------------------------------------------------

/// One row per (label, h', tau) with the closed-form value for that tau and
/// the block's genericity/match flags.
inline std::string spectrum_csv(const OperatorSpec& spec, const Prime& p, long d,
                                long n, const BlockComparisonReport& cmp) {
    std::ostringstream os;
    os << "lambda,xi,eta,h_prime,tau,closed_value,generic,block_matched\n";
    size_t bi = 0;
    for (const auto& label : enumerate_dual(p, d, n)) {
        long m = label.central_exp();
        for (const auto& hp : h_prime_range(p, d, m)) {
            const BlockComparison& b = cmp.blocks.at(bi++);
            for (const auto& tau : tau_basis(p, d, m)) {
                os << '"' << to_string(label.lambda()) << '"' << ',' << '"';
                for (long i = 0; i < d; ++i) os << (i ? ";" : "") << to_string(label.xi()[i]);
                os << '"' << ',' << '"';
                for (long i = 0; i < d; ++i) os << (i ? ";" : "") << to_string(label.eta()[i]);
                os << '"' << ',' << '"';
                for (long i = 0; i < d; ++i) os << (i ? ";" : "") << hp[i];
                os << '"' << ',' << '"';
                for (long i = 0; i < d; ++i) os << (i ? ";" : "") << to_string(tau[i]);
                os << '"' << ',' << closed_form_eigenvalue(spec, label, hp, tau) << ','
                   << (b.generic ? 1 : 0) << ',' << (b.matched ? 1 : 0) << '\n';
            }
        }
    }
    return os.str();
}

inline std::string dual_csv(const std::vector<RepLabel>& labels) {
    std::ostringstream os;
    os << "lambda,xi,eta,dim\n";
    for (const auto& l : labels) {
        os << '"' << to_string(l.lambda()) << '"' << ',';
        os << '"';
        for (long i = 0; i < l.d(); ++i) os << (i ? ";" : "") << to_string(l.xi()[i]);
        os << '"' << ',' << '"';
        for (long i = 0; i < l.d(); ++i) os << (i ? ";" : "") << to_string(l.eta()[i]);
        os << '"' << ',' << l.dim() << '\n';
    }
    return os.str();
}

} // namespace heisenvt
