#pragma once

// Orchestration behind the command-line front end: run configuration, the
// construct pipeline, and the JSON / CSV report formats.

#include "qmsurf/leray.hpp"
#include "qmsurf/order.hpp"
#include "qmsurf/period.hpp"
#include "qmsurf/quaternion.hpp"
#include "qmsurf/symplectic.hpp"
#include "qmsurf/theta.hpp"

#include "json.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace qmsurf {

using json = nlohmann::ordered_json;

enum class OutputFormat { Json, Csv };

struct GridSpec {
    double re_min = -0.45;
    double re_max = 0.45;
    double im_min = 0.6;
    double im_max = 2.4;
    int re_steps = 10;
    int im_steps = 10;

    bool operator==(const GridSpec&) const = default;
};

struct RunConfig {
    Rational a = -1;
    Rational b = 3;
    std::optional<std::array<QuaternionElement, 4>> order_basis;
    bool saturate = true;
    std::optional<QuaternionElement> mu;
    int mu_radius = 10;
    int units_height = 2;
    std::vector<Complex> taus;  // explicit samples; the grid is used when empty
    GridSpec grid;
    std::optional<std::string> omega_direct;
    double theta_eps = 1e-14;
    double null_threshold = kDefaultNullThreshold;
    double riemann_tol = 1e-9;
    double ks_step = 1e-5;
    OutputFormat format = OutputFormat::Json;
    std::vector<std::int64_t> ms;
    std::optional<std::int64_t> h11;
    bool extremal = false;

    bool operator==(const RunConfig&) const = default;
};

/// Process exit codes.
inline int exit_code(ErrorCode code) {
    switch (code) {
        case ErrorCode::SplitAlgebra: return 2;
        case ErrorCode::DefiniteAlgebra: return 3;
        case ErrorCode::NotClosed:
        case ErrorCode::NotIntegral:
        case ErrorCode::RankDeficient:
        case ErrorCode::SaturationStuck:
        case ErrorCode::NotAUnit:
        case ErrorCode::NotInOrder: return 4;
        case ErrorCode::SearchExhausted:
        case ErrorCode::NotUnimodular: return 5;
        case ErrorCode::DegeneratePeriods:
        case ErrorCode::RiemannRelationViolation:
        case ErrorCode::StepTooSmall:
        case ErrorCode::StepTooLarge:
        case ErrorCode::NotSiegel: return 6;
        default: return 1;
    }
}

inline constexpr int kExitNumericFailure = 6;

// ---------------------------------------------------------------------------
// Text formats

/// Shortest decimal that round-trips to the same double.
inline std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

inline std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        auto pos = text.find(sep, start);
        out.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline double parse_double(std::string_view text) {
    double v = 0;
    std::string s(text);
    std::size_t used = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a number: '" + s + "'");
    }
    if (used != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
    return v;
}

/// Accepts "x", "yi", "i", "-i", "x+yi", "x-yi".
inline Complex parse_complex(std::string_view text) {
    std::string s;
    for (char ch : text)
        if (ch != ' ') s += ch;
    if (s.empty()) throw std::invalid_argument("empty complex number");
    if (s.back() != 'i') return {parse_double(s), 0.0};
    s.pop_back();
    std::size_t split_at = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;)
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split_at = k;
            break;
        }
    auto imag = [](const std::string& t) {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        return parse_double(t);
    };
    if (split_at == std::string::npos) return {0.0, imag(s)};
    return {parse_double(s.substr(0, split_at)), imag(s.substr(split_at))};
}

inline std::string format_complex(Complex z) {
    return format_double(z.real()) + (std::signbit(z.imag()) ? "-" : "+") + format_double(std::abs(z.imag())) + "i";
}

/// "x0,x1,x2,x3" with rational coordinates in 1, i, j, ij.
inline QuaternionElement parse_element(std::string_view text) {
    auto parts = split(text, ',');
    if (parts.size() != 4) throw std::invalid_argument("quaternion needs four coordinates: '" + std::string(text) + "'");
    return {parse_rational(parts[0]), parse_rational(parts[1]), parse_rational(parts[2]), parse_rational(parts[3])};
}

inline std::string format_element(const QuaternionElement& x) {
    return to_string(x[0]) + "," + to_string(x[1]) + "," + to_string(x[2]) + "," + to_string(x[3]);
}

/// Four elements separated by ';'.
inline std::array<QuaternionElement, 4> parse_basis(std::string_view text) {
    auto parts = split(text, ';');
    if (parts.size() != 4) throw std::invalid_argument("order basis needs four elements");
    return {parse_element(parts[0]), parse_element(parts[1]), parse_element(parts[2]), parse_element(parts[3])};
}

inline std::string format_basis(const std::array<QuaternionElement, 4>& basis) {
    std::string out;
    for (std::size_t k = 0; k < 4; ++k) out += (k ? ";" : "") + format_element(basis[k]);
    return out;
}

inline std::vector<std::int64_t> parse_int_list(std::string_view text) {
    std::vector<std::int64_t> out;
    if (text.empty()) return out;
    for (const auto& part : split(text, ',')) {
        std::int64_t v = 0;
        auto res = std::from_chars(part.data(), part.data() + part.size(), v);
        if (res.ec != std::errc() || res.ptr != part.data() + part.size())
            throw std::invalid_argument("not an integer: '" + part + "'");
        out.push_back(v);
    }
    return out;
}

/// "re_min:re_max:re_steps,im_min:im_max:im_steps"
inline GridSpec parse_grid(std::string_view text) {
    auto axes = split(text, ',');
    if (axes.size() != 2) throw std::invalid_argument("grid needs two axes");
    auto re = split(axes[0], ':');
    auto im = split(axes[1], ':');
    if (re.size() != 3 || im.size() != 3) throw std::invalid_argument("grid axis is min:max:steps");
    GridSpec g{parse_double(re[0]), parse_double(re[1]), parse_double(im[0]), parse_double(im[1]),
               static_cast<int>(parse_double(re[2])), static_cast<int>(parse_double(im[2]))};
    if (g.re_steps < 1 || g.im_steps < 1) throw std::invalid_argument("grid needs at least one step per axis");
    if (g.im_min <= 0) throw std::invalid_argument("grid must stay in the upper half plane");
    return g;
}

inline std::string format_grid(const GridSpec& g) {
    return format_double(g.re_min) + ":" + format_double(g.re_max) + ":" + std::to_string(g.re_steps) + "," +
           format_double(g.im_min) + ":" + format_double(g.im_max) + ":" + std::to_string(g.im_steps);
}

inline std::vector<Complex> grid_points(const GridSpec& g) {
    auto axis = [](double lo, double hi, int steps, int k) {
        if (steps == 1 || k == 0) return lo;
        return k == steps - 1 ? hi : lo + (hi - lo) * k / (steps - 1);
    };
    std::vector<Complex> out;
    for (int r = 0; r < g.re_steps; ++r)
        for (int s = 0; s < g.im_steps; ++s)
            out.emplace_back(axis(g.re_min, g.re_max, g.re_steps, r), axis(g.im_min, g.im_max, g.im_steps, s));
    return out;
}

/// "diag:z1,z2" or "full:o00,o01,o11".
inline ComplexMatrix parse_omega(std::string_view text) {
    auto colon = text.find(':');
    if (colon == std::string_view::npos) throw std::invalid_argument("omega must be diag:... or full:...");
    auto kind = text.substr(0, colon);
    auto entries = split(text.substr(colon + 1), ',');
    ComplexMatrix omega(2, 2);
    if (kind == "diag" && entries.size() == 2) {
        omega(0, 0) = parse_complex(entries[0]);
        omega(1, 1) = parse_complex(entries[1]);
    } else if (kind == "full" && entries.size() == 3) {
        omega(0, 0) = parse_complex(entries[0]);
        omega(0, 1) = omega(1, 0) = parse_complex(entries[1]);
        omega(1, 1) = parse_complex(entries[2]);
    } else {
        throw std::invalid_argument("cannot parse omega '" + std::string(text) + "'");
    }
    return omega;
}

// ---------------------------------------------------------------------------
// RunConfig <-> JSON

inline json to_json(const RunConfig& c) {
    json j;
    j["a"] = to_string(c.a);
    j["b"] = to_string(c.b);
    j["order"] = c.order_basis ? json(format_basis(*c.order_basis)) : json(nullptr);
    j["saturate"] = c.saturate;
    j["mu"] = c.mu ? json(format_element(*c.mu)) : json(nullptr);
    j["mu_radius"] = c.mu_radius;
    j["units_height"] = c.units_height;
    json taus = json::array();
    for (auto t : c.taus) taus.push_back(format_complex(t));
    j["tau"] = taus;
    j["grid"] = format_grid(c.grid);
    j["omega_direct"] = c.omega_direct ? json(*c.omega_direct) : json(nullptr);
    j["theta_eps"] = c.theta_eps;
    j["null_threshold"] = c.null_threshold;
    j["riemann_tol"] = c.riemann_tol;
    j["ks_step"] = c.ks_step;
    j["format"] = c.format == OutputFormat::Json ? "json" : "csv";
    j["ms"] = c.ms;
    j["h11"] = c.h11 ? json(*c.h11) : json(nullptr);
    j["extremal"] = c.extremal;
    return j;
}

inline RunConfig config_from_json(const json& j) {
    RunConfig c;
    c.a = parse_rational(j.at("a").get<std::string>());
    c.b = parse_rational(j.at("b").get<std::string>());
    if (!j.at("order").is_null()) c.order_basis = parse_basis(j.at("order").get<std::string>());
    c.saturate = j.at("saturate").get<bool>();
    if (!j.at("mu").is_null()) c.mu = parse_element(j.at("mu").get<std::string>());
    c.mu_radius = j.at("mu_radius").get<int>();
    c.units_height = j.at("units_height").get<int>();
    for (const auto& t : j.at("tau")) c.taus.push_back(parse_complex(t.get<std::string>()));
    c.grid = parse_grid(j.at("grid").get<std::string>());
    if (!j.at("omega_direct").is_null()) c.omega_direct = j.at("omega_direct").get<std::string>();
    c.theta_eps = j.at("theta_eps").get<double>();
    c.null_threshold = j.at("null_threshold").get<double>();
    c.riemann_tol = j.at("riemann_tol").get<double>();
    c.ks_step = j.at("ks_step").get<double>();
    c.format = j.at("format").get<std::string>() == "csv" ? OutputFormat::Csv : OutputFormat::Json;
    c.ms = j.at("ms").get<std::vector<std::int64_t>>();
    if (!j.at("h11").is_null()) c.h11 = j.at("h11").get<std::int64_t>();
    c.extremal = j.at("extremal").get<bool>();
    return c;
}

/// Reads a flat "key = value" file into command-line arguments ("--key value",
/// "-k value" for one-letter keys, underscores read as dashes).
/// Boolean keys become bare flags when true and are dropped when false.
inline std::vector<std::string> config_file_arguments(std::istream& in) {
    std::vector<std::string> args;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        auto trim = [](std::string s) {
            s.erase(0, s.find_first_not_of(" \t\r"));
            s.erase(s.find_last_not_of(" \t\r") + 1);
            if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
            return s;
        };
        if (eq == std::string::npos) {
            if (auto key = trim(line); !key.empty()) {
                std::replace(key.begin(), key.end(), '_', '-');
                args.push_back((key.size() == 1 ? "-" : "--") + key);
            }
            continue;
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) continue;
        std::replace(key.begin(), key.end(), '_', '-');
        const std::string flag = (key.size() == 1 ? "-" : "--") + key;
        if (value == "true") {
            args.push_back(flag);
        } else if (value != "false") {
            args.push_back(flag);
            args.push_back(value);
        }
    }
    return args;
}

// ---------------------------------------------------------------------------
// Reports

struct Report {
    json document;
    std::string text;  // CSV body when the format is CSV
    int exit_code = 0;
};

inline json error_json(const Error& e) { return {{"code", std::string(error_name(e.code()))}, {"message", e.what()}}; }

inline json algebra_json(const QuaternionAlgebra& alg) {
    json primes = json::array();
    for (const auto& p : alg.ramified_primes) primes.push_back(p.str());
    return {{"a", to_string(alg.a)},
            {"b", to_string(alg.b)},
            {"ramified_primes", primes},
            {"discriminant", alg.discriminant.str()},
            {"indefinite", alg.indefinite},
            {"division", alg.discriminant != 1}};
}

inline Report run_algebra(const Rational& a, const Rational& b) {
    Report r;
    r.document["command"] = "algebra";
    try {
        r.document["algebra"] = algebra_json(local_invariants(a, b));
        compute_invariants(a, b);
        r.document["status"] = "ok";
    } catch (const Error& e) {
        r.document["status"] = "error";
        r.document["error"] = error_json(e);
        r.exit_code = exit_code(e.code());
    }
    return r;
}

inline json matrix_json(const IntMatrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c).str());
        rows.push_back(row);
    }
    return rows;
}

inline json element_json(const QuaternionElement& x) {
    return {{"coordinates", {to_string(x[0]), to_string(x[1]), to_string(x[2]), to_string(x[3])}},
            {"pretty", to_string(x)}};
}

/// Everything the numerical stages need, built from a RunConfig.
struct Pipeline {
    QuaternionAlgebra algebra;
    OrderBasis order;
    int saturation_rounds = 0;
    PolarizationData polarization;
    SymplecticBasis basis;
    SplittingMap splitting;
    std::vector<std::string> warnings;
};

/// Runs algebra -> order -> mu -> Gram -> symplectic basis, recording each
/// stage into `doc` as it completes. Throws the first stage's Error.
inline Pipeline build_pipeline(const RunConfig& config, json& doc) {
    Pipeline p;
    p.algebra = compute_invariants(config.a, config.b);
    doc["algebra"] = algebra_json(p.algebra);

    const auto start = config.order_basis.value_or(standard_basis());
    p.order = verify_order(start, p.algebra);
    if (config.saturate) {
        auto sat = saturate_order(p.order, p.algebra);
        p.order = std::move(sat.order);
        p.saturation_rounds = sat.rounds;
    }
    if (!p.order.maximal)
        p.warnings.push_back("order has reduced discriminant " + p.order.reduced_discriminant.str() +
                             " != D = " + p.algebra.discriminant.str() + " (not maximal)");
    json basis = json::array();
    for (const auto& e : p.order.basis) basis.push_back(element_json(e));
    doc["order"] = {{"basis", basis},
                    {"reduced_discriminant", p.order.reduced_discriminant.str()},
                    {"maximal", p.order.maximal},
                    {"saturation_rounds", p.saturation_rounds}};

    const QuaternionElement mu = config.mu ? *config.mu : find_mu(p.order, p.algebra, config.mu_radius);
    require(contains(p.order, mu), ErrorCode::NotUnimodular, "mu = " + to_string(mu) + " is not in the order");
    doc["mu"] = element_json(mu);
    doc["mu"]["source"] = config.mu ? "supplied" : "search";
    p.polarization = polarization_gram(p.order, mu, p.algebra);
    doc["gram"] = matrix_json(p.polarization.gram);
    json divisors = json::array();
    for (const auto& d : p.polarization.elementary_divisors) divisors.push_back(std::stoll(d.str()));
    doc["elementary_divisors"] = divisors;

    p.basis = symplectic_basis(p.polarization.gram);
    doc["symplectic_basis"] = matrix_json(p.basis.change_of_basis);
    p.splitting = build_splitting(p.algebra);
    return p;
}

inline Report run_construct(const RunConfig& config) {
    Report r;
    r.document["command"] = "construct";
    r.document["config"] = to_json(config);
    try {
        json stages;
        Pipeline p = build_pipeline(config, stages);
        for (auto& [key, value] : stages.items()) r.document[key] = value;

        const auto units = enumerate_units(p.order, p.algebra, config.units_height);
        json unit_list = json::array();
        std::vector<UnitMatrix> embedded;
        bool all_symplectic = true;
        for (const auto& u : units) {
            embedded.push_back(embed_unit(u, p.order, p.basis, p.algebra));
            const bool symplectic = is_symplectic(embedded.back().matrix, p.basis.J);
            all_symplectic = all_symplectic && symplectic;
            unit_list.push_back({{"unit", element_json(u)},
                                 {"matrix", matrix_json(embedded.back().matrix)},
                                 {"symplectic", symplectic},
                                 {"in_G2", is_in_Gn(u, p.order, p.basis, p.algebra, 2)}});
        }
        r.document["units"] = unit_list;

        bool homomorphism = true;
        for (std::size_t x = 0; x < units.size() && homomorphism; ++x)
            for (std::size_t y = 0; y < units.size(); ++y) {
                auto uv = embed_unit(multiply(units[x], units[y], p.algebra), p.order, p.basis, p.algebra);
                if (uv.matrix != embedded[x].matrix * embedded[y].matrix) {
                    homomorphism = false;
                    break;
                }
            }
        const bool invariant = unit_invariance_check(p.order, p.polarization.gram, units, p.algebra);
        const IntMatrix& g = p.polarization.gram;
        json checks = {{"order_maximal", p.order.maximal},
                       {"gram_antisymmetric", g.transpose() == -g},
                       {"principal_polarization", true},
                       {"unit_invariance", invariant},
                       {"units_symplectic", all_symplectic},
                       {"embedding_homomorphism", homomorphism}};
        r.document["checks"] = checks;
        r.document["warnings"] = p.warnings;
        const bool ok = invariant && all_symplectic && homomorphism;
        r.document["status"] = ok ? "ok" : "check_failed";
        if (!ok) r.exit_code = kExitNumericFailure;
    } catch (const Error& e) {
        r.document["status"] = "error";
        r.document["error"] = error_json(e);
        r.exit_code = exit_code(e.code());
    }
    return r;
}

struct FiberRow {
    std::optional<Complex> tau;
    std::string cls;  // label, or "error:<Code>"
    std::optional<double> min_even_null;
    std::optional<double> ks_norm;
    std::optional<double> riemann_residual;
};

inline const char* kFiberCsvHeader = "re_tau,im_tau,class,min_even_null,ks_norm,riemann_residual";

inline std::string fiber_csv(const std::vector<FiberRow>& rows) {
    auto field = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    std::string out = std::string(kFiberCsvHeader) + "\n";
    for (const auto& row : rows) {
        out += (row.tau ? format_double(row.tau->real()) : "") + "," +
               (row.tau ? format_double(row.tau->imag()) : "") + "," + row.cls + "," + field(row.min_even_null) +
               "," + field(row.ks_norm) + "," + field(row.riemann_residual) + "\n";
    }
    return out;
}

inline json fiber_json(const FiberRow& row) {
    auto field = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    return {{"re_tau", row.tau ? json(row.tau->real()) : json(nullptr)},
            {"im_tau", row.tau ? json(row.tau->imag()) : json(nullptr)},
            {"class", row.cls},
            {"min_even_null", field(row.min_even_null)},
            {"ks_norm", field(row.ks_norm)},
            {"riemann_residual", field(row.riemann_residual)}};
}

inline FiberRow fiber_row(Complex tau, const Pipeline& p, const RunConfig& config) {
    FiberRow row{tau, "", {}, {}, {}};
    try {
        const SiegelPoint omega = period_matrix(UpperHalfPoint(tau), p.order, p.basis, p.splitting, config.riemann_tol);
        row.riemann_residual = omega.symmetry_residual;
        row.ks_norm = kodaira_spencer_rank(tau, p.order, p.basis, p.splitting, config.ks_step);
        const FiberClass cls = classify_fiber(omega, config.null_threshold, config.theta_eps);
        row.min_even_null = cls.min_even_null;
        row.cls = std::string(label_name(cls.label));
    } catch (const Error& e) {
        row.cls = "error:" + std::string(error_name(e.code()));
    }
    return row;
}

inline Report run_fibers(const RunConfig& config) {
    Report r;
    r.document["command"] = "fibers";
    r.document["config"] = to_json(config);
    std::vector<FiberRow> rows;
    try {
        if (config.omega_direct) {
            FiberRow row{std::nullopt, "", {}, {}, {}};
            try {
                const SiegelPoint omega = make_siegel_point(parse_omega(*config.omega_direct), config.riemann_tol);
                row.riemann_residual = omega.symmetry_residual;
                const FiberClass cls = classify_fiber(omega, config.null_threshold, config.theta_eps);
                row.min_even_null = cls.min_even_null;
                row.cls = std::string(label_name(cls.label));
            } catch (const Error& e) {
                row.cls = "error:" + std::string(error_name(e.code()));
            }
            rows.push_back(row);
        } else {
            json stages;
            const Pipeline p = build_pipeline(config, stages);
            const auto taus = config.taus.empty() ? grid_points(config.grid) : config.taus;
            for (Complex tau : taus) rows.push_back(fiber_row(tau, p, config));
        }
    } catch (const Error& e) {
        r.document["status"] = "error";
        r.document["error"] = error_json(e);
        r.exit_code = exit_code(e.code());
        r.text = fiber_csv(rows);
        return r;
    }
    json list = json::array();
    bool failures = false;
    for (const auto& row : rows) {
        list.push_back(fiber_json(row));
        failures = failures || row.cls.rfind("error:", 0) == 0;
    }
    r.document["rows"] = list;
    r.document["status"] = failures ? "row_errors" : "ok";
    r.text = fiber_csv(rows);
    if (failures) r.exit_code = kExitNumericFailure;
    return r;
}

inline Report run_leray(const RunConfig& config) {
    Report r;
    r.document["command"] = "leray";
    FibrationData data;
    data.fiber_genus = 2;
    data.singular_fibers = config.ms;
    data.h11 = config.h11;
    try {
        const LerayRanks ranks = leray_ranks(data);
        r.document["ranks"] = {{"rank_L0L1", ranks.rank_L0L1},
                               {"rank_L2L3", ranks.rank_L2L3},
                               {"rank_middle_if_h11", ranks.rank_middle_if_h11 ? json(*ranks.rank_middle_if_h11)
                                                                               : json(nullptr)}};
        if (config.h11) {
            const PicardVerdict v = picard_verdict(data, config.extremal);
            r.document["verdict"] = {{"rho", v.rho}, {"maximal", v.maximal}, {"rho_is_exact", v.exact}};
        }
        r.document["status"] = "ok";
    } catch (const Error& e) {
        r.document["status"] = "error";
        r.document["error"] = error_json(e);
        r.exit_code = exit_code(e.code());
    }
    return r;
}

}  // namespace qmsurf
