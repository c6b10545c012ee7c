#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qlheat/csv.hpp"
#include "qlheat/errors.hpp"
#include "qlheat/params.hpp"
#include "qlheat/pde.hpp"

namespace qlheat {

enum class Mode { Similarity, Pde, Linear, GradientForm, Compare, Symmetry, FluxTable };

inline const char* mode_name(Mode m) {
    switch (m) {
        case Mode::Similarity: return "similarity";
        case Mode::Pde: return "pde";
        case Mode::Linear: return "linear";
        case Mode::GradientForm: return "gradient-form";
        case Mode::Compare: return "compare";
        case Mode::Symmetry: return "symmetry";
        case Mode::FluxTable: return "flux-table";
    }
    return "?";
}

/// A fully resolved scenario. Defaults follow the reference setup: D_T = 1,
/// dx = 1/400, cfl_safety = 0.5, integrator tolerances 1e-10. The gradient
/// scale must be supplied as `a` or `a_squared`; boundary data B, C are
/// required by every mode except flux-table.
struct ScenarioConfig {
    std::optional<Mode> mode;
    double D_T = 1.0;
    std::optional<double> a;
    std::optional<double> lambda, c, rho;
    std::optional<double> B, C;
    double x_max = 8.0;
    double dx = 1.0 / 400.0;
    double z_max = 5.0;
    double t_start = 0.25;  ///< gradient-form mode: development time before switching to H
    double t_end = 1.0;
    std::vector<double> out_times;  ///< empty resolves to {t_end}
    double atol = 1e-10;
    double rtol = 1e-10;
    double cfl_safety = 0.5;
    double eps = 0.0, tau = 0.0, xi = 0.0, theta = 0.0;  ///< symmetry elements
    double g_min = 0.0, g_max = 1.0;                     ///< flux-table gradient range
    std::size_t g_count = 101;
    GradientBc gradient_bc = GradientBc::Dirichlet;
    std::string out_prefix = ".";

    std::vector<std::string> warnings;      ///< non-fatal validation notes
    std::set<std::string> explicit_keys;    ///< keys set by the document (collision log)

    PhysParams params() const {
        if (lambda || c || rho)
            return PhysParams(D_T, a.value(), lambda.value_or(D_T), c.value_or(1.0),
                              rho.value_or(1.0));
        return PhysParams(D_T, a.value());
    }

    std::vector<double> resolved_out_times() const {
        return out_times.empty() ? std::vector<double>{t_end} : out_times;
    }

    /// Canonical one-line record of every resolved parameter (CSV comment).
    std::string comment_line() const {
        std::ostringstream os;
        os << "mode=" << (mode ? mode_name(*mode) : "?");
        os << " D_T=" << format_double(D_T);
        if (a) os << " a=" << format_double(*a);
        if (lambda) os << " lambda=" << format_double(*lambda);
        if (c) os << " c=" << format_double(*c);
        if (rho) os << " rho=" << format_double(*rho);
        if (B) os << " B=" << format_double(*B);
        if (C) os << " C=" << format_double(*C);
        os << " x_max=" << format_double(x_max) << " dx=" << format_double(dx)
           << " z_max=" << format_double(z_max) << " t_start=" << format_double(t_start)
           << " t_end=" << format_double(t_end);
        os << " out_times=";
        const auto times = resolved_out_times();
        for (std::size_t i = 0; i < times.size(); ++i)
            os << (i ? ";" : "") << format_double(times[i]);
        os << " atol=" << format_double(atol) << " rtol=" << format_double(rtol)
           << " cfl_safety=" << format_double(cfl_safety);
        os << " eps=" << format_double(eps) << " tau=" << format_double(tau)
           << " xi=" << format_double(xi) << " theta=" << format_double(theta);
        os << " g_min=" << format_double(g_min) << " g_max=" << format_double(g_max)
           << " g_count=" << g_count;
        os << " gradient_bc=" << (gradient_bc == GradientBc::ZeroFlux ? "zero-flux" : "dirichlet");
        return os.str();
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& text, const std::string& where) {
    const std::string v = trim(text);
    double out = 0.0;
    const char* first = v.data();
    const char* last = v.data() + v.size();
    const auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc{} || res.ptr != last)
        throw ParseError(where + ": not a number: '" + v + "'");
    return out;
}

inline std::vector<double> parse_number_list(const std::string& text, const std::string& where) {
    std::vector<double> out;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, ',')) out.push_back(parse_number(item, where));
    if (out.empty()) throw ParseError(where + ": empty list");
    return out;
}

/// Assign one key. Returns false when the key is unknown.
inline bool assign_key(ScenarioConfig& cfg, const std::string& key, const std::string& value,
                       const std::string& where) {
    if (key == "mode") {
        const std::string v = trim(value);
        if (v == "similarity") cfg.mode = Mode::Similarity;
        else if (v == "pde") cfg.mode = Mode::Pde;
        else if (v == "linear") cfg.mode = Mode::Linear;
        else if (v == "gradient-form") cfg.mode = Mode::GradientForm;
        else if (v == "compare") cfg.mode = Mode::Compare;
        else if (v == "symmetry") cfg.mode = Mode::Symmetry;
        else if (v == "flux-table") cfg.mode = Mode::FluxTable;
        else throw ParseError(where + ": unknown mode '" + v + "'");
    } else if (key == "a") {
        cfg.a = parse_number(value, where);
    } else if (key == "a_squared") {
        const double a2 = parse_number(value, where);
        if (!(a2 > 0.0)) throw ValidationError(where + ": a_squared must be positive");
        cfg.a = std::sqrt(a2);
    } else if (key == "D_T") cfg.D_T = parse_number(value, where);
    else if (key == "lambda") cfg.lambda = parse_number(value, where);
    else if (key == "c") cfg.c = parse_number(value, where);
    else if (key == "rho") cfg.rho = parse_number(value, where);
    else if (key == "B") cfg.B = parse_number(value, where);
    else if (key == "C") cfg.C = parse_number(value, where);
    else if (key == "x_max") cfg.x_max = parse_number(value, where);
    else if (key == "dx") cfg.dx = parse_number(value, where);
    else if (key == "z_max") cfg.z_max = parse_number(value, where);
    else if (key == "t_start") cfg.t_start = parse_number(value, where);
    else if (key == "t_end") cfg.t_end = parse_number(value, where);
    else if (key == "out_times") cfg.out_times = parse_number_list(value, where);
    else if (key == "atol") cfg.atol = parse_number(value, where);
    else if (key == "rtol") cfg.rtol = parse_number(value, where);
    else if (key == "cfl_safety") cfg.cfl_safety = parse_number(value, where);
    else if (key == "eps") cfg.eps = parse_number(value, where);
    else if (key == "tau") cfg.tau = parse_number(value, where);
    else if (key == "xi") cfg.xi = parse_number(value, where);
    else if (key == "theta") cfg.theta = parse_number(value, where);
    else if (key == "g_min") cfg.g_min = parse_number(value, where);
    else if (key == "g_max") cfg.g_max = parse_number(value, where);
    else if (key == "g_count") {
        const double v = parse_number(value, where);
        if (!(v >= 1.0) || v != std::floor(v))
            throw ValidationError(where + ": g_count must be a positive integer");
        cfg.g_count = static_cast<std::size_t>(v);
    } else if (key == "gradient_bc") {
        const std::string v = trim(value);
        if (v == "zero-flux") cfg.gradient_bc = GradientBc::ZeroFlux;
        else if (v == "dirichlet") cfg.gradient_bc = GradientBc::Dirichlet;
        else throw ParseError(where + ": gradient_bc must be 'dirichlet' or 'zero-flux'");
    } else if (key == "out_prefix") cfg.out_prefix = trim(value);
    else return false;
    return true;
}

} // namespace detail

/// Check every module precondition the scenario will rely on; fills
/// cfg.warnings with non-fatal notes (non-physical gradient scale).
inline void validate_config(ScenarioConfig& cfg) {
    cfg.warnings.clear();
    if (!cfg.mode) throw ValidationError("config: 'mode' is required");
    if (!cfg.a) throw ValidationError("config: give the gradient scale as 'a' or 'a_squared'");
    if (!(*cfg.a > 0.0)) throw ValidationError("config: a must be positive");
    if (!(cfg.D_T > 0.0)) throw ValidationError("config: D_T must be positive");
    (void)cfg.params();  // positivity + D_T = lambda/(c rho) consistency

    const Mode m = *cfg.mode;
    const bool needs_bc = m != Mode::FluxTable;
    if (needs_bc && (!cfg.B || !cfg.C))
        throw ValidationError("config: B and C are required for this mode");
    if (m == Mode::Similarity || m == Mode::Compare) {
        if (!(cfg.z_max > 0.0)) throw ValidationError("config: z_max must be positive");
        if (cfg.C && *cfg.C == 0.0)
            throw ValidationError("config: C must be nonzero for profile integration");
    }
    if (m != Mode::Similarity && m != Mode::FluxTable) {
        if (!(cfg.dx > 0.0)) throw ValidationError("config: dx must be positive");
        if (!(cfg.x_max > 2.0 * cfg.dx))
            throw ValidationError("config: x_max must span at least two cells");
        if (!(cfg.t_end > 0.0)) throw ValidationError("config: t_end must be positive");
        if (!(cfg.cfl_safety > 0.0 && cfg.cfl_safety <= 1.0))
            throw ValidationError("config: cfl_safety must lie in (0, 1]");
    }
    if (m == Mode::GradientForm && !(cfg.t_start > 0.0 && cfg.t_start < cfg.t_end))
        throw ValidationError("config: gradient-form needs 0 < t_start < t_end");
    if (!(cfg.atol > 0.0) || !(cfg.rtol > 0.0))
        throw ValidationError("config: integrator tolerances must be positive");
    for (double t : cfg.resolved_out_times()) {
        if (!(t > 0.0)) throw ValidationError("config: output times must be positive");
        if (m != Mode::Similarity && m != Mode::FluxTable && t > cfg.t_end)
            throw ValidationError("config: output times must not exceed t_end");
        if (m == Mode::GradientForm && t <= cfg.t_start)
            throw ValidationError("config: gradient-form output times must exceed t_start");
    }
    if (m == Mode::FluxTable && !(cfg.g_max >= cfg.g_min))
        throw ValidationError("config: g_max must be >= g_min");

    if (!cfg.params().physical_range())
        cfg.warnings.push_back("a = " + format_double(*cfg.a) +
                               " exceeds 0.1; solutions keep physical sense only for 0 < a <= 0.1");
}

/// Parse a flat key = value document ('#' starts a comment). Unknown and
/// duplicate keys are rejected with the offending line number; the returned
/// configuration is fully validated.
inline ScenarioConfig parse_config(const std::string& text) {
    ScenarioConfig cfg;
    std::istringstream is(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(lineno);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(where + ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError(where + ": empty key");
        if (value.empty()) throw ParseError(where + ": empty value for '" + key + "'");
        const std::string canonical = (key == "a_squared") ? "a" : key;
        if (!cfg.explicit_keys.insert(canonical).second)
            throw ParseError(where + ": duplicate key '" + key + "'");
        if (!detail::assign_key(cfg, key, value, where))
            throw ParseError(where + ": unknown key '" + key + "'");
    }
    validate_config(cfg);
    return cfg;
}

/// Apply one key=value override (a CLI flag). The flag wins; the returned
/// note is nonempty when it replaces a value the document set explicitly.
inline std::string apply_override(ScenarioConfig& cfg, const std::string& key,
                                  const std::string& value) {
    const std::string k = detail::trim(key);
    const std::string where = "override '" + k + "'";
    if (!detail::assign_key(cfg, k, value, where))
        throw ParseError(where + ": unknown key");
    const std::string canonical = (k == "a_squared") ? "a" : k;
    if (cfg.explicit_keys.count(canonical))
        return "override " + k + "=" + detail::trim(value) + " replaces the config value";
    cfg.explicit_keys.insert(canonical);
    return {};
}

} // namespace qlheat
