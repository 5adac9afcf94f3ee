#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "viscsgn/verify/residuals.hpp"

namespace viscsgn::cli {

ConfigError::ConfigError(std::string field, int line, const std::string& what)
    : Error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) + field + ": " + what),
      field_(std::move(field)),
      line_(line) {}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

/// Shortest %g form that reads back to the same double.
std::string num(double v) {
    char buf[40];
    for (int digits = 15; digits <= 17; ++digits) {
        std::snprintf(buf, sizeof buf, "%.*g", digits, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

/// Typed access to an IniDocument; remembers which keys were read so that
/// leftovers can be reported as unknown.
class Reader {
public:
    explicit Reader(const IniDocument& doc) : doc_(doc) {}

    const IniDocument::Entry* entry(const std::string& section, const std::string& key) {
        used_.insert(section + "." + key);
        return doc_.find(section, key);
    }
    bool has(const std::string& section, const std::string& key) { return entry(section, key) != nullptr; }
    int line(const std::string& section, const std::string& key) {
        const auto* e = doc_.find(section, key);
        return e ? e->line : 0;
    }

    const IniDocument::Entry& required(const std::string& section, const std::string& key) {
        const auto* e = entry(section, key);
        if (!e) throw ConfigError(section + "." + key, 0, "missing required key");
        return *e;
    }

    double number(const std::string& section, const std::string& key, std::optional<double> fallback = {}) {
        const auto* e = entry(section, key);
        if (!e) {
            if (fallback) return *fallback;
            throw ConfigError(section + "." + key, 0, "missing required key");
        }
        return parse_number(*e, section + "." + key);
    }

    int integer(const std::string& section, const std::string& key, std::optional<int> fallback = {}) {
        const auto* e = entry(section, key);
        if (!e) {
            if (fallback) return *fallback;
            throw ConfigError(section + "." + key, 0, "missing required key");
        }
        std::size_t pos = 0;
        int v = 0;
        try {
            v = std::stoi(e->value, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos == 0 || pos != e->value.size()) {
            throw ConfigError(section + "." + key, e->line, "expected an integer, got '" + e->value + "'");
        }
        return v;
    }

    template <class E>
    E choice(const std::string& section, const std::string& key, const std::vector<std::pair<std::string, E>>& options,
             E fallback) {
        const auto* e = entry(section, key);
        if (!e) return fallback;
        for (const auto& [name, value] : options) {
            if (e->value == name) return value;
        }
        std::string allowed;
        for (const auto& [name, value] : options) allowed += (allowed.empty() ? "" : "|") + name;
        throw ConfigError(section + "." + key, e->line, "expected one of " + allowed + ", got '" + e->value + "'");
    }

    void reject_unknown() const {
        for (const auto& [section, keys] : doc_.sections()) {
            for (const auto& [key, e] : keys) {
                if (!used_.count(section + "." + key)) throw ConfigError(section + "." + key, e.line, "unknown key");
            }
        }
    }

    static double parse_number(const IniDocument::Entry& e, const std::string& field) {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(e.value, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos == 0 || pos != e.value.size() || !std::isfinite(v)) {
            throw ConfigError(field, e.line, "expected a number, got '" + e.value + "'");
        }
        return v;
    }

private:
    const IniDocument& doc_;
    std::set<std::string> used_;
};

const std::vector<std::pair<std::string, InitialKind>> kInitial = {
    {"rest", InitialKind::rest}, {"solitary", InitialKind::solitary}, {"cosine", InitialKind::cosine}, {"file", InitialKind::file}};
const std::vector<std::pair<std::string, Mode>> kMode = {
    {"simulate", Mode::simulate}, {"verify", Mode::verify}, {"both", Mode::both}};
const std::vector<std::pair<std::string, Matching>> kMatching = {
    {"dirichlet", Matching::dirichlet}, {"neumann", Matching::neumann}};
const std::vector<std::pair<std::string, TimeScheme>> kScheme = {{"rk2", TimeScheme::rk2}, {"rk4", TimeScheme::rk4}};
const std::vector<std::pair<std::string, Splitting>> kSplitting = {
    {"sequential", Splitting::sequential}, {"strang", Splitting::strang}};
const std::vector<std::pair<std::string, BracketVariant>> kBracket = {
    {"ux_squared", BracketVariant::ux_squared}, {"ubar_ux", BracketVariant::ubar_ux}};
const std::vector<std::pair<std::string, LayerInit>> kLayerInit = {
    {"plug", LayerInit::plug}, {"linear", LayerInit::linear}, {"zero", LayerInit::zero}};
const std::vector<std::pair<std::string, Stretching>> kStretching = {
    {"uniform", Stretching::uniform}, {"geometric", Stretching::geometric}};

template <class E>
std::string name_of(const std::vector<std::pair<std::string, E>>& options, E value) {
    for (const auto& [name, v] : options) {
        if (v == value) return name;
    }
    return "?";
}

}  // namespace

IniDocument IniDocument::parse(const std::string& text) {
    IniDocument doc;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError("section", line, "unterminated section header '" + s + "'");
            section = trim(s.substr(1, s.size() - 2));
            if (section.empty()) throw ConfigError("section", line, "empty section name");
            doc.sections_[section];
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("syntax", line, "expected 'key = value', got '" + s + "'");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (section.empty()) throw ConfigError(key, line, "key outside any section");
        if (key.empty()) throw ConfigError(section, line, "empty key");
        auto& keys = doc.sections_[section];
        if (keys.count(key)) throw ConfigError(section + "." + key, line, "duplicate key");
        keys[key] = {value, line};
    }
    return doc;
}

const IniDocument::Entry* IniDocument::find(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    if (s == sections_.end()) return nullptr;
    const auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
}

void IniDocument::apply_override(const std::string& assignment) {
    const auto eq = assignment.find('=');
    const std::string lhs = trim(assignment.substr(0, eq));
    const auto dot = lhs.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot == 0 || dot + 1 == lhs.size()) {
        throw ConfigError("override", 0, "expected section.key=value, got '" + assignment + "'");
    }
    sections_[lhs.substr(0, dot)][lhs.substr(dot + 1)] = {trim(assignment.substr(eq + 1)), 0};
}

RegimeParams RunConfig::params() const {
    if (!physical) return {epsilon, mu, R, gamma_inf};
    return nondimensionalize(scales, R, gamma_inf).params;
}

int RunConfig::output_count() const { return static_cast<int>(std::llround(t_end / output_every)); }

RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
    IniDocument doc = IniDocument::parse(text);
    for (const std::string& o : overrides) doc.apply_override(o);
    Reader r(doc);
    RunConfig c;

    const bool has_regime = doc.has_section("regime"), has_physical = doc.has_section("physical");
    if (has_regime == has_physical) {
        throw ConfigError("regime", 0, "exactly one of [regime] and [physical] is required");
    }
    c.physical = has_physical;
    const std::string rs = has_physical ? "physical" : "regime";
    if (has_regime) {
        c.epsilon = r.number("regime", "epsilon");
        c.mu = r.number("regime", "mu");
    } else {
        c.scales.gravity = r.number("physical", "gravity", 9.81);
        c.scales.depth = r.number("physical", "depth");
        c.scales.amplitude = r.number("physical", "amplitude");
        c.scales.wavelength = r.number("physical", "wavelength");
        if (r.has("physical", "viscosity")) c.scales.viscosity = r.number("physical", "viscosity");
    }
    c.R = r.number(rs, "R", 1.0);
    c.gamma_inf = r.number(rs, "gamma_inf", RegimeParams::kDefaultGammaInf);

    RegimeParams params;
    try {
        params = c.params();
    } catch (const InvalidArgument& e) {
        std::string key = e.field();
        if (c.physical && (key == "mu" || key == "epsilon")) key = key == "mu" ? "wavelength" : "amplitude";
        throw ConfigError(rs + "." + key, r.line(rs, key), e.what());
    }

    c.initial = r.choice("initial", "type", kInitial, InitialKind::rest);
    switch (c.initial) {
        case InitialKind::rest:
            break;
        case InitialKind::solitary:
            c.amplitude = r.number("initial", "amplitude");
            c.center = r.number("initial", "center", 0.0);
            break;
        case InitialKind::cosine:
            c.amplitude = r.number("initial", "amplitude");
            c.wavenumber = r.number("initial", "wavenumber", 1.0);
            break;
        case InitialKind::file:
            c.path = r.required("initial", "path").value;
            break;
    }
    c.layer_init = r.choice("initial", "layer", kLayerInit, LayerInit::plug);
    if (c.initial == InitialKind::solitary && !(c.amplitude > 0.0)) {
        throw ConfigError("initial.amplitude", r.line("initial", "amplitude"), "must be positive");
    }

    c.nx = r.integer("grid", "nx");
    c.ngamma = r.integer("grid", "ngamma", 64);
    c.stretching = r.choice("grid", "stretching", kStretching, Stretching::uniform);
    c.ratio = r.number("grid", "ratio", 1.0);
    const bool ends = r.has("grid", "x0") || r.has("grid", "x1");
    const bool length = r.has("grid", "length");
    const bool widths = r.has("grid", "widths");
    if (ends + length + widths != 1) {
        throw ConfigError("grid.length", 0, "give exactly one of x0/x1, length or widths");
    }
    if (ends) {
        c.x0 = r.number("grid", "x0");
        c.x1 = r.number("grid", "x1");
    } else {
        double L = 0.0;
        if (length) {
            L = r.number("grid", "length");
        } else {
            if (c.initial != InitialKind::solitary) {
                throw ConfigError("grid.widths", r.line("grid", "widths"), "only valid with a solitary initial condition");
            }
            L = r.number("grid", "widths") / classical_solitary(c.amplitude, params.mu()).kappa;
        }
        c.x0 = -0.5 * L;
        c.x1 = 0.5 * L;
    }
    try {
        const Grid1D g(c.nx, c.x0, c.x1);
        if (params.has_layer()) GridBL(g, c.ngamma, params.gamma_inf(), c.stretching, c.ratio);
    } catch (const InvalidArgument& e) {
        const std::string key = e.field() == "domain" ? "x1" : e.field();
        throw ConfigError("grid." + key, r.line("grid", key), e.what());
    }

    if (const auto* e = r.entry("stepping", "dt"); e && e->value != "auto") {
        c.dt = Reader::parse_number(*e, "stepping.dt");
        if (!(*c.dt > 0.0)) throw ConfigError("stepping.dt", e->line, "must be positive or 'auto'");
    }
    c.cfl = r.number("stepping", "cfl", 0.5);
    if (!(c.cfl > 0.0 && c.cfl <= 1.0)) throw ConfigError("stepping.cfl", r.line("stepping", "cfl"), "must lie in (0, 1]");
    c.t_end = r.number("stepping", "t_end");
    if (!(c.t_end > 0.0)) throw ConfigError("stepping.t_end", r.line("stepping", "t_end"), "must be positive");
    c.output_every = r.number("stepping", "output_every", c.t_end);
    const double ratio = c.t_end / c.output_every;
    if (!(c.output_every > 0.0) || std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
        throw ConfigError("stepping.output_every", r.line("stepping", "output_every"), "must divide t_end");
    }

    c.matching = r.choice("model", "matching", kMatching, Matching::dirichlet);
    c.stencil_order = r.integer("model", "stencil_order", 2);
    if (c.stencil_order != 2 && c.stencil_order != 4) {
        throw ConfigError("model.stencil_order", r.line("model", "stencil_order"), "must be 2 or 4");
    }
    c.time_scheme = r.choice("model", "time_scheme", kScheme, TimeScheme::rk2);
    c.splitting = r.choice("model", "splitting", kSplitting, Splitting::sequential);
    c.bracket = r.choice("model", "bracket", kBracket, BracketVariant::ux_squared);

    c.mode = r.choice("run", "mode", kMode, Mode::simulate);
    if (const auto* e = r.entry("run", "studies")) c.studies = split_list(e->value);
    if (const auto* e = r.entry("run", "mu_values")) {
        c.mu_values.clear();
        for (const std::string& s : split_list(e->value)) c.mu_values.push_back(Reader::parse_number({s, e->line}, "run.mu_values"));
    }
    if (c.mode != Mode::simulate) {
        if (c.studies.empty()) throw ConfigError("run.studies", r.line("run", "studies"), "verify mode needs a study list");
        for (const std::string& s : c.studies) {
            try {
                verify::parse_equation(s);
            } catch (const InvalidArgument& e) {
                throw ConfigError("run.studies", r.line("run", "studies"), e.what());
            }
        }
    }
    r.reject_unknown();
    return c;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", 0, "cannot read '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), overrides);
}

std::string to_ini(const RunConfig& c) {
    std::ostringstream o;
    if (c.physical) {
        o << "[physical]\n";
        o << "gravity = " << num(c.scales.gravity) << "\n";
        o << "depth = " << num(c.scales.depth) << "\n";
        o << "amplitude = " << num(c.scales.amplitude) << "\n";
        o << "wavelength = " << num(c.scales.wavelength) << "\n";
        if (c.scales.viscosity) o << "viscosity = " << num(*c.scales.viscosity) << "\n";
    } else {
        o << "[regime]\n";
        o << "epsilon = " << num(c.epsilon) << "\n";
        o << "mu = " << num(c.mu) << "\n";
    }
    o << "R = " << num(c.R) << "\n";
    o << "gamma_inf = " << num(c.gamma_inf) << "\n\n";

    o << "[grid]\nnx = " << c.nx << "\nngamma = " << c.ngamma << "\nx0 = " << num(c.x0) << "\nx1 = " << num(c.x1)
      << "\nstretching = " << name_of(kStretching, c.stretching) << "\nratio = " << num(c.ratio) << "\n\n";

    o << "[initial]\ntype = " << name_of(kInitial, c.initial) << "\n";
    if (c.initial == InitialKind::solitary) o << "amplitude = " << num(c.amplitude) << "\ncenter = " << num(c.center) << "\n";
    if (c.initial == InitialKind::cosine) o << "amplitude = " << num(c.amplitude) << "\nwavenumber = " << num(c.wavenumber) << "\n";
    if (c.initial == InitialKind::file) o << "path = " << c.path << "\n";
    o << "layer = " << name_of(kLayerInit, c.layer_init) << "\n\n";

    o << "[stepping]\ndt = " << (c.dt ? num(*c.dt) : std::string("auto")) << "\ncfl = " << num(c.cfl)
      << "\nt_end = " << num(c.t_end) << "\noutput_every = " << num(c.output_every) << "\n\n";

    o << "[model]\nmatching = " << name_of(kMatching, c.matching) << "\nstencil_order = " << c.stencil_order
      << "\ntime_scheme = " << name_of(kScheme, c.time_scheme) << "\nsplitting = " << name_of(kSplitting, c.splitting)
      << "\nbracket = " << name_of(kBracket, c.bracket) << "\n\n";

    o << "[run]\nmode = " << name_of(kMode, c.mode) << "\n";
    if (!c.studies.empty()) {
        o << "studies = ";
        for (std::size_t i = 0; i < c.studies.size(); ++i) o << (i ? ", " : "") << c.studies[i];
        o << "\n";
    }
    o << "mu_values = ";
    for (std::size_t i = 0; i < c.mu_values.size(); ++i) o << (i ? ", " : "") << num(c.mu_values[i]);
    o << "\n";
    return o.str();
}

}  // namespace viscsgn::cli
