#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "viscsgn/blayer.hpp"
#include "viscsgn/bulk.hpp"
#include "viscsgn/coupling.hpp"
#include "viscsgn/error.hpp"
#include "viscsgn/regime.hpp"

namespace viscsgn::cli {

/// Configuration problem; field is "section.key", line is 0 when unknown.
class ConfigError : public Error {
public:
    ConfigError(std::string field, int line, const std::string& what);
    const std::string& field() const { return field_; }
    int line() const { return line_; }

private:
    std::string field_;
    int line_;
};

/// Sectioned key = value text with "#" comments. Keeps the line of every key.
class IniDocument {
public:
    struct Entry {
        std::string value;
        int line = 0;
    };

    static IniDocument parse(const std::string& text);

    bool has_section(const std::string& section) const { return sections_.count(section) > 0; }
    const Entry* find(const std::string& section, const std::string& key) const;
    /// Applies "section.key=value"; creates the section if needed.
    void apply_override(const std::string& assignment);
    const std::map<std::string, std::map<std::string, Entry>>& sections() const { return sections_; }

private:
    std::map<std::string, std::map<std::string, Entry>> sections_;
};

enum class InitialKind { rest, solitary, cosine, file };
enum class Mode { simulate, verify, both };

struct RunConfig {
    // regime or physical scales (exactly one in the file)
    bool physical = false;
    double epsilon = 0.1, mu = 0.1, R = 1.0, gamma_inf = RegimeParams::kDefaultGammaInf;
    PhysicalScales scales;

    // grid
    int nx = 256;
    int ngamma = 64;
    double x0 = 0.0, x1 = 1.0;
    Stretching stretching = Stretching::uniform;
    double ratio = 1.0;

    // initial condition
    InitialKind initial = InitialKind::rest;
    double amplitude = 0.0;
    double wavenumber = 1.0;
    double center = 0.0;
    std::string path;
    LayerInit layer_init = LayerInit::plug;

    // stepping
    std::optional<double> dt;  ///< empty: adaptive CFL step
    double cfl = 0.5;
    double t_end = 1.0;
    double output_every = 1.0;

    // model
    Matching matching = Matching::dirichlet;
    int stencil_order = 2;
    TimeScheme time_scheme = TimeScheme::rk2;
    Splitting splitting = Splitting::sequential;
    BracketVariant bracket = BracketVariant::ux_squared;

    // run
    Mode mode = Mode::simulate;
    std::vector<std::string> studies;
    std::vector<double> mu_values{0.2, 0.1, 0.05};

    RegimeParams params() const;
    int output_count() const;

    bool operator==(const RunConfig&) const = default;
};

/// Parses and validates; overrides ("section.key=value") are applied first.
RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {});
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

/// Canonical text form; parse_config(to_ini(c)) == c.
std::string to_ini(const RunConfig& config);

}  // namespace viscsgn::cli
