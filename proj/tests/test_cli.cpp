#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "config.hpp"
#include "doctest.h"
#include "json.hpp"
#include "runner.hpp"

using namespace viscsgn;
using namespace viscsgn::cli;
namespace fs = std::filesystem;

namespace {

const char* kRest = R"(# rest state
[regime]
epsilon = 0.1
mu = 0.1   # shallowness
R = 1
gamma_inf = 10

[grid]
nx = 32
ngamma = 8
length = 20

[stepping]
t_end = 1.5
output_every = 0.5
)";

const char* kSolitary = R"([regime]
epsilon = 0.1
mu = 0.1
gamma_inf = 0
[grid]
nx = 64
widths = 14
[initial]
type = solitary
amplitude = 0.2
[stepping]
t_end = 0.5
output_every = 0.25
)";

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("visc_sgn_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

ConfigError config_error(const std::string& text, const std::vector<std::string>& overrides = {}) {
    try {
        parse_config(text, overrides);
    } catch (const ConfigError& e) {
        return e;
    }
    FAIL("expected a ConfigError");
    return ConfigError("", 0, "");
}

int run_binary(const std::string& args) {
    const std::string cmd = std::string(VISC_SGN_BINARY) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("parse a minimal config") {
        const RunConfig c = parse_config(kRest);
        CHECK(c.params() == RegimeParams(0.1, 0.1, 1.0, 10.0));
        CHECK(c.nx == 32);
        CHECK(c.x0 == -10.0);
        CHECK(c.x1 == 10.0);
        CHECK(c.initial == InitialKind::rest);
        CHECK_FALSE(c.dt.has_value());
        CHECK(c.output_count() == 3);
        CHECK(c.mode == Mode::simulate);
    }

    TEST_CASE("errors name the field and the line") {
        std::string no_mu = kRest;
        no_mu.replace(no_mu.find("mu = 0.1"), 8, "");
        CHECK(config_error(no_mu).field() == "regime.mu");

        std::string bad_nx = kRest;
        bad_nx.replace(bad_nx.find("nx = 32"), 7, "nx = 3x");
        const ConfigError e = config_error(bad_nx);
        CHECK(e.field() == "grid.nx");
        CHECK(e.line() == 9);
        CHECK(std::string(e.what()).find("line 9") != std::string::npos);

        CHECK(config_error(std::string(kRest) + "typo = 1\n").field() == "stepping.typo");
        CHECK(config_error(kRest, {"regime.mu=1.5"}).field() == "regime.mu");
        CHECK(config_error(kRest, {"stepping.output_every=0.4"}).field() == "stepping.output_every");
        CHECK(config_error(kRest, {"model.matching=robin"}).field() == "model.matching");
        CHECK(config_error(kRest, {"physical.depth=1"}).field() == "regime");
        CHECK(config_error(kRest, {"run.mode=verify"}).field() == "run.studies");
        CHECK(config_error(kRest, {"run.mode=verify", "run.studies=eq99"}).field() == "run.studies");
        CHECK(config_error(kRest, {"nodot=1"}).field() == "override");
        CHECK(config_error("[regime\n").line() == 1);
        CHECK(config_error("[a]\nnovalue\n").line() == 2);
    }

    TEST_CASE("overrides replace file values") {
        const RunConfig c = parse_config(kRest, {"grid.nx=48", "stepping.dt=0.01"});
        CHECK(c.nx == 48);
        REQUIRE(c.dt);
        CHECK(*c.dt == 0.01);
    }

    TEST_CASE("physical scales") {
        const RunConfig c = parse_config(
            "[physical]\ndepth = 1\namplitude = 0.1\nwavelength = 10\nR = 1\n[grid]\nnx = 32\nlength = 10\n"
            "[stepping]\nt_end = 1\n");
        CHECK(c.physical);
        CHECK(c.params().mu() == doctest::Approx(0.1));
        CHECK(c.params().epsilon() == doctest::Approx(0.1));
    }

    TEST_CASE("config echo round-trips") {
        for (const char* text : {kRest, kSolitary}) {
            const RunConfig c = parse_config(text, {"model.stencil_order=4", "run.studies=eq15,eq20"});
            CHECK(parse_config(to_ini(c)) == c);
        }
        const RunConfig p = parse_config(
            "[physical]\ndepth = 2\namplitude = 0.3\nwavelength = 17\nviscosity = 1e-6\n[grid]\nnx = 32\n"
            "length = 10\n[stepping]\nt_end = 1\ndt = 0.001\n");
        CHECK(parse_config(to_ini(p)) == p);
    }

    TEST_CASE("rest run writes the requested outputs") {
        const fs::path out = scratch("rest");
        std::ostringstream log;
        CHECK(run(parse_config(kRest), out, log) == kOk);
        int eta = 0, ubar = 0, ubl = 0;
        for (const auto& f : fs::directory_iterator(out)) {
            const std::string name = f.path().filename().string();
            eta += name.rfind("eta_t", 0) == 0;
            ubar += name.rfind("ubar_t", 0) == 0;
            ubl += name.rfind("ubl_t", 0) == 0;
        }
        CHECK(eta == 3);
        CHECK(ubar == 3);
        CHECK(ubl == 3);
        CHECK(fs::exists(out / "series.csv"));

        std::istringstream series(slurp(out / "series.csv"));
        std::string line;
        std::getline(series, line);
        CHECK(line == "t,mass,energy,max_eta,max_ubar,max_wall_shear");
        int rows = 0;
        while (std::getline(series, line)) {
            ++rows;
            CHECK(line.substr(line.find(',')) == ",0.00000000000000000e+00,0.00000000000000000e+00,"
                                                 "0.00000000000000000e+00,0.00000000000000000e+00,"
                                                 "0.00000000000000000e+00");
        }
        CHECK(rows == 4);

        const auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
        CHECK(summary["status"] == "ok");
        CHECK(parse_config(summary["config"].get<std::string>()) == parse_config(kRest));
        fs::remove_all(out);
    }

    TEST_CASE("reruns are byte-identical") {
        const RunConfig c = parse_config(kSolitary);
        const fs::path a = scratch("det_a"), b = scratch("det_b");
        std::ostringstream log;
        REQUIRE(run(c, a, log) == kOk);
        REQUIRE(run(c, b, log) == kOk);
        int compared = 0;
        for (const auto& f : fs::directory_iterator(a)) {
            CHECK(slurp(f.path()) == slurp(b / f.path().filename()));
            ++compared;
        }
        CHECK(compared == 8);
        const auto summary = nlohmann::json::parse(slurp(a / "summary.json"));
        CHECK(summary["solitary"]["initial"]["amplitude"].get<double>() == doctest::Approx(0.2).epsilon(1e-3));
        fs::remove_all(a);
        fs::remove_all(b);
    }

    TEST_CASE("file initial condition") {
        const fs::path dir = scratch("file");
        fs::create_directories(dir);
        const RunConfig base = parse_config(kRest);
        std::ofstream init(dir / "init.csv");
        init << "x,eta,ubar\n";
        const Grid1D g(base.nx, base.x0, base.x1);
        for (int i = 0; i < g.nx(); ++i) init << g.x(i) << ",0,0\n";
        init.close();
        const RunConfig c = parse_config(kRest, {"initial.type=file", "initial.path=" + (dir / "init.csv").string()});
        std::ostringstream log;
        CHECK(run(c, dir / "out", log) == kOk);

        const RunConfig missing = parse_config(kRest, {"initial.type=file", "initial.path=/nonexistent.csv"});
        CHECK_THROWS_AS(run(missing, dir / "out2", log), ConfigError);
        fs::remove_all(dir);
    }

    TEST_CASE("runtime abort flushes the last good state") {
        const fs::path out = scratch("abort");
        std::ostringstream log;
        const RunConfig c = parse_config(kSolitary, {"stepping.dt=0.25", "model.stencil_order=2"});
        const RunConfig wild = parse_config(kSolitary, {"stepping.dt=2", "stepping.t_end=20", "stepping.output_every=2"});
        CHECK(run(c, out, log) == kOk);
        fs::remove_all(out);
        CHECK(run(wild, out, log) == kRuntimeAbort);
        const auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
        CHECK(summary["status"] == "aborted");
        CHECK(fs::exists(out / "series.csv"));
        bool snapshot = false;
        for (const auto& f : fs::directory_iterator(out)) snapshot |= f.path().filename().string().rfind("eta_t", 0) == 0;
        CHECK(snapshot);
        for (const auto& f : fs::directory_iterator(out)) CHECK(f.path().extension() != ".tmp");
        fs::remove_all(out);
    }

    TEST_CASE("binary exit codes") {
        const fs::path dir = scratch("bin");
        fs::create_directories(dir);
        std::ofstream(dir / "ok.ini") << kRest;
        std::ofstream(dir / "bad.ini") << "[regime]\nepsilon = 0.1\n[grid]\nnx = 32\nlength = 1\n[stepping]\nt_end = 1\n";
        const std::string out = " --out " + (dir / "out").string();
        CHECK(run_binary("--config " + (dir / "ok.ini").string() + out) == 0);
        CHECK(run_binary("--config " + (dir / "bad.ini").string() + out) == 2);
        CHECK(run_binary("--config " + (dir / "ok.ini").string() + out + " --mode nonsense") == 2);
        CHECK(run_binary("--config " + (dir / "missing.ini").string() + out) == 2);
        CHECK(run_binary("--config " + (dir / "ok.ini").string() + out +
                         " --override initial.type=cosine --override initial.amplitude=0.5"
                         " --override stepping.dt=3 --override stepping.t_end=30 --override stepping.output_every=3") == 3);
        fs::remove_all(dir);
    }
}
