// Command-line frontend: run one scenario from a flat key = value
// configuration file and emit the mode's CSV artifacts.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qlheat/config.hpp"
#include "qlheat/runner.hpp"

namespace {

void error_line(const char* category, const std::exception& e) {
    std::cerr << "error: category=" << category << " message=\"" << e.what() << "\"\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quasilinear heat conduction with a finite-speed heat front"};
    std::string config_path;
    std::string out_prefix;
    std::vector<std::string> overrides;
    app.add_option("config", config_path, "scenario configuration file")->required();
    app.add_option("-o,--output", out_prefix, "output directory prefix");
    app.add_option("--override", overrides, "key=value replacing a config entry (repeatable)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // --help exits cleanly, bad flags are a config error
    }

    try {
        std::ifstream in(config_path, std::ios::binary);
        if (!in) {
            std::cerr << "error: category=config message=\"cannot read " << config_path << "\"\n";
            return 2;
        }
        std::ostringstream text;
        text << in.rdbuf();

        qlheat::ScenarioConfig cfg = qlheat::parse_config(text.str());
        for (const std::string& ov : overrides) {
            const auto eq = ov.find('=');
            if (eq == std::string::npos)
                throw qlheat::ParseError("override '" + ov + "': expected key=value");
            const std::string note =
                qlheat::apply_override(cfg, ov.substr(0, eq), ov.substr(eq + 1));
            if (!note.empty()) std::cout << "note: " << note << "\n";
        }
        if (!out_prefix.empty()) cfg.out_prefix = out_prefix;
        qlheat::validate_config(cfg);
        for (const std::string& w : cfg.warnings) std::cout << "warning: " << w << "\n";

        const auto files = qlheat::run(cfg, std::cout);
        for (const std::string& f : files) std::cout << "wrote " << f << "\n";
        return 0;
    } catch (const qlheat::ParseError& e) {
        error_line("config", e);
        return 2;
    } catch (const qlheat::ValidationError& e) {
        error_line("config", e);
        return 2;
    } catch (const qlheat::Error& e) {
        error_line("numeric", e);
        return 3;
    } catch (const std::exception& e) {
        error_line("internal", e);
        return 3;
    }
}
