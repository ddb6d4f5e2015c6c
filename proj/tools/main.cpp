#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "hmt/cli/commands.hpp"

using namespace hmt::cli;

namespace {

constexpr int usage_exit = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run(const json& config) {
    const auto rc = parse_config(config);
    const auto rec = run_command(rc);
    const auto text = format_record(rec, rc.format);
    const auto path = report_path(rc, std::getenv("HMT_OUT_DIR"));
    if (path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(path, std::ios::trunc);
        if (!out) throw ConfigError("$.out", "cannot write '" + path + "'");
        out << text;
        std::cerr << "wrote " << path << "\n";
    }
    return rec.exit;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hmt: finite-sums, cover-partition and game searches"};
    app.require_subcommand(0, 1);
    std::string top_config;
    app.add_option("--config", top_config, "JSON config naming its own command");

    struct Sub {
        CLI::App* app;
        std::string config;
        std::map<std::string, std::string> values;
        std::map<std::string, CLI::Option*> opts;
    };
    std::map<std::string, Sub> subs;
    for (const auto& spec : command_specs()) {
        auto& s = subs[spec.name];
        s.app = app.add_subcommand(spec.name, spec.help);
        s.app->add_option("--config", s.config, "JSON config file");
        for (const auto& k : spec.keys) {
            CLI::Option* o = nullptr;
            const std::string help = k.help + " [" + k.def.dump() + "]";
            if (k.type == KeyType::boolean) {
                o = s.app->add_flag("--" + k.flag() + "{true},!--no-" + k.flag(), s.values[k.name], help);
            } else {
                o = s.app->add_option("--" + k.flag(), s.values[k.name], help);
            }
            o->multi_option_policy(CLI::MultiOptionPolicy::Throw);
            s.opts[k.name] = o;
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return usage_exit;
    }

    try {
        if (app.get_subcommands().empty()) {
            if (top_config.empty()) {
                std::cerr << app.help();
                return usage_exit;
            }
            return run(parse_json_strict(read_file(top_config)));
        }
        const auto name = app.get_subcommands().front()->get_name();
        auto& s = subs.at(name);
        const auto& spec = command_spec(name);
        json j = s.config.empty() ? json::object() : parse_json_strict(read_file(s.config));
        if (!j.is_object()) throw ConfigError("$", "config must be an object");
        if (j.contains("command") && j["command"] != name)
            throw ConfigError("$.command", "config is for '" + j["command"].dump() + "', not " + name);
        j["command"] = name;
        for (const auto& [key, opt] : s.opts)
            if (opt->count() > 0) apply_flag(j, spec, key, s.values[key]);
        return run(j);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return usage_exit;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage_exit;
    }
}
