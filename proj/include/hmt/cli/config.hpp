#ifndef HMT_CLI_CONFIG_HPP
#define HMT_CLI_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace hmt::cli {

using json = nlohmann::json;

constexpr int schema_version = 1;

/// Bad input: exit status 3. `path` names the offending field.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& msg)
        : std::runtime_error(path + ": " + msg), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

enum class KeyType { integer, boolean, string, coloring, list, rational };

struct KeySpec {
    std::string name;
    /// "" (top level), "budget" or "instance"
    std::string section;
    KeyType type = KeyType::integer;
    json def;
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    std::vector<std::string> choices;
    std::string help;

    std::string path() const { return section.empty() ? "$." + name : "$." + section + "." + name; }
    std::string flag() const {
        std::string f = name;
        for (auto& c : f)
            if (c == '_') c = '-';
        return f;
    }
};

struct CommandSpec {
    std::string name;
    std::string help;
    std::vector<KeySpec> keys;

    const KeySpec* find(const std::string& section, const std::string& key) const {
        for (const auto& k : keys)
            if (k.section == section && k.name == key) return &k;
        return nullptr;
    }
};

namespace detail {

inline KeySpec integer(std::string name, std::string section, std::int64_t def, std::int64_t lo, std::int64_t hi,
                       std::string help) {
    return {std::move(name), std::move(section), KeyType::integer, def, lo, hi, {}, std::move(help)};
}
inline KeySpec boolean(std::string name, bool def, std::string help) {
    return {std::move(name), "instance", KeyType::boolean, def, 0, 0, {}, std::move(help)};
}
inline KeySpec choice(std::string name, std::string section, std::string def, std::vector<std::string> choices,
                      std::string help) {
    return {std::move(name), std::move(section), KeyType::string, std::move(def), 0, 0, std::move(choices),
            std::move(help)};
}
inline KeySpec text(std::string name, std::string section, std::string def, std::string help) {
    return {std::move(name), std::move(section), KeyType::string, std::move(def), 0, 0, {}, std::move(help)};
}
inline KeySpec coloring(std::string name, std::string def, std::string help) {
    return {std::move(name), "instance", KeyType::coloring, std::move(def), 0, 0, {}, std::move(help)};
}
inline KeySpec list(std::string name, json def, std::string help) {
    return {std::move(name), "instance", KeyType::list, std::move(def), 0, 0, {}, std::move(help)};
}
inline KeySpec rational(std::string name, std::string def, std::string help) {
    return {std::move(name), "instance", KeyType::rational, std::move(def), 0, 0, {}, std::move(help)};
}

inline std::vector<KeySpec> common_keys() {
    return {
        integer("seed", "", 0, 0, INT64_MAX, "seed for every random choice"),
        choice("format", "", "jsonl", {"jsonl", "csv", "pretty"}, "report format"),
        text("out", "", "", "report file (default: $HMT_OUT_DIR/<command>.<ext>, else stdout)"),
        integer("node_limit", "budget", 10'000'000, 1, INT64_MAX, "search node budget"),
        integer("parallelism", "budget", 1, 1, 64, "worker threads"),
    };
}

}  // namespace detail

/// Colorings: constant, parity, mod:K, cardinality, seeded-hash:K[:SEED].
struct ColoringDesc {
    std::string kind;
    std::size_t k = 2;
    std::optional<std::uint64_t> seed;

    std::string str() const {
        if (kind == "mod") return "mod:" + std::to_string(k);
        if (kind == "seeded-hash")
            return "seeded-hash:" + std::to_string(k) + (seed ? ":" + std::to_string(*seed) : std::string());
        return kind;
    }
};

inline ColoringDesc parse_coloring(const std::string& text, const std::string& path) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.empty()) throw ConfigError(path, "empty coloring descriptor");
    auto number = [&](std::size_t i, const char* what) -> std::uint64_t {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(parts.at(i), &used);
            if (used != parts[i].size()) throw std::invalid_argument(what);
            return v;
        } catch (const std::exception&) {
            throw ConfigError(path, std::string("bad ") + what + " in coloring '" + text + "'");
        }
    };
    ColoringDesc c;
    c.kind = parts[0];
    if (c.kind == "constant" || c.kind == "parity" || c.kind == "cardinality") {
        if (parts.size() != 1) throw ConfigError(path, "coloring '" + c.kind + "' takes no parameters");
        return c;
    }
    if (c.kind == "mod" || c.kind == "seeded-hash") {
        if (parts.size() < 2) throw ConfigError(path, "coloring '" + c.kind + "' needs a palette size");
        if (parts.size() > (c.kind == "mod" ? 2U : 3U)) throw ConfigError(path, "too many parameters in '" + text + "'");
        c.k = number(1, "palette size");
        if (c.k == 0 || c.k > 64) throw ConfigError(path, "palette size out of range 1..64");
        if (parts.size() == 3) c.seed = number(2, "seed");
        return c;
    }
    throw ConfigError(path, "unknown coloring '" + c.kind + "'");
}

inline const std::vector<CommandSpec>& command_specs() {
    using namespace detail;
    static const std::vector<CommandSpec> specs = [] {
        std::vector<CommandSpec> s{
            {"search-hindman",
             "monochromatic proper FS set inside {1..horizon}",
             {integer("horizon", "instance", 16, 1, 4096, "largest value N"),
              integer("m", "instance", 3, 1, 20, "number of terms"),
              coloring("coloring", "parity", "vertex coloring of {1..N}")}},
            {"search-mt",
             "block search with a monochromatic sum hypergraph",
             {choice("semigroup", "instance", "naturals", {"naturals", "fin"}, "ground semigroup"),
              list("base", json::array(), "base sequence (default 2^(i-1) or {i})"),
              integer("horizon", "instance", 16, 1, 20, "largest base index"),
              integer("m", "instance", 2, 1, 16, "number of blocks"),
              integer("d", "instance", 2, 1, 4, "hyperedge size"),
              coloring("coloring", "parity", "coloring of d-sets"),
              text("vertex_coloring", "instance", "", "vertex coloring for the two-coloring route (d = 2)"),
              boolean("proper", true, "require a proper sumsequence")}},
            {"threshold",
             "least N forcing a monochromatic {x, y, x+y}",
             {integer("colors", "instance", 2, 1, 3, "palette size"),
              integer("m", "instance", 2, 2, 2, "pattern size"),
              boolean("repeats", false, "allow x = y"),
              integer("max_n", "instance", 200, 1, 10000, "search bound")}},
            {"proper-or-collapse",
             "proper sumsequence or collapse element",
             {choice("semigroup", "instance", "fin", {"naturals", "fin"}, "ground semigroup"),
              list("base", json::array(), "sequence (default: seeded sets inside {1..6})"),
              integer("depth", "instance", 5, 2, 16, "index bound"),
              integer("m", "instance", 0, 0, 16, "blocks (0: max(2, depth-1))")}},
            {"verify-filter-laws",
             "exhaustive duality-law scan",
             {integer("ground", "instance", 3, 1, 4, "ground set size")}},
            {"chain-check",
             "depth-bounded free idempotent chain check",
             {choice("chain", "instance", "progressions", {"progressions", "density", "fs-tail"}, "chain kind"),
              integer("depth", "instance", 4, 1, 8, "depth"),
              integer("lookahead", "instance", 2, 0, 8, "extra chain indices consulted"),
              integer("modulus", "instance", 4, 1, 64, "A = residues mod modulus"),
              list("residues", json::array({0, 1}), "residues kept in A"),
              rational("delta", "2/3", "density threshold"),
              list("base", json::array(), "fs-tail base (default 2^(i-1))"),
              integer("horizon", "instance", 16, 1, 20, "fs-tail index bound and window")}},
            {"play-game",
             "filter game: scripted Alice against the base-set Bob",
             {choice("filter", "instance", "cofinite", {"cofinite", "dyadic", "triadic-tail"}, "generated filter"),
              integer("alice", "instance", 0, 0, 1'000'000, "scripted strategy number"),
              integer("horizon", "instance", 16, 1, 256, "rounds played")}},
            {"game-transfer",
             "Gfin to G1 conversion and diagonal covers",
             {integer("instances", "instance", 10, 1, 1000, "seeded instances"),
              integer("horizon", "instance", 16, 1, 48, "points checked"),
              integer("t", "instance", 2, 1, 16, "multiplicity threshold"),
              integer("rounds", "instance", 8, 1, 32, "rounds per game"),
              integer("depth", "instance", 3, 1, 6, "largest diagonal n"),
              integer("prefix", "instance", 20, 4, 40, "cover prefix")}},
            {"cover-partition",
             "blocks of descending covers with colored unions",
             {choice("space", "instance", "intervals", {"intervals", "cofinite", "discrete"}, "instance family"),
              integer("length", "instance", 12, 1, 20, "cover enumeration length"),
              integer("universe", "instance", 0, 0, 4096, "points (0: automatic)"),
              integer("horizon", "instance", 16, 1, 4096, "points checked"),
              integer("truncation", "instance", 8, 2, 16, "cofinite: complements inside {1..T}"),
              integer("horizon_bits", "instance", 4, 1, 15, "cofinite: horizon complements inside {1..H}"),
              integer("points", "instance", 10, 1, 1024, "discrete: K"),
              integer("m", "instance", 2, 1, 8, "number of blocks"),
              integer("d", "instance", 2, 1, 3, "edge size"),
              coloring("coloring", "constant", "edge coloring (Fin coloring for cofinite)"),
              text("vertex_coloring", "instance", "", "vertex coloring (optional)"),
              choice("target", "instance", "lambda", {"op", "asc", "lambda", "omega", "gamma"}, "cover kind"),
              integer("t", "instance", 2, 1, 64, "Lambda multiplicity"),
              integer("s", "instance", 2, 1, 64, "Omega subset size"),
              integer("f", "instance", 2, 0, 64, "Gamma exclusions")}},
            {"encode-classical",
             "cofinite-sets encoding and the Fin round trip",
             {integer("truncation", "instance", 8, 2, 16, "complements inside {1..T}"),
              integer("horizon_bits", "instance", 4, 1, 15, "horizon complements inside {1..H}"),
              coloring("coloring", "seeded-hash:2", "pair coloring of Fin"),
              integer("m", "instance", 3, 1, 8, "number of blocks"),
              integer("t", "instance", 2, 1, 64, "Lambda multiplicity")}},
            {"verify-report",
             "re-check every record of a JSON-lines report",
             {text("report", "instance", "", "report file")}},
        };
        for (auto& c : s) {
            auto common = common_keys();
            c.keys.insert(c.keys.begin(), common.begin(), common.end());
        }
        return s;
    }();
    return specs;
}

inline const CommandSpec& command_spec(const std::string& name) {
    for (const auto& c : command_specs())
        if (c.name == name) return c;
    throw ConfigError("$.command", "unknown command '" + name + "'");
}

/**
 * Parses config text, rejecting duplicate keys (with their path) and
 * anything that is not JSON.
 */
inline json parse_json_strict(const std::string& text) {
    std::vector<std::set<std::string>> seen;
    std::vector<std::string> path{"$"};
    std::vector<bool> in_array;
    std::optional<std::string> dup;
    auto cb = [&](int, json::parse_event_t ev, json& parsed) {
        switch (ev) {
            case json::parse_event_t::object_start:
                seen.emplace_back();
                in_array.push_back(false);
                break;
            case json::parse_event_t::array_start: in_array.push_back(true); break;
            case json::parse_event_t::key: {
                const auto k = parsed.get<std::string>();
                if (!seen.back().insert(k).second && !dup) {
                    std::string p;
                    for (const auto& s : path) p += s + ".";
                    dup = p + k;
                }
                path.push_back(k);
                break;
            }
            case json::parse_event_t::object_end:
                seen.pop_back();
                in_array.pop_back();
                if (path.size() > 1 && !in_array.empty() && !in_array.back()) path.pop_back();
                break;
            case json::parse_event_t::array_end:
                in_array.pop_back();
                if (path.size() > 1 && !in_array.empty() && !in_array.back()) path.pop_back();
                break;
            case json::parse_event_t::value:
                if (!in_array.empty() && !in_array.back() && path.size() > 1) path.pop_back();
                break;
        }
        return true;
    };
    json j;
    try {
        j = json::parse(text, cb);
    } catch (const json::parse_error& e) {
        throw ConfigError("$", std::string("not valid JSON: ") + e.what());
    }
    if (dup) throw ConfigError(*dup, "duplicate key");
    return j;
}

struct RunConfig {
    std::string command;
    std::uint64_t seed = 0;
    std::string format = "jsonl";
    std::string out;
    json budget = json::object();
    json instance = json::object();

    /// The reproducible part: everything except where and how to write.
    json descriptor() const {
        return json{{"command", command}, {"seed", seed}, {"budget", budget}, {"instance", instance}};
    }

    std::int64_t integer(const std::string& key) const { return instance.at(key).get<std::int64_t>(); }
    std::size_t size(const std::string& key) const { return instance.at(key).get<std::size_t>(); }
    bool flag(const std::string& key) const { return instance.at(key).get<bool>(); }
    std::string text(const std::string& key) const { return instance.at(key).get<std::string>(); }
    std::optional<ColoringDesc> coloring(const std::string& key) const {
        const auto s = text(key);
        if (s.empty()) return std::nullopt;
        return parse_coloring(s, "$.instance." + key);
    }
};

namespace detail {

inline std::string type_name(KeyType t) {
    switch (t) {
        case KeyType::integer: return "an integer";
        case KeyType::boolean: return "a boolean";
        case KeyType::string: return "a string";
        case KeyType::coloring: return "a coloring descriptor string";
        case KeyType::list: return "an array";
        case KeyType::rational: return "a fraction string like \"2/3\"";
    }
    return "?";
}

inline json check_value(const KeySpec& k, const json& v) {
    const auto p = k.path();
    switch (k.type) {
        case KeyType::integer: {
            if (!v.is_number_integer()) throw ConfigError(p, "expected " + type_name(k.type));
            const auto x = v.is_number_unsigned() && v.get<std::uint64_t>() > std::uint64_t(INT64_MAX)
                               ? INT64_MAX
                               : v.get<std::int64_t>();
            if (x < k.lo || x > k.hi)
                throw ConfigError(p, std::to_string(x) + " outside " + std::to_string(k.lo) + ".." + std::to_string(k.hi));
            return x;
        }
        case KeyType::boolean:
            if (!v.is_boolean()) throw ConfigError(p, "expected " + type_name(k.type));
            return v;
        case KeyType::string:
            if (!v.is_string()) throw ConfigError(p, "expected " + type_name(k.type));
            if (!k.choices.empty()) {
                bool ok = false;
                for (const auto& c : k.choices) ok = ok || c == v.get<std::string>();
                if (!ok) {
                    std::string all;
                    for (const auto& c : k.choices) all += (all.empty() ? "" : "|") + c;
                    throw ConfigError(p, "'" + v.get<std::string>() + "' is not one of " + all);
                }
            }
            return v;
        case KeyType::coloring:
            if (!v.is_string()) throw ConfigError(p, "expected " + type_name(k.type));
            if (!v.get<std::string>().empty()) return parse_coloring(v.get<std::string>(), p).str();
            return v;
        case KeyType::list: {
            if (!v.is_array()) throw ConfigError(p, "expected " + type_name(k.type));
            for (std::size_t i = 0; i < v.size(); ++i) {
                const auto& e = v[i];
                const auto ep = p + "[" + std::to_string(i) + "]";
                if (e.is_number_unsigned()) continue;
                if (e.is_array()) {
                    for (std::size_t j = 0; j < e.size(); ++j)
                        if (!e[j].is_number_unsigned())
                            throw ConfigError(ep + "[" + std::to_string(j) + "]", "expected a nonnegative integer");
                    continue;
                }
                throw ConfigError(ep, "expected a nonnegative integer or an array of them");
            }
            return v;
        }
        case KeyType::rational: {
            if (!v.is_string()) throw ConfigError(p, "expected " + type_name(k.type));
            const auto s = v.get<std::string>();
            const auto slash = s.find('/');
            try {
                std::size_t a = 0, b = 0;
                const auto num = std::stoll(s.substr(0, slash), &a);
                const auto den = slash == std::string::npos ? 1 : std::stoll(s.substr(slash + 1), &b);
                if (a != s.substr(0, slash).size() || (slash != std::string::npos && b != s.size() - slash - 1))
                    throw std::invalid_argument("junk");
                if (den <= 0 || num <= 0 || num >= den) throw ConfigError(p, "fraction must lie strictly between 0 and 1");
            } catch (const ConfigError&) {
                throw;
            } catch (const std::exception&) {
                throw ConfigError(p, "expected " + type_name(k.type));
            }
            return v;
        }
    }
    return v;
}

}  // namespace detail

/**
 * Validates a config object and fills defaults. Layout:
 *   {"command": ..., "seed": ..., "format": ..., "out": ...,
 *    "budget": {"node_limit": ..., "parallelism": ...},
 *    "instance": {command keys}}
 * Unknown keys are rejected with their path.
 */
inline RunConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("$", "config must be an object");
    if (!j.contains("command")) throw ConfigError("$.command", "missing");
    if (!j["command"].is_string()) throw ConfigError("$.command", "expected a string");
    const auto& spec = command_spec(j["command"].get<std::string>());
    RunConfig rc;
    rc.command = spec.name;

    json merged = json::object();
    auto take = [&](const std::string& section, const json& obj) {
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            if (section.empty() && (it.key() == "command" || it.key() == "budget" || it.key() == "instance")) continue;
            const auto* k = spec.find(section, it.key());
            if (!k) {
                throw ConfigError(section.empty() ? "$." + it.key() : "$." + section + "." + it.key(),
                                  "unknown key for " + spec.name);
            }
            merged[k->path()] = detail::check_value(*k, it.value());
        }
    };
    take("", j);
    for (const char* section : {"budget", "instance"}) {
        if (!j.contains(section)) continue;
        if (!j[section].is_object()) throw ConfigError(std::string("$.") + section, "expected an object");
        take(section, j[section]);
    }
    for (const auto& k : spec.keys) {
        const json v = merged.contains(k.path()) ? merged[k.path()] : k.def;
        if (k.section == "budget") rc.budget[k.name] = v;
        else if (k.section == "instance") rc.instance[k.name] = v;
        else if (k.name == "seed") rc.seed = v.get<std::uint64_t>();
        else if (k.name == "format") rc.format = v.get<std::string>();
        else if (k.name == "out") rc.out = v.get<std::string>();
    }
    return rc;
}

inline RunConfig parse_config_text(const std::string& text) { return parse_config(parse_json_strict(text)); }

/**
 * Flag text to a JSON value of the key's type. Lists accept JSON arrays
 * or comma-separated integers; booleans accept true/false/1/0.
 */
inline json flag_value(const KeySpec& k, const std::string& text) {
    const auto p = k.path();
    switch (k.type) {
        case KeyType::integer:
            try {
                std::size_t used = 0;
                const auto v = std::stoll(text, &used);
                if (used != text.size()) throw std::invalid_argument("junk");
                return v;
            } catch (const std::exception&) {
                throw ConfigError(p, "expected an integer, got '" + text + "'");
            }
        case KeyType::boolean:
            if (text == "true" || text == "1" || text.empty()) return true;
            if (text == "false" || text == "0") return false;
            throw ConfigError(p, "expected true or false, got '" + text + "'");
        case KeyType::list: {
            if (!text.empty() && text.front() == '[') {
                try {
                    return parse_json_strict(text);
                } catch (const ConfigError& e) {
                    throw ConfigError(p, e.what());
                }
            }
            json arr = json::array();
            std::stringstream ss(text);
            for (std::string part; std::getline(ss, part, ',');) {
                try {
                    std::size_t used = 0;
                    const auto v = std::stoull(part, &used);
                    if (used != part.size()) throw std::invalid_argument("junk");
                    arr.push_back(v);
                } catch (const std::exception&) {
                    throw ConfigError(p, "expected comma-separated integers, got '" + text + "'");
                }
            }
            return arr;
        }
        default: return text;
    }
}

/// Sets key `name` (flag spelling accepted) of the command inside config object `j`.
inline void apply_flag(json& j, const CommandSpec& spec, const std::string& name, const std::string& text) {
    for (const auto& k : spec.keys) {
        if (k.name != name && k.flag() != name) continue;
        const auto v = flag_value(k, text);
        if (k.section.empty()) j[k.name] = v;
        else j[k.section][k.name] = v;
        return;
    }
    throw ConfigError("--" + name, "unknown flag for " + spec.name);
}

/// Default report path: `out` if set, else $HMT_OUT_DIR/<command>.<ext>, else "" (stdout).
inline std::string report_path(const RunConfig& rc, const char* out_dir) {
    if (!rc.out.empty()) return rc.out;
    if (!out_dir || !*out_dir) return "";
    const std::string ext = rc.format == "jsonl" ? "jsonl" : rc.format == "csv" ? "csv" : "txt";
    std::string dir = out_dir;
    if (dir.back() != '/') dir += '/';
    return dir + rc.command + "." + ext;
}

}  // namespace hmt::cli

#endif
