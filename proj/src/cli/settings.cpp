#include "fde/cli/settings.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <set>

namespace fde::cli {

std::optional<std::string> process_env(const std::string& name) {
    if (const char* v = std::getenv(name.c_str())) return std::string(v);
    return std::nullopt;
}

namespace {

std::string env_name(const std::string& opt) {
    std::string out = "FDE_";
    for (char c : opt) out.push_back(c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    return out;
}

std::optional<std::string> scalar(const nlohmann::json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_boolean()) return j.get<bool>() ? "true" : "false";
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    if (j.is_number()) {
        std::ostringstream os;
        os << j.get<double>();
        return os.str();
    }
    return std::nullopt;
}

bool truthy(const std::string& v) {
    std::string l = v;
    std::transform(l.begin(), l.end(), l.begin(), [](unsigned char c) { return std::tolower(c); });
    return l == "1" || l == "true" || l == "yes" || l == "on";
}

}  // namespace

void parse_layered(CLI::App& app, const std::vector<std::string>& args, const EnvLookup& env) {
    std::set<std::string> given;
    CLI::App* sub = nullptr;
    std::optional<std::string> config_path;
    for (size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.rfind("--", 0) == 0) {
            const auto eq = a.find('=');
            const std::string name = a.substr(2, eq == std::string::npos ? std::string::npos : eq - 2);
            given.insert(name);
            if (name == "config") {
                if (eq != std::string::npos) config_path = a.substr(eq + 1);
                else if (i + 1 < args.size()) config_path = args[i + 1];
            }
        } else if (!sub) {
            for (auto* s : app.get_subcommands([](CLI::App*) { return true; }))
                if (s->get_name() == a) sub = s;
        }
    }
    if (!config_path) config_path = env("FDE_CONFIG");

    nlohmann::json config = nlohmann::json::object();
    if (config_path) {
        std::ifstream in(*config_path);
        if (!in) throw CLI::FileError::Missing(*config_path);
        try {
            config = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw CLI::ConversionError(std::string("config file: ") + e.what());
        }
    }

    std::vector<std::string> full = args;
    auto fill = [&](CLI::App* owner, const std::string& section) {
        for (const CLI::Option* opt : owner->get_options()) {
            const auto& lnames = opt->get_lnames();
            if (lnames.empty()) continue;
            const std::string& name = lnames.front();
            if (name == "help" || name == "config" || given.count(name)) continue;
            std::optional<std::string> value = env(env_name(name));
            if (!value && !section.empty() && config.contains(section) && config[section].contains(name))
                value = scalar(config[section][name]);
            if (!value && config.contains(name)) value = scalar(config[name]);
            if (!value) continue;
            if (opt->get_expected_max() == 0) {
                if (truthy(*value)) full.push_back("--" + name);
            } else {
                full.push_back("--" + name);
                full.push_back(*value);
            }
        }
    };
    fill(&app, "");
    if (sub) fill(sub, sub->get_name());

    std::vector<std::string> rev(full.rbegin(), full.rend());
    app.parse(rev);
}

}  // namespace fde::cli
