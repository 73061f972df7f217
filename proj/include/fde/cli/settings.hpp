#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace CLI {
class App;
}

namespace fde::cli {

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Process environment.
std::optional<std::string> process_env(const std::string& name);

/// Parses args (program name excluded) so that each long option takes its
/// value from, in order: the command line, the environment variable
/// FDE_<NAME> (upper case, '-' -> '_'), the JSON config file named by
/// --config or FDE_CONFIG. Config keys are option names, either at top level
/// or under the subcommand's name (which wins).
void parse_layered(CLI::App& app, const std::vector<std::string>& args, const EnvLookup& env = process_env);

}  // namespace fde::cli
