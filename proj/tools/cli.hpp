#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kerrcat/kerr.hpp"

namespace kerrcat::cli {

/// A bad command-line or config value; the message names the key.
class ParamError : public std::invalid_argument {
public:
    ParamError(const std::string& key, const std::string& what) : std::invalid_argument("--" + key + ": " + what) {}
};

/// tau given either as a float or as "p/q pi".
struct TauValue {
    double value = 0.0;
    std::optional<PiFraction> exact;
};

TauValue parseTau(const std::string& text, const std::string& key = "tau");

/// "2", "-1.5", "1.5,0.3" (re,im).
Complex parseAlpha(const std::string& text, const std::string& key = "alpha");

/// Flat `key = value` lines; '#' starts a comment.
std::map<std::string, std::string> parseConfig(const std::string& text);

/// Run the CLI with argv-style arguments (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kerrcat::cli
