#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "cazackit/sim.hpp"

namespace cazackit::config {

using Section = std::map<std::string, std::string>;

/// Flat `key = value` text with `[section]` headers; `#` starts a comment.
/// Keys before the first header land in section "".
struct ConfigFile {
  std::map<std::string, Section> sections;
  std::vector<std::string> order;  // section names in file order

  bool has(const std::string& name) const { return sections.count(name) != 0; }
  const Section& at(const std::string& name) const;
};

ConfigFile parse(std::istream& is);
ConfigFile load(const std::string& path);

std::vector<std::string> split_list(const std::string& v);
std::vector<double> parse_number_list(const std::string& v);  // "a,b,c" or "lo:step:hi"
bool parse_bool(const std::string& v);
long parse_long(const std::string& v);

/// Scenario with a named preset applied: tn, ntn or interference.
SimScenario preset(const std::string& name);

/// Applies scenario keys (a `scenario` key selects the preset first). Throws
/// ValidationError on unknown keys or malformed values.
void apply(SimScenario& s, const Section& keys);

/// Keys understood by apply(), for usage messages.
const std::vector<std::string>& scenario_keys();

}  // namespace cazackit::config
