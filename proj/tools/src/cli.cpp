// Copyright 2026 The minent Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "minent_cli/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "commands.hpp"
#include "minent/errors.hpp"
#include "minent/parallel.hpp"

namespace minent::cli {
namespace {

std::string kebab(std::string name) {
  for (auto& c : name) {
    if (c == '_') {
      c = '-';
    }
  }
  return name;
}

const char* kind_name(Kind kind) {
  switch (kind) {
    case Kind::Integer:
      return "an integer";
    case Kind::Count:
      return "a non-negative integer";
    case Kind::Number:
      return "a number";
    case Kind::Boolean:
      return "a boolean";
    case Kind::Text:
      return "a string";
    case Kind::Factors:
      return "a factor list";
    case Kind::Beta:
      return "\"optimal\", \"unscaled\" or a list of scales";
    case Kind::NumberOrList:
      return "a number or a list of numbers";
    case Kind::Json:
      return "JSON";
  }
  return "a value";
}

bool matches(Kind kind, const json& v) {
  switch (kind) {
    case Kind::Integer:
      return v.is_number_integer();
    case Kind::Count:
      return v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0);
    case Kind::Number:
      return v.is_number();
    case Kind::Boolean:
      return v.is_boolean();
    case Kind::Text:
      return v.is_string();
    case Kind::Factors:
      return v.is_array() && !v.empty();
    case Kind::Beta:
      if (v.is_string()) {
        return v == "optimal" || v == "unscaled";
      }
      if (!v.is_array() || v.empty()) {
        return false;
      }
      for (const auto& b : v) {
        if (!b.is_number()) {
          return false;
        }
      }
      return true;
    case Kind::NumberOrList:
      if (v.is_null() || v.is_number()) {
        return true;
      }
      if (!v.is_array() || v.empty()) {
        return false;
      }
      for (const auto& b : v) {
        if (!b.is_number()) {
          return false;
        }
      }
      return true;
    case Kind::Json:
      return true;
  }
  return false;
}

/// Inline flag text is read as JSON when it parses, as a bare string otherwise.
json parse_flag(const std::string& text) {
  json v = json::parse(text, nullptr, false);
  if (v.is_discarded()) {
    return json(text);
  }
  return v;
}

std::vector<Key> common_keys() {
  return {
      {"seed", 1, Kind::Count, "master seed"},
      {"out", "", Kind::Text, "output prefix; writes <out>.csv and <out>.report.json"},
      {"threads", 0, Kind::Count, "worker threads (0: MINENT_THREADS or hardware); never affects results"},
  };
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot read config file '" + path + "'");
  }
  json cfg = json::parse(in, nullptr, false);
  if (cfg.is_discarded() || !cfg.is_object()) {
    throw ConfigError("config file '" + path + "' is not a JSON object");
  }
  return cfg;
}

std::string hex(std::uint64_t v, int digits) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return std::string(buf).substr(16 - static_cast<std::size_t>(digits));
}

std::string csv_cell(const json& v) {
  if (v.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  if (v.is_string()) {
    return v.get<std::string>();
  }
  return v.dump();
}

void write_csv(const std::filesystem::path& path, const Table& table, const std::string& subcommand,
               const std::string& hash) {
  std::ofstream os(path);
  if (!os) {
    throw ConfigError("cannot write '" + path.string() + "'");
  }
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    os << (c ? "," : "") << table.header[c];
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      os << (c ? "," : "") << csv_cell(row[c]);
    }
    os << '\n';
  }
  os << "# subcommand: " << subcommand << '\n' << "# config_hash: " << hash << '\n';
}

json table_rows(const Table& table) {
  json rows = json::array();
  for (const auto& row : table.rows) {
    json r = json::object();
    for (std::size_t c = 0; c < row.size() && c < table.header.size(); ++c) {
      r[table.header[c]] = row[c];
    }
    rows.push_back(r);
  }
  return rows;
}

int execute(const Command& command, const std::string& config_path, const std::map<std::string, std::string>& flags,
            const std::vector<Key>& keys, std::ostream& out, std::ostream& err) {
  json cfg = json::object();
  for (const auto& key : keys) {
    cfg[key.name] = key.fallback;
  }
  if (!config_path.empty()) {
    const json file = load_config(config_path);
    for (const auto& [name, value] : file.items()) {
      if (name == "subcommand") {
        if (value != command.name) {
          throw ConfigError("config is for subcommand " + value.dump() + ", not '" + command.name + "'");
        }
        continue;
      }
      if (!cfg.contains(name)) {
        throw ConfigError("unknown config key '" + name + "' for " + command.name);
      }
      cfg[name] = value;
    }
  }
  for (const auto& [name, text] : flags) {
    cfg[name] = parse_flag(text);
  }
  for (const auto& key : keys) {
    if (!matches(key.kind, cfg[key.name])) {
      throw ConfigError("config key '" + key.name + "' must be " + kind_name(key.kind) + ", got " +
                        cfg[key.name].dump());
    }
  }

  set_thread_count(cfg["threads"].get<std::size_t>());
  const std::string prefix = cfg["out"].get<std::string>();
  json echo = cfg;
  echo.erase("out");
  echo.erase("threads");
  echo["subcommand"] = command.name;
  const std::uint64_t digest = fnv1a(echo.dump());
  const std::string hash = hex(digest, 16);

  const auto start = std::chrono::steady_clock::now();
  Outcome outcome = command.handler(cfg);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json report = {
      {"subcommand", command.name},
      {"config", echo},
      {"config_hash", hash},
      {"run_id", hex(digest, 12)},
      {"status", outcome.violation ? "violation" : "ok"},
      {"results", outcome.results},
      {"rows", table_rows(outcome.table)},
      {"warnings", outcome.warnings},
      {"wall_time_seconds", wall},
  };
  if (prefix.empty()) {
    out << report.dump(2) << '\n';
  } else {
    const std::filesystem::path base(prefix);
    if (base.has_parent_path()) {
      std::filesystem::create_directories(base.parent_path());
    }
    if (!outcome.table.header.empty()) {
      write_csv(prefix + ".csv", outcome.table, command.name, hash);
    }
    std::ofstream rs(prefix + ".report.json");
    if (!rs) {
      throw ConfigError("cannot write '" + prefix + ".report.json'");
    }
    rs << report.dump(2) << '\n';
    json summary = {{"subcommand", command.name}, {"status", report["status"]}, {"results", outcome.results}};
    out << summary.dump(2) << '\n';
  }
  for (const auto& w : outcome.warnings) {
    err << "warning: " << w << '\n';
  }
  return outcome.violation ? kExitViolation : kExitOk;
}

}  // namespace

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Minimal entropy experiments on products of hyperbolic spaces", "minent"};
  app.require_subcommand(1);
  const std::vector<Command> all = commands();

  struct Bound {
    const Command* command;
    CLI::App* app;
    std::vector<Key> keys;
    std::string config_path;
    std::map<std::string, std::string> raw;
  };
  std::vector<Bound> bound;
  bound.reserve(all.size());
  for (const auto& command : all) {
    Bound b{&command, app.add_subcommand(command.name, command.description), command.keys, {}, {}};
    for (auto& key : common_keys()) {
      b.keys.push_back(key);
    }
    bound.push_back(std::move(b));
  }
  for (auto& b : bound) {
    b.app->add_option("--config", b.config_path, "JSON config file");
    for (const auto& key : b.keys) {
      std::string flags = "--" + kebab(key.name);
      if (key.name.find('_') != std::string::npos) {
        flags += ",--" + key.name;
      }
      b.app->add_option(flags, b.raw[key.name], key.help + " (default " + key.fallback.dump() + ")");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  for (auto& b : bound) {
    if (!b.app->parsed()) {
      continue;
    }
    std::map<std::string, std::string> given;
    for (const auto& key : b.keys) {
      if (b.app->get_option("--" + kebab(key.name))->count() > 0) {
        given[key.name] = b.raw[key.name];
      }
    }
    try {
      return execute(*b.command, b.config_path, given, b.keys, out, err);
    } catch (const CounterexampleFound& e) {
      err << "violation: " << e.what() << '\n';
      return kExitViolation;
    } catch (const Error& e) {
      err << "error: " << e.what() << '\n';
      return kExitConfig;
    } catch (const json::exception& e) {
      err << "error: " << e.what() << '\n';
      return kExitConfig;
    } catch (const std::filesystem::filesystem_error& e) {
      err << "error: " << e.what() << '\n';
      return kExitConfig;
    }
  }
  return kExitConfig;
}

}  // namespace minent::cli
