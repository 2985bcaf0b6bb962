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

#ifndef MINENT_CLI_COMMANDS_HPP
#define MINENT_CLI_COMMANDS_HPP

#include <functional>
#include <string>
#include <vector>

#include "minent/serialization.hpp"

namespace minent::cli {

enum class Kind {
  Integer,
  Count,
  Number,
  Boolean,
  Text,
  Factors,
  Beta,
  NumberOrList,
  Json,
};

struct Key {
  std::string name;
  json fallback;
  Kind kind;
  std::string help;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<json>> rows;
};

struct Outcome {
  json results = json::object();
  Table table;
  std::vector<std::string> warnings;
  bool violation = false;
};

struct Command {
  std::string name;
  std::string description;
  std::vector<Key> keys;
  std::function<Outcome(const json&)> handler;
};

std::vector<Command> commands();

}  // namespace minent::cli

#endif  // MINENT_CLI_COMMANDS_HPP
