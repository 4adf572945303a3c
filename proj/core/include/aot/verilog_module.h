// Copyright 2026 The AoT Harness Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AOT_VERILOG_MODULE_H_
#define AOT_VERILOG_MODULE_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aot {

enum class PortDirection { kInput, kOutput, kInout };

struct Port {
  std::string name;
  PortDirection direction = PortDirection::kInput;
  int msb = 0;
  int lsb = 0;
  bool is_reg = false;
  bool is_signed = false;

  int width() const { return (msb >= lsb ? msb - lsb : lsb - msb) + 1; }
};

// The declaration part of a Verilog module: name and ports. Handles ANSI
// port lists and, for non-ANSI headers, the direction declarations that
// follow the port list.
struct ModuleHeader {
  std::string name;
  std::vector<Port> ports;
  // The header text up to and including the ';' that closes the port list
  // (plus any non-ANSI declarations), comments stripped.
  std::string declaration;

  const Port* Find(std::string_view port_name) const;
  std::vector<const Port*> Inputs() const;
  std::vector<const Port*> Outputs() const;
};

// Throws PreconditionError when no `module <name>` declaration or no port is
// found.
ModuleHeader ParseModuleHeader(std::string_view text);

// Cheap name lookup used by extraction; empty when absent.
std::string ModuleName(std::string_view header_text);

// Removes // and /* */ comments, keeping string literals intact.
std::string StripVerilogComments(std::string_view text);

}  // namespace aot

#endif  // AOT_VERILOG_MODULE_H_
