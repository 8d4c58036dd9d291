/*
 * Copyright 2026 The medsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace medsim {

using PromptVars = std::map<std::string, std::string, std::less<>>;

/// Substitutes `{identifier}` placeholders ([a-z_][a-z0-9_]*). Anything else in
/// braces (JSON examples inside a prompt) is left untouched. An identifier
/// without a value throws Errc::TemplateError.
std::string render_template(std::string_view tmpl, const PromptVars& vars);

/// Placeholder names referenced by a template, in first-use order.
std::vector<std::string> template_placeholders(std::string_view tmpl);

/// Named prompt templates. Built-in defaults can be replaced file by file from
/// a directory of `<name>.txt` files.
class PromptLibrary {
 public:
  static const PromptLibrary& builtin();

  PromptLibrary();

  /// Every `<name>.txt` in `dir` whose name matches a known template
  /// replaces it; unknown names throw Errc::TemplateError.
  void load_overrides(const std::filesystem::path& dir);
  void set(std::string_view name, std::string tmpl);

  [[nodiscard]] const std::string& get(std::string_view name) const;
  [[nodiscard]] std::string render(std::string_view name, const PromptVars& vars) const;
  [[nodiscard]] std::vector<std::string> names() const;

 private:
  std::map<std::string, std::string, std::less<>> templates_;
};

}  // namespace medsim
