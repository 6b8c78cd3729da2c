// Copyright 2026 The gpylab Authors
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

#pragma once

#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include <fmt/format.h>

namespace gpylab::csv {

// Every CSV starts with "# gpylab-csv <schema> v<version>" followed by the
// column header row. Doubles use 17 significant digits so reruns are
// byte-identical and values round-trip.
inline void write_preamble(std::ostream& out, std::string_view schema, int version,
                           std::initializer_list<std::string_view> columns) {
    out << "# gpylab-csv " << schema << " v" << version << '\n';
    bool first = true;
    for (auto c : columns) {
        if (!first) out << ',';
        out << c;
        first = false;
    }
    out << '\n';
}

inline void write_preamble(std::ostream& out, std::string_view schema, int version,
                           const std::vector<std::string>& columns) {
    out << "# gpylab-csv " << schema << " v" << version << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << '\n';
}

inline std::string cell(double v) { return fmt::format("{:.17g}", v); }
inline std::string cell(bool v) { return v ? "1" : "0"; }
inline std::string cell(std::string_view v) {
    if (v.find_first_of(",\"\n") == std::string_view::npos) return std::string(v);
    std::string q = "\"";
    for (char c : v) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}
inline std::string cell(const std::string& v) { return cell(std::string_view(v)); }
inline std::string cell(const char* v) { return cell(std::string_view(v)); }
template <class T>
    requires std::is_integral_v<T>
std::string cell(T v) {
    return std::to_string(v);
}

// Writes one row; fields are joined with ','.
template <class... Ts>
void write_row(std::ostream& out, const Ts&... fields) {
    bool first = true;
    ((out << (first ? "" : ",") << cell(fields), first = false), ...);
    out << '\n';
}

}  // namespace gpylab::csv
