/*
* Copyright (C) 2026 The apis authors
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

#include "apis/errors.hpp"
#include "apis/params.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace apis {

using KeyValues = std::map<std::string, double>;

struct LoadedParams {
    Params params;
    std::optional<ParamsRaw> raw; // present when the source used measured (raw) keys
};

namespace detail {

// keys that exist only in the measured form, and only in the rescaled form
inline constexpr std::string_view raw_only_keys[]     = {"K", "xi_h", "xi_m", "alpha_hat", "beta_mh", "beta_mh2", "beta_hm"};
inline constexpr std::string_view derived_only_keys[] = {"K_hat", "alpha", "beta_mh_hat", "beta_mh_tilde", "beta_hm_hat"};

inline bool contains(std::span<const std::string_view> keys, std::string_view k)
{
    return std::find(keys.begin(), keys.end(), k) != keys.end();
}

inline bool known_key(std::string_view k)
{
    for (auto& [n, m] : params_fields) {
        if (n == k) {
            return true;
        }
    }
    for (auto& [n, m] : raw_fields) {
        if (n == k) {
            return true;
        }
    }
    return false;
}

inline std::string trim(std::string s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    const auto e = s.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& key, std::string text)
{
    text = trim(std::move(text));
    double v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw LoadError("value of '" + key + "' is not a number: '" + text + "'");
    }
    return v;
}

} // namespace detail

/// Reads `key = value` lines (`;` and `#` start comments). Sections are not used.
inline KeyValues read_key_values(std::istream& in, const std::string& origin = "<stream>")
{
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::ini_parser::read_ini(in, tree);
    }
    catch (const pt::ini_parser_error& e) {
        throw LoadError(origin + ": " + e.message() + " at line " + std::to_string(e.line()));
    }
    KeyValues kv;
    for (auto& [key, node] : tree) {
        if (!node.empty()) {
            throw LoadError(origin + ": sections are not supported ('" + key + "')");
        }
        if (!detail::known_key(key)) {
            throw LoadError(origin + ": unknown key '" + key + "'");
        }
        kv[key] = detail::parse_number(key, node.data());
    }
    return kv;
}

inline KeyValues read_key_values_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw LoadError("cannot open parameter file '" + path + "'");
    }
    return read_key_values(in, path);
}

/// Applies `key=value` overrides on top of loaded values.
inline void apply_overrides(KeyValues& kv, const std::vector<std::string>& overrides)
{
    for (auto& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) {
            throw LoadError("override '" + o + "' is not key=value");
        }
        const std::string key = detail::trim(o.substr(0, eq));
        if (!detail::known_key(key)) {
            throw LoadError("unknown key '" + key + "'");
        }
        kv[key] = detail::parse_number(key, o.substr(eq + 1));
    }
}

/// Builds parameters from key values. Raw keys go through derive_params; mixing a
/// raw-only key with a rescaled-only key is an error naming both.
inline LoadedParams params_from_key_values(const KeyValues& kv)
{
    std::string raw_key, derived_key;
    for (auto& [k, v] : kv) {
        if (!detail::known_key(k)) {
            throw LoadError("unknown key '" + k + "'");
        }
        if (raw_key.empty() && detail::contains(detail::raw_only_keys, k)) {
            raw_key = k;
        }
        if (derived_key.empty() && detail::contains(detail::derived_only_keys, k)) {
            derived_key = k;
        }
    }
    if (!raw_key.empty() && !derived_key.empty()) {
        throw LoadError("both raw key '" + raw_key + "' and rescaled key '" + derived_key + "' given");
    }
    auto require = [&](std::string_view k) {
        auto it = kv.find(std::string(k));
        if (it == kv.end()) {
            throw LoadError("missing key '" + std::string(k) + "'");
        }
        return it->second;
    };
    LoadedParams out;
    try {
        if (!raw_key.empty()) {
            ParamsRaw raw;
            for (auto& [n, m] : raw_fields) {
                if (n == "xi_h" || n == "xi_m" || n == "rho") {
                    if (auto it = kv.find(std::string(n)); it != kv.end()) {
                        raw.*m = it->second;
                    }
                    continue;
                }
                raw.*m = require(n);
            }
            out.params = derive_params(raw);
            out.raw    = raw;
        }
        else {
            for (auto& [n, m] : params_fields) {
                if (n == "rho") {
                    if (auto it = kv.find("rho"); it != kv.end()) {
                        out.params.rho = it->second;
                    }
                    continue;
                }
                out.params.*m = require(n);
            }
            out.params.validate();
        }
    }
    catch (const DomainError& e) {
        throw LoadError(std::string("invalid parameters: ") + e.what());
    }
    return out;
}

/// Loads a parameter file and applies overrides.
inline LoadedParams load_params(const std::string& path, const std::vector<std::string>& overrides = {})
{
    KeyValues kv = read_key_values_file(path);
    apply_overrides(kv, overrides);
    return params_from_key_values(kv);
}

/// Flat text form of a parameter set, readable by load_params.
inline std::string to_key_values(const Params& p)
{
    std::ostringstream os;
    os.precision(17);
    for (auto& [n, m] : params_fields) {
        os << n << " = " << p.*m << "\n";
    }
    return os.str();
}

} // namespace apis
