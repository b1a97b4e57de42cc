#pragma once

#include <initializer_list>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "parrep/errors.hpp"

// Schema-checking accessors for document parsing.  Every access carries the
// document path of the field so a SchemaError always points at the offender.

namespace parrep::jsonu {

using nlohmann::json;

inline const json& require(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) throw SchemaError(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(path + "." + key, "missing required field");
    return *it;
}

inline void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                           const std::string& path) {
    if (!obj.is_object()) throw SchemaError(path, "expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool found = false;
        for (const char* k : known) {
            if (it.key() == k) found = true;
        }
        if (!found) throw SchemaError(path + "." + it.key(), "unknown field");
    }
}

inline double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw SchemaError(path, "expected a number");
    return v.get<double>();
}

inline long as_integer(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw SchemaError(path, "expected an integer");
    return v.get<long>();
}

inline int as_int(const json& v, const std::string& path) {
    return static_cast<int>(as_integer(v, path));
}

inline std::string as_string(const json& v, const std::string& path) {
    if (!v.is_string()) throw SchemaError(path, "expected a string");
    return v.get<std::string>();
}

inline std::vector<int> as_int_list(const json& v, const std::string& path) {
    if (!v.is_array()) throw SchemaError(path, "expected a list of integers");
    std::vector<int> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(as_int(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

inline json parse_document(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError("$", std::string("not valid JSON: ") + e.what());
    }
}

}  // namespace parrep::jsonu
