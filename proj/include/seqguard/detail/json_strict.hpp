#pragma once

#include <initializer_list>
#include <string>
#include <string_view>

#include <json.hpp>

namespace seqguard::detail {

// Strict-mode helpers: unknown keys and type mismatches are rejected so
// untrusted text can reach typed state only through fixed keys.

template <class E>
[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw E(where.empty() ? what : where + ": " + what);
}

template <class E>
void require_object(const nlohmann::json& j, const std::string& where) {
    if (!j.is_object()) fail<E>(where, "expected an object");
}

template <class E>
void require_keys(const nlohmann::json& j, const std::string& where,
                  std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional = {}) {
    require_object<E>(j, where);
    for (const char* key : required) {
        if (!j.contains(key)) fail<E>(where, std::string("missing key \"") + key + "\"");
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* key : required) known = known || it.key() == key;
        for (const char* key : optional) known = known || it.key() == key;
        if (!known) fail<E>(where, "unknown key \"" + it.key() + "\"");
    }
}

template <class E>
std::string get_string(const nlohmann::json& j, const char* key, const std::string& where) {
    const auto& v = j.at(key);
    if (!v.is_string()) fail<E>(where + "." + key, "expected a string");
    return v.get<std::string>();
}

template <class E>
long long get_int(const nlohmann::json& j, const char* key, const std::string& where) {
    const auto& v = j.at(key);
    if (!v.is_number_integer()) fail<E>(where + "." + key, "expected an integer");
    return v.get<long long>();
}

template <class E>
double get_number(const nlohmann::json& j, const char* key, const std::string& where) {
    const auto& v = j.at(key);
    if (!v.is_number()) fail<E>(where + "." + key, "expected a number");
    return v.get<double>();
}

template <class E>
bool get_bool(const nlohmann::json& j, const char* key, const std::string& where) {
    const auto& v = j.at(key);
    if (!v.is_boolean()) fail<E>(where + "." + key, "expected a boolean");
    return v.get<bool>();
}

template <class E>
const nlohmann::json& get_array(const nlohmann::json& j, const char* key,
                                const std::string& where) {
    const auto& v = j.at(key);
    if (!v.is_array()) fail<E>(where + "." + key, "expected an array");
    return v;
}

} // namespace seqguard::detail
