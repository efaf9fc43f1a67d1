#pragma once

#include <initializer_list>
#include <set>
#include <string>
#include <string_view>

#include <json.hpp>

#include "occam_rrm/core/error.hpp"

namespace occam_rrm {

using Json = nlohmann::json;

/// Typed, path-aware view of one JSON object in a config document. Every
/// failure surfaces as a ConfigError carrying the JSON pointer of the field.
class JsonObject {
public:
    JsonObject(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_.empty() ? "/" : path_, "expected an object");
    }

    [[nodiscard]] const std::string& path() const { return path_; }
    [[nodiscard]] std::string path_of(std::string_view key) const { return path_ + "/" + std::string(key); }
    [[nodiscard]] bool has(std::string_view key) const { return j_.contains(std::string(key)); }
    [[nodiscard]] const Json& raw(std::string_view key) const {
        if (!has(key)) throw ConfigError(path_of(key), "required field missing");
        return j_.at(std::string(key));
    }
    [[nodiscard]] const Json& json() const { return j_; }

    template <class T>
    [[nodiscard]] T get(std::string_view key) const {
        const Json& v = raw(key);
        try {
            check_kind<T>(v, path_of(key));
            return v.get<T>();
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(path_of(key), e.what());
        }
    }

    template <class T>
    [[nodiscard]] T get_or(std::string_view key, T fallback) const {
        return has(key) ? get<T>(key) : std::move(fallback);
    }

    [[nodiscard]] JsonObject object(std::string_view key) const { return {raw(key), path_of(key)}; }

    /// Rejects keys outside `known`, so typos do not silently fall back to
    /// defaults.
    void only(std::initializer_list<std::string_view> known) const {
        std::set<std::string_view> allowed(known);
        for (const auto& [k, v] : j_.items())
            if (!allowed.contains(k)) throw ConfigError(path_of(k), "unknown field");
    }

private:
    template <class T>
    static void check_kind(const Json& v, const std::string& path) {
        if constexpr (std::is_same_v<T, bool>) {
            if (!v.is_boolean()) throw ConfigError(path, "expected a boolean");
        } else if constexpr (std::is_floating_point_v<T>) {
            if (!v.is_number()) throw ConfigError(path, "expected a number");
        } else if constexpr (std::is_integral_v<T>) {
            if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
            if constexpr (std::is_unsigned_v<T>)
                if (v.get<long long>() < 0) throw ConfigError(path, "expected a nonnegative integer");
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!v.is_string()) throw ConfigError(path, "expected a string");
        }
    }

    const Json& j_;
    std::string path_;
};

} // namespace occam_rrm
