#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "occam_rrm/core/error.hpp"
#include "occam_rrm/core/json_io.hpp"

namespace occam_rrm {

struct SchemaViolation {
    std::string path; ///< JSON pointer into the instance
    std::string message;
};

/// Validator for the JSON Schema subset used by the shipped schemas:
/// type, enum, const, properties, required, additionalProperties, items,
/// minItems, minimum, exclusiveMinimum, maximum, oneOf, anyOf and local
/// `$ref`s into `$defs`.
class SchemaValidator {
public:
    explicit SchemaValidator(Json schema) : root_(std::move(schema)) {}

    [[nodiscard]] std::vector<SchemaViolation> violations(const Json& instance) const {
        std::vector<SchemaViolation> out;
        check(root_, instance, "", out);
        return out;
    }

    /// Throws ConfigError at the first violation.
    void validate(const Json& instance) const {
        auto v = violations(instance);
        if (!v.empty()) throw ConfigError(v.front().path.empty() ? "/" : v.front().path, v.front().message);
    }

private:
    static bool has_type(const Json& v, const std::string& t) {
        if (t == "object") return v.is_object();
        if (t == "array") return v.is_array();
        if (t == "string") return v.is_string();
        if (t == "boolean") return v.is_boolean();
        if (t == "null") return v.is_null();
        if (t == "integer") return v.is_number_integer() || (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>());
        if (t == "number") return v.is_number();
        return false;
    }

    static std::string escape(const std::string& key) {
        std::string out;
        for (char c : key) {
            if (c == '~') out += "~0";
            else if (c == '/') out += "~1";
            else out += c;
        }
        return out;
    }

    const Json& resolve(const Json& s) const {
        if (!s.is_object() || !s.contains("$ref")) return s;
        const std::string ref = s.at("$ref").get<std::string>();
        const std::string prefix = "#/$defs/";
        if (ref.rfind(prefix, 0) != 0) throw PreconditionError("schema: unsupported $ref '" + ref + "'");
        return root_.at("$defs").at(ref.substr(prefix.size()));
    }

    void check(const Json& schema_in, const Json& v, const std::string& path, std::vector<SchemaViolation>& out) const {
        const Json& s = resolve(schema_in);
        if (s.is_boolean()) {
            if (!s.get<bool>()) out.push_back({path, "not allowed"});
            return;
        }
        if (s.contains("type")) {
            const auto& t = s.at("type");
            bool ok = false;
            std::string names;
            if (t.is_string()) {
                ok = has_type(v, t.get<std::string>());
                names = t.get<std::string>();
            } else {
                for (const auto& x : t) {
                    ok = ok || has_type(v, x.get<std::string>());
                    names += (names.empty() ? "" : " or ") + x.get<std::string>();
                }
            }
            if (!ok) {
                out.push_back({path, "expected " + names});
                return;
            }
        }
        if (s.contains("enum")) {
            bool found = false;
            for (const auto& e : s.at("enum")) found = found || e == v;
            if (!found) out.push_back({path, "value " + v.dump() + " not in " + s.at("enum").dump()});
        }
        if (s.contains("const") && s.at("const") != v) out.push_back({path, "expected " + s.at("const").dump()});
        if (v.is_number()) {
            double x = v.get<double>();
            if (s.contains("minimum") && x < s.at("minimum").get<double>())
                out.push_back({path, "must be >= " + s.at("minimum").dump()});
            if (s.contains("exclusiveMinimum") && x <= s.at("exclusiveMinimum").get<double>())
                out.push_back({path, "must be > " + s.at("exclusiveMinimum").dump()});
            if (s.contains("maximum") && x > s.at("maximum").get<double>())
                out.push_back({path, "must be <= " + s.at("maximum").dump()});
        }
        if (v.is_object()) {
            if (s.contains("required"))
                for (const auto& k : s.at("required"))
                    if (!v.contains(k.get<std::string>())) out.push_back({path + "/" + escape(k.get<std::string>()), "required field missing"});
            const Json* props = s.contains("properties") ? &s.at("properties") : nullptr;
            for (const auto& [k, x] : v.items()) {
                std::string p = path + "/" + escape(k);
                if (props && props->contains(k)) {
                    check(props->at(k), x, p, out);
                } else if (s.contains("additionalProperties")) {
                    const auto& ap = s.at("additionalProperties");
                    if (ap.is_boolean()) {
                        if (!ap.get<bool>()) out.push_back({p, "unknown field"});
                    } else {
                        check(ap, x, p, out);
                    }
                }
            }
        }
        if (v.is_array()) {
            if (s.contains("minItems") && v.size() < s.at("minItems").get<std::size_t>())
                out.push_back({path, "needs at least " + s.at("minItems").dump() + " items"});
            if (s.contains("items"))
                for (std::size_t i = 0; i < v.size(); ++i) check(s.at("items"), v[i], path + "/" + std::to_string(i), out);
        }
        if (s.contains("anyOf") || s.contains("oneOf")) {
            bool one = s.contains("oneOf");
            const auto& alts = s.at(one ? "oneOf" : "anyOf");
            std::size_t matches = 0;
            std::vector<SchemaViolation> first;
            for (const auto& alt : alts) {
                std::vector<SchemaViolation> sub;
                check(alt, v, path, sub);
                if (sub.empty()) ++matches;
                else if (first.empty()) first = sub;
            }
            if (matches == 0) {
                out.push_back({first.empty() ? path : first.front().path,
                               "matches none of the allowed forms" + (first.empty() ? "" : " (" + first.front().message + ")")});
            } else if (one && matches > 1) {
                out.push_back({path, "matches more than one allowed form"});
            }
        }
    }

    Json root_;
};

} // namespace occam_rrm
