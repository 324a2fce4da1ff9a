#include "commutant/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace commutant {

std::string format_double(double v) {
    if (std::isnan(v)) return "null";
    if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

void escape_string(const std::string& s, std::ostream& os) {
    os << '"';
    for (char c : s) {
        switch (c) {
            case '"': os << "\\\""; break;
            case '\\': os << "\\\\"; break;
            case '\n': os << "\\n"; break;
            case '\t': os << "\\t"; break;
            case '\r': os << "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    os << buf;
                } else {
                    os << c;
                }
        }
    }
    os << '"';
}

void dump(const nlohmann::json& j, std::ostream& os, int indent, int depth) {
    const std::string pad(static_cast<size_t>(indent) * (depth + 1), ' ');
    const std::string close_pad(static_cast<size_t>(indent) * depth, ' ');
    switch (j.type()) {
        case nlohmann::json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) os << ",\n";
                first = false;
                os << pad;
                escape_string(it.key(), os);
                os << ": ";
                dump(it.value(), os, indent, depth + 1);
            }
            os << "\n" << close_pad << "}";
            return;
        }
        case nlohmann::json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            os << "[\n";
            bool first = true;
            for (const auto& el : j) {
                if (!first) os << ",\n";
                first = false;
                os << pad;
                dump(el, os, indent, depth + 1);
            }
            os << "\n" << close_pad << "]";
            return;
        }
        case nlohmann::json::value_t::number_float:
            os << format_double(j.get<double>());
            return;
        default:
            os << j.dump();
            return;
    }
}

}  // namespace

std::string dump_deterministic(const nlohmann::json& j, int indent) {
    std::ostringstream os;
    dump(j, os, indent, 0);
    return os.str();
}

nlohmann::json vector_to_json(const Vector& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

nlohmann::json make_report(const std::string& command, const std::string& scenario_id,
                           const nlohmann::json& parameters, const nlohmann::json& results) {
    nlohmann::json r;
    r["command"] = command;
    r["scenario"] = scenario_id;
    r["parameters"] = parameters;
    r["results"] = results;
    r["version"] = kVersion;
    return r;
}

}  // namespace commutant
