#include "bessel/report.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace bessel {

namespace {

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

void append_map(std::ostream& os, const std::map<std::string, double>& m) {
    os << '{';
    bool first = true;
    for (const auto& [k, v] : m) {
        if (!first) os << ',';
        first = false;
        os << '"' << json_escape(k) << "\":" << format_double(v);
    }
    os << '}';
}

std::optional<double> opt_from(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string report_status(const VerificationReport& r) {
    if (r.inconclusive) return "inconclusive";
    return r.passed ? "true" : "false";
}

void write_report_csv(std::ostream& os, const std::vector<VerificationReport>& reports) {
    os << "name,delta,x,T,n,dt,analytic,oracle,mc_mean,mc_se,passed\n";
    auto field = [&](const VerificationReport& r, const char* key) {
        auto it = r.inputs.find(key);
        return it == r.inputs.end() ? std::string() : format_double(it->second);
    };
    for (const auto& r : reports) {
        os << r.name << ',' << field(r, "delta") << ',' << field(r, "x") << ',' << field(r, "T")
           << ',' << field(r, "n") << ',' << field(r, "dt") << ','
           << (r.analytic ? format_double(*r.analytic) : std::string()) << ','
           << (r.oracle ? format_double(*r.oracle) : std::string()) << ','
           << (r.mc ? format_double(r.mc->mean) : std::string()) << ','
           << (r.mc ? format_double(r.mc->std_error) : std::string()) << ','
           << report_status(r) << '\n';
    }
}

void write_report_jsonl(std::ostream& os, const std::vector<VerificationReport>& reports) {
    for (const auto& r : reports) {
        os << "{\"name\":\"" << json_escape(r.name) << "\",\"inputs\":";
        append_map(os, r.inputs);
        os << ",\"analytic\":" << (r.analytic ? format_double(*r.analytic) : "null");
        os << ",\"oracle\":" << (r.oracle ? format_double(*r.oracle) : "null");
        if (r.mc) {
            os << ",\"mc\":{\"mean\":" << format_double(r.mc->mean)
               << ",\"std_error\":" << format_double(r.mc->std_error) << ",\"n\":" << r.mc->n
               << ",\"seed\":" << r.mc->seed << '}';
        } else {
            os << ",\"mc\":null";
        }
        os << ",\"tolerance_spec\":\"" << json_escape(r.tolerance_spec) << "\"";
        os << ",\"passed\":" << (r.passed ? "true" : "false");
        os << ",\"inconclusive\":" << (r.inconclusive ? "true" : "false");
        os << ",\"note\":\"" << json_escape(r.note) << "\",\"witness\":";
        append_map(os, r.witness);
        os << "}\n";
    }
}

std::vector<VerificationReport> read_report_jsonl(std::istream& is) {
    std::vector<VerificationReport> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line);
        VerificationReport r;
        r.name = j.at("name").get<std::string>();
        for (const auto& [k, v] : j.at("inputs").items()) r.inputs[k] = v.get<double>();
        r.analytic = opt_from(j, "analytic");
        r.oracle = opt_from(j, "oracle");
        if (j.contains("mc") && !j.at("mc").is_null()) {
            McEstimate mc;
            mc.mean = j["mc"].at("mean").get<double>();
            mc.std_error = j["mc"].at("std_error").get<double>();
            mc.n = j["mc"].at("n").get<std::size_t>();
            mc.seed = j["mc"].at("seed").get<std::uint64_t>();
            r.mc = mc;
        }
        r.tolerance_spec = j.at("tolerance_spec").get<std::string>();
        r.passed = j.at("passed").get<bool>();
        r.inconclusive = j.at("inconclusive").get<bool>();
        r.note = j.at("note").get<std::string>();
        for (const auto& [k, v] : j.at("witness").items()) r.witness[k] = v.get<double>();
        out.push_back(std::move(r));
    }
    return out;
}

int exit_code_for(const std::vector<VerificationReport>& reports) {
    bool any_inconclusive = false;
    for (const auto& r : reports) {
        if (r.inconclusive) {
            any_inconclusive = true;
        } else if (!r.passed) {
            return 2;
        }
    }
    return any_inconclusive ? 3 : 0;
}

} // namespace bessel
