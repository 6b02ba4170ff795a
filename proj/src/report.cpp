#include "wfl/report.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace wfl {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

static nlohmann::ordered_json report_json(const BoundReport& r) {
    nlohmann::ordered_json j;
    j["check_id"] = r.check_id;
    j["passed"] = r.passed;
    j["worst_ratio"] = r.worst_ratio;
    j["constants"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.constants) j["constants"][k] = v;
    j["witness"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.witness) j["witness"][k] = v;
    j["grid_spec"] = r.grid_spec;
    j["note"] = r.note;
    return j;
}

std::string BoundReport::to_json() const { return report_json(*this).dump(2); }

std::string BoundReport::csv_header() {
    return "check_id,passed,worst_ratio,constants,witness,grid_spec,note";
}

static std::string kv_list(const std::map<std::string, double>& m) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, v] : m) {
        if (!first) os << ';';
        os << k << '=' << format_double(v);
        first = false;
    }
    return os.str();
}

std::string BoundReport::to_csv_row() const {
    std::ostringstream os;
    os << check_id << ',' << (passed ? "pass" : "fail") << ','
       << format_double(worst_ratio) << ",\"" << kv_list(constants) << "\",\""
       << kv_list(witness) << "\",\"" << grid_spec << "\",\"" << note << '"';
    return os.str();
}

std::string reports_to_json(const std::vector<BoundReport>& reports) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) arr.push_back(report_json(r));
    return arr.dump(2);
}

} // namespace wfl
