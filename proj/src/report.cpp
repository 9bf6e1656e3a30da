#include <hjsep/report.hpp>

#include <ctime>

namespace hjsep {

std::string fnv1a_hex(const std::string& data) {
    uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string iso_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

nlohmann::ordered_json DiagnosticsReport::to_json() const {
    nlohmann::ordered_json j;
    j["tool_version"] = tool_version;
    j["generated_at"] = iso_timestamp();
    j["input_digest"] = input_digest;
    j["command"] = command;

    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        nlohmann::ordered_json cj;
        cj["name"] = c.name;
        cj["gating"] = c.gating;
        cj["evaluated"] = c.evaluated;
        cj["skipped"] = c.skipped;
        cj["max_residual"] = c.max_residual;
        cj["argmax_index"] = c.argmax_index;
        if (c.argmax_point) {
            nlohmann::ordered_json pj;
            pj["t"] = c.argmax_point->t;
            pj["q"] = std::vector<double>(c.argmax_point->q.begin(), c.argmax_point->q.end());
            pj["p"] = std::vector<double>(c.argmax_point->p.begin(), c.argmax_point->p.end());
            cj["argmax_point"] = pj;
        } else {
            cj["argmax_point"] = nullptr;
        }
        cj["threshold"] = c.threshold;
        cj["passed"] = c.passed;
        if (!c.note.empty()) cj["note"] = c.note;
        arr.push_back(std::move(cj));
    }
    j["checks"] = std::move(arr);
    j["overall_pass"] = overall_pass;
    return j;
}

std::string DiagnosticsReport::to_string() const { return to_json().dump(2) + "\n"; }

const CheckRecord* DiagnosticsReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

}  // namespace hjsep
