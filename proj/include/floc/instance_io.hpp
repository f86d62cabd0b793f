#pragma once

#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "floc/geometry.hpp"
#include "floc/mechanisms.hpp"

namespace floc {

// On-disk instance document: {"points": [[x,y],...], "prediction": [x,y],
// "metadata": {...}}. 1D instances carry y = 0 and metadata "dimension": "1".
struct InstanceFile {
    std::vector<Point> points;
    Point prediction;
    std::map<std::string, std::string> metadata;

    friend bool operator==(const InstanceFile&, const InstanceFile&) = default;
};

inline Instance to_instance(const InstanceFile& file) {
    return Instance(file.points, file.prediction);
}

namespace detail {

inline Point parse_pair(const nlohmann::json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2)
        throw std::runtime_error(field + ": expected a pair [x, y]");
    if (!j[0].is_number() || !j[1].is_number())
        throw std::runtime_error(field + ": coordinate is not a number");
    const double x = j[0].get<double>();
    const double y = j[1].get<double>();
    if (!std::isfinite(x) || !std::isfinite(y))
        throw std::runtime_error(field + ": coordinate is not finite");
    return {x, y};
}

}  // namespace detail

inline InstanceFile parse_instance_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::runtime_error("instance: expected a JSON object");
    if (!j.contains("points")) throw std::runtime_error("points: missing");
    if (!j.contains("prediction")) throw std::runtime_error("prediction: missing");
    const auto& pts = j.at("points");
    if (!pts.is_array()) throw std::runtime_error("points: expected an array");
    if (pts.empty()) throw std::runtime_error("points: empty instance");

    InstanceFile file;
    file.points.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        file.points.push_back(detail::parse_pair(pts[i], "points[" + std::to_string(i) + "]"));
    file.prediction = detail::parse_pair(j.at("prediction"), "prediction");

    if (j.contains("metadata")) {
        const auto& meta = j.at("metadata");
        if (!meta.is_object()) throw std::runtime_error("metadata: expected an object");
        for (const auto& [key, value] : meta.items()) {
            if (!value.is_string())
                throw std::runtime_error("metadata." + key + ": expected a string");
            file.metadata[key] = value.get<std::string>();
        }
    }
    return file;
}

inline InstanceFile read_instance_file(std::istream& in) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("instance: invalid JSON: ") + e.what());
    }
    return parse_instance_json(j);
}

inline InstanceFile read_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    return read_instance_file(in);
}

inline nlohmann::json to_json(const InstanceFile& file) {
    nlohmann::json j;
    auto& pts = j["points"] = nlohmann::json::array();
    for (const Point& p : file.points) pts.push_back({p.x, p.y});
    j["prediction"] = {file.prediction.x, file.prediction.y};
    j["metadata"] = nlohmann::json::object();
    for (const auto& [key, value] : file.metadata) j["metadata"][key] = value;
    return j;
}

inline void write_instance_file(std::ostream& out, const InstanceFile& file) {
    out << to_json(file).dump(2) << '\n';
}

inline void write_instance_file(const std::string& path, const InstanceFile& file) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    write_instance_file(out, file);
}

}  // namespace floc
