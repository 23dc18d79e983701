#pragma once

// JSON encodings of circles, triangulations, packings and orbit disks.
//
//   GenCircle:  {"type":"circle","center":[re,im],"radius":r}
//               {"type":"line","normal":[re,im],"offset":d}
//   An oriented disk adds "exterior": true when it is the outside of a circle;
//   a line's disk is the side its normal points to.
//   Points are [re,im], or null for infinity.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "packing.hpp"
#include "reflection_group.hpp"
#include "triangulation.hpp"

namespace gasket {

using json = nlohmann::json;

class format_error : public std::runtime_error {
public:
    explicit format_error(const std::string& what) : std::runtime_error("malformed input: " + what) {}
};

inline json point_to_json(const SpherePoint& p) {
    if (p.is_infinite()) return nullptr;
    return json::array({p.value().real(), p.value().imag()});
}

inline SpherePoint point_from_json(const json& j) {
    if (j.is_null()) return SpherePoint::infinity();
    if (!j.is_array() || j.size() != 2) throw format_error("point must be [re,im] or null");
    return SpherePoint(cplx(j[0].get<double>(), j[1].get<double>()));
}

inline json circle_to_json(const GenCircle& c) {
    if (const auto* k = std::get_if<Circle>(&c))
        return {{"type", "circle"}, {"center", {k->center.real(), k->center.imag()}}, {"radius", k->radius}};
    const auto& l = std::get<Line>(c);
    return {{"type", "line"}, {"normal", {l.normal.real(), l.normal.imag()}}, {"offset", l.offset}};
}

inline GenCircle circle_from_json(const json& j) {
    try {
        const auto type = j.at("type").get<std::string>();
        GenCircle c;
        if (type == "circle") {
            const auto& z = j.at("center");
            c = Circle{cplx(z.at(0).get<double>(), z.at(1).get<double>()), j.at("radius").get<double>()};
        } else if (type == "line") {
            const auto& n = j.at("normal");
            c = Line{cplx(n.at(0).get<double>(), n.at(1).get<double>()), j.at("offset").get<double>()};
        } else {
            throw format_error("unknown circle type " + type);
        }
        validate_circle(c);
        return c;
    } catch (const json::exception& e) {
        throw format_error(e.what());
    }
}

inline json disk_to_json(const Disk& d) {
    json j = circle_to_json(d.boundary());
    if (d.is_exterior()) j["exterior"] = true;
    return j;
}

inline Disk disk_from_json(const json& j) {
    const Disk d = Disk::bounded_by(circle_from_json(j));
    return j.value("exterior", false) ? d.complement() : d;
}

inline json triangulation_to_json(const Triangulation& t) {
    json faces = json::array();
    for (const auto& f : t.faces()) faces.push_back({f[0], f[1], f[2]});
    return {{"vertices", t.vertex_count()}, {"faces", faces}};
}

inline Triangulation triangulation_from_json(const json& j) {
    try {
        std::vector<Face> faces;
        for (const auto& f : j.at("faces")) faces.push_back({f.at(0).get<int>(), f.at(1).get<int>(), f.at(2).get<int>()});
        return Triangulation(j.at("vertices").get<int>(), faces);
    } catch (const json::exception& e) {
        throw format_error(e.what());
    }
}

inline json read_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    try {
        return json::parse(f);
    } catch (const json::exception& e) {
        throw format_error(path + ": " + e.what());
    }
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << text;
    if (!f) throw std::runtime_error("write failed for " + path);
}

/// A builder name, or a path to a triangulation JSON file.
inline Triangulation load_triangulation(const std::string& name_or_path) {
    try {
        return builder(name_or_path);
    } catch (const std::invalid_argument&) {
        std::ifstream probe(name_or_path);
        if (!probe) throw;
    }
    return triangulation_from_json(read_json_file(name_or_path));
}

inline json packing_to_json(const CirclePacking& p) {
    json circles = json::object(), duals = json::object(), tangencies = json::object();
    for (int v = 0; v < p.tri.vertex_count(); ++v) circles[std::to_string(v)] = disk_to_json(p.disks[std::size_t(v)]);
    for (std::size_t f = 0; f < p.dual_disks.size(); ++f) duals[std::to_string(f)] = disk_to_json(p.dual_disks[f]);
    for (const auto& [e, t] : p.tangencies)
        tangencies[std::to_string(e.first) + "-" + std::to_string(e.second)] = point_to_json(t);
    return {{"triangulation", triangulation_to_json(p.tri)},
            {"normalization", p.normalization},
            {"circles", circles},
            {"duals", duals},
            {"tangencies", tangencies}};
}

/// Reads the vertex disks; duals and tangency points are recomputed.
inline CirclePacking packing_from_json(const json& j) {
    try {
        CirclePacking p{triangulation_from_json(j.at("triangulation")), {}, {}, {}, j.value("normalization", "default")};
        const auto& circles = j.at("circles");
        for (int v = 0; v < p.tri.vertex_count(); ++v) p.disks.push_back(disk_from_json(circles.at(std::to_string(v))));
        compute_duals(p);
        return p;
    } catch (const json::exception& e) {
        throw format_error(e.what());
    }
}

inline json orbit_disks_to_json(const std::vector<OrbitDisk>& disks) {
    json out = json::array();
    for (const auto& d : disks)
        out.push_back({{"circle", disk_to_json(d.disk)}, {"generation", d.generation}, {"witness", d.witness}});
    return out;
}

}  // namespace gasket
