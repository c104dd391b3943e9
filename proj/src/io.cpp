#include "tgeom/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace tgeom {

using nlohmann::json;

json vec_to_json(const Vec& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Vec vec_from_json(const json& j) {
    if (!j.is_array()) throw InputError("expected an array of numbers");
    Vec v(j.size());
    for (size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw InputError("expected an array of numbers");
        v[i] = j[i].get<double>();
    }
    return v;
}

json mat_to_json(const Mat& m) {
    json a = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vec_to_json(m.row(i).transpose()));
    return a;
}

json tensor_to_json(const Tensor3& t) {
    json a = json::array();
    for (int i = 0; i < t.d; ++i) {
        json b = json::array();
        for (int k = 0; k < t.d; ++k) {
            json c = json::array();
            for (int l = 0; l < t.d; ++l) c.push_back(t(i, k, l));
            b.push_back(c);
        }
        a.push_back(b);
    }
    return a;
}

json tensor_to_json(const Tensor4& t) {
    json a = json::array();
    for (int i = 0; i < t.d; ++i) {
        json b = json::array();
        for (int k = 0; k < t.d; ++k) {
            json c = json::array();
            for (int l = 0; l < t.d; ++l) {
                json e = json::array();
                for (int m = 0; m < t.d; ++m) e.push_back(t(i, k, l, m));
                c.push_back(e);
            }
            b.push_back(c);
        }
        a.push_back(b);
    }
    return a;
}

json world_spec_to_json(const WorldSpec& s) {
    json j;
    j["kind"] = to_string(s.kind);
    j["dim"] = s.dim;
    const bool diagonal = s.metric.isDiagonal(0.0);
    j["metric"] = diagonal ? vec_to_json(s.metric.diagonal()) : mat_to_json(s.metric);
    if (s.b.size() > 0) j["b"] = vec_to_json(s.b);
    if (s.kind == WorldKind::case1 || s.kind == WorldKind::case2) j["alpha"] = s.alpha;
    if (s.kind == WorldKind::case2) j["beta"] = s.beta;
    if (!s.a3.empty()) j["a3"] = s.a3;
    return j;
}

WorldSpec world_spec_from_json(const json& j) {
    try {
        if (!j.is_object()) throw InputError("world spec must be a JSON object");
        WorldSpec s;
        s.kind = world_kind_from_string(j.at("kind").get<std::string>());
        s.dim = j.at("dim").get<int>();
        const json& m = j.at("metric");
        if (!m.is_array() || m.empty()) throw InputError("metric must be a nonempty array");
        if (m[0].is_array()) {
            s.metric = Mat(m.size(), m.size());
            for (size_t i = 0; i < m.size(); ++i) {
                Vec row = vec_from_json(m[i]);
                if (row.size() != static_cast<Eigen::Index>(m.size())) throw InputError("metric must be square");
                s.metric.row(i) = row.transpose();
            }
        } else {
            s.metric = Mat(vec_from_json(m).asDiagonal());
        }
        if (j.contains("b")) s.b = vec_from_json(j["b"]);
        if (j.contains("alpha")) s.alpha = j["alpha"].get<double>();
        if (j.contains("beta")) s.beta = j["beta"].get<double>();
        if (j.contains("a3")) s.a3 = j["a3"].get<std::vector<double>>();
        s.validate();
        return s;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed world spec: ") + e.what());
    }
}

WorldSpec load_world_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open world spec '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InputError("malformed JSON in '" + path + "': " + e.what());
    }
    return world_spec_from_json(j);
}

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) throw InputError("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw InputError("cannot rename onto '" + path + "': " + ec.message());
    }
}

}  // namespace tgeom
