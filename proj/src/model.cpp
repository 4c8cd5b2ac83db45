#include "hallab/model.hpp"

#include <json.hpp>

namespace hallab {

namespace {

using nlohmann::json;

std::int64_t get_int(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer())
        throw ModelLoadError(std::string("missing or non-integer field \"") + key + "\"");
    return j[key].get<std::int64_t>();
}

template <class T>
std::vector<T> get_int_list(const json& j, const char* key, std::size_t want) {
    if (!j.contains(key) || !j[key].is_array())
        throw ModelLoadError(std::string("missing or non-array field \"") + key + "\"");
    std::vector<T> out;
    for (const auto& x : j[key]) {
        if (!x.is_number_integer())
            throw ModelLoadError(std::string("non-integer entry in \"") + key + "\"");
        out.push_back(static_cast<T>(x.get<std::int64_t>()));
    }
    if (out.size() != want)
        throw ModelLoadError(std::string("field \"") + key + "\" must have " +
                             std::to_string(want) + " entries");
    return out;
}

// JSON uses 1-based vertex numbers; internal indices are 0-based.
int to_vertex(std::int64_t v, int vertices, const char* what) {
    if (v < 1 || v > vertices)
        throw ModelLoadError(std::string(what) + " " + std::to_string(v) +
                             " outside 1.." + std::to_string(vertices));
    return static_cast<int>(v - 1);
}

} // namespace

std::unique_ptr<Model> load_model(const std::string& json_text, std::int64_t max_n,
                                  bool allow_large) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ModelLoadError(std::string("bad model JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
        throw ModelLoadError("model JSON needs a string \"type\" field");
    const std::string type = j["type"].get<std::string>();

    if (type == "jordan") {
        const std::int64_t q = get_int(j, "q");
        const std::int64_t bound = get_int(j, "bound");
        if (bound < 1 || bound > 64) throw ModelLoadError("jordan bound out of range");
        return make_jordan_model(q, static_cast<int>(bound), max_n, allow_large);
    }

    if (type == "quiver") {
        QuiverSpec spec;
        spec.q = get_int(j, "q");
        const std::int64_t vertices = get_int(j, "vertices");
        if (vertices < 1 || vertices > 16) throw ModelLoadError("vertex count out of range");
        spec.vertices = static_cast<int>(vertices);
        if (!j.contains("arrows") || !j["arrows"].is_array())
            throw ModelLoadError("missing or non-array field \"arrows\"");
        for (const auto& a : j["arrows"]) {
            if (!a.is_array() || a.size() != 2 || !a[0].is_number_integer() ||
                !a[1].is_number_integer())
                throw ModelLoadError("each arrow must be a [source, target] pair");
            spec.arrows.emplace_back(
                to_vertex(a[0].get<std::int64_t>(), spec.vertices, "arrow source"),
                to_vertex(a[1].get<std::int64_t>(), spec.vertices, "arrow target"));
        }
        spec.box = get_int_list<std::int32_t>(j, "box", spec.vertices);
        spec.theta = get_int_list<std::int64_t>(j, "theta", spec.vertices);
        spec.kappa = get_int_list<std::int64_t>(j, "kappa", spec.vertices);
        if (j.contains("framing_vertex"))
            spec.framing_vertex =
                to_vertex(get_int(j, "framing_vertex"), spec.vertices, "framing vertex");
        if (j.contains("duality")) {
            auto d = get_int_list<std::int64_t>(j, "duality", spec.vertices);
            for (auto v : d)
                spec.duality.push_back(to_vertex(v, spec.vertices, "duality image"));
        }
        return make_quiver_model(spec, allow_large);
    }

    throw ModelLoadError("unknown model type \"" + type + "\"");
}

} // namespace hallab
