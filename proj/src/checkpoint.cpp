#include "netgov/checkpoint.hpp"

#include <fstream>

#include "netgov/errors.hpp"

namespace netgov::nn {

nlohmann::json tensors_to_json(const ParamList& params) {
    nlohmann::json arr = nlohmann::json::array();
    for (const ParamRef& p : params) arr.push_back(*p.value);
    return arr;
}

void tensors_from_json(const nlohmann::json& arr, const ParamList& params) {
    if (!arr.is_array() || arr.size() != params.size())
        throw ShapeError("checkpoint: tensor count mismatch");
    for (std::size_t i = 0; i < params.size(); ++i) {
        const auto values = arr[i].get<Vector>();
        if (values.size() != params[i].value->size())
            throw ShapeError("checkpoint: tensor size mismatch");
        *params[i].value = values;
    }
}

void write_json_file(const std::string& path, const nlohmann::json& doc) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << doc.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path);
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path);
    nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw IoError("invalid JSON: " + path);
    return doc;
}

}  // namespace netgov::nn
