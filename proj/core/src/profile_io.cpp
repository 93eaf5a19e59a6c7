/*
Copyright 2026 The legodnn Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "legodnn/profile_io.hpp"

#include <fstream>
#include <sstream>

namespace legodnn {

namespace {

const nlohmann::json& field(const nlohmann::json& obj, const char* name, const std::string& where) {
    auto it = obj.find(name);
    if (it == obj.end()) {
        throw ParseError(where + ": missing field '" + name + "'");
    }
    return *it;
}

Bytes integer_field(const nlohmann::json& obj, const char* name, const std::string& where) {
    const auto& v = field(obj, name, where);
    if (!v.is_number_integer()) {
        throw ParseError(where + ": field '" + name + "' must be an integer");
    }
    return v.get<Bytes>();
}

double number_field(const nlohmann::json& obj, const char* name, const std::string& where) {
    const auto& v = field(obj, name, where);
    if (!v.is_number()) {
        throw ParseError(where + ": field '" + name + "' must be a number");
    }
    return v.get<double>();
}

}  // namespace

DnnProfile profile_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) {
        throw ParseError("profile: document must be a JSON object");
    }
    const auto& format = field(doc, "format", "profile");
    if (!format.is_string() || format.get<std::string>() != kProfileFormat) {
        throw ParseError("profile: expected format \"" + std::string(kProfileFormat) + "\"");
    }
    DnnProfile profile;
    const auto& id = field(doc, "dnn_id", "profile");
    if (!id.is_string()) {
        throw ParseError("profile: field 'dnn_id' must be a string");
    }
    profile.dnn_id = id.get<std::string>();
    profile.base_size_bytes = integer_field(doc, "base_size_bytes", "profile");
    if (doc.contains("original_accuracy")) {
        profile.original_accuracy = number_field(doc, "original_accuracy", "profile");
    }
    const auto& blocks = field(doc, "blocks", "profile");
    if (!blocks.is_array()) {
        throw ParseError("profile: field 'blocks' must be an array");
    }
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const std::string where = "profile: blocks[" + std::to_string(b) + "]";
        const auto& jb = blocks[b];
        if (!jb.is_object()) {
            throw ParseError(where + " must be an object");
        }
        BlockProfile block;
        block.block_id = static_cast<int>(integer_field(jb, "block_id", where));
        const auto& descs = field(jb, "descendants", where);
        if (!descs.is_array()) {
            throw ParseError(where + ": field 'descendants' must be an array");
        }
        for (std::size_t d = 0; d < descs.size(); ++d) {
            const std::string dwhere = where + ".descendants[" + std::to_string(d) + "]";
            const auto& jd = descs[d];
            if (!jd.is_object()) {
                throw ParseError(dwhere + " must be an object");
            }
            DescendantProfile desc;
            desc.accuracy_loss = number_field(jd, "accuracy_loss", dwhere);
            desc.size_bytes = integer_field(jd, "size_bytes", dwhere);
            desc.latency_reduction = number_field(jd, "latency_reduction", dwhere);
            block.descendants.push_back(desc);
        }
        profile.blocks.push_back(std::move(block));
    }
    derive_fields(profile);
    return profile;
}

DnnProfile parse_profile(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("profile: ") + e.what());
    }
    return profile_from_json(doc);
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

DnnProfile load_profile(const std::filesystem::path& path) {
    try {
        return parse_profile(read_text_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

nlohmann::ordered_json profile_to_json(const DnnProfile& profile) {
    nlohmann::ordered_json doc;
    doc["format"] = kProfileFormat;
    doc["dnn_id"] = profile.dnn_id;
    doc["base_size_bytes"] = profile.base_size_bytes;
    doc["original_accuracy"] = profile.original_accuracy;
    auto blocks = nlohmann::ordered_json::array();
    for (const auto& block : profile.blocks) {
        nlohmann::ordered_json jb;
        jb["block_id"] = block.block_id;
        auto descs = nlohmann::ordered_json::array();
        for (const auto& desc : block.descendants) {
            nlohmann::ordered_json jd;
            jd["accuracy_loss"] = desc.accuracy_loss;
            jd["size_bytes"] = desc.size_bytes;
            jd["latency_reduction"] = desc.latency_reduction;
            descs.push_back(std::move(jd));
        }
        jb["descendants"] = std::move(descs);
        blocks.push_back(std::move(jb));
    }
    doc["blocks"] = std::move(blocks);
    return doc;
}

std::string serialize_profile(const DnnProfile& profile) {
    return profile_to_json(profile).dump(2) + "\n";
}

}  // namespace legodnn
