#pragma once

#include <fstream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tec/document.hpp"
#include "tec/log.hpp"
#include "tec/types.hpp"

namespace tec {

struct RawDocument {
    std::string id;
    std::string lang;
    std::string text;
};

// One entity-resolved document plus the language it was extracted from.
struct EntitizedRecord {
    std::string lang;
    EntityDocument doc;
};

namespace detail {

inline nlohmann::json parse_jsonl_line(const std::string& line, std::size_t lineno,
                                       const std::string& path) {
    try {
        return nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        fail("invalid JSON at line ", lineno, " in ", path, ": ", e.what());
    }
}

inline bool blank(const std::string& line) {
    return line.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace detail

inline std::vector<RawDocument> load_raw_corpus(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open corpus file: ", path);
    std::vector<RawDocument> docs;
    std::set<std::string> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::blank(line)) continue;
        const nlohmann::json j = detail::parse_jsonl_line(line, lineno, path);
        RawDocument doc;
        try {
            doc.id = j.at("id").get<std::string>();
            doc.lang = j.at("lang").get<std::string>();
            doc.text = j.at("text").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            fail("malformed document at line ", lineno, " in ", path, ": ", e.what());
        }
        if (doc.id.empty()) fail("empty document id at line ", lineno, " in ", path);
        if (doc.lang.empty()) fail("empty document lang at line ", lineno, " in ", path);
        if (!seen.insert(doc.id).second) {
            log_warn("duplicate document id in ", path, ": ", doc.id);
        }
        docs.push_back(std::move(doc));
    }
    if (docs.empty()) fail("corpus file has no documents: ", path);
    return docs;
}

inline void save_raw_corpus(const std::vector<RawDocument>& docs, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail("cannot open for writing: ", path);
    for (const auto& doc : docs) {
        nlohmann::json j;
        j["id"] = doc.id;
        j["lang"] = doc.lang;
        j["text"] = doc.text;
        out << j.dump() << '\n';
    }
    if (!out.good()) fail("write failed: ", path);
}

inline void save_entitized_corpus(const std::vector<EntitizedRecord>& records,
                                  const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail("cannot open for writing: ", path);
    for (const auto& record : records) {
        nlohmann::json j;
        j["id"] = record.doc.doc_id;
        j["lang"] = record.lang;
        j["entities"] = record.doc.entities;
        out << j.dump() << '\n';
    }
    if (!out.good()) fail("write failed: ", path);
}

inline std::vector<EntityDocument> load_entitized_corpus(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open corpus file: ", path);
    std::vector<EntityDocument> docs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::blank(line)) continue;
        const nlohmann::json j = detail::parse_jsonl_line(line, lineno, path);
        try {
            docs.push_back(EntityDocument::from_entities(
                j.at("id").get<std::string>(), j.at("entities").get<std::vector<EntityId>>()));
        } catch (const nlohmann::json::exception& e) {
            fail("malformed document at line ", lineno, " in ", path, ": ", e.what());
        }
    }
    if (docs.empty()) fail("corpus file has no documents: ", path);
    return docs;
}

inline void save_weights(const std::vector<std::pair<std::string, std::vector<double>>>& rows,
                         const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail("cannot open for writing: ", path);
    for (const auto& [id, weights] : rows) {
        nlohmann::json j;
        j["id"] = id;
        j["weights"] = weights;
        out << j.dump() << '\n';
    }
    if (!out.good()) fail("write failed: ", path);
}

inline std::vector<std::pair<std::string, std::vector<double>>> load_weights(
    const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open weights file: ", path);
    std::vector<std::pair<std::string, std::vector<double>>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::blank(line)) continue;
        const nlohmann::json j = detail::parse_jsonl_line(line, lineno, path);
        try {
            rows.emplace_back(j.at("id").get<std::string>(),
                              j.at("weights").get<std::vector<double>>());
        } catch (const nlohmann::json::exception& e) {
            fail("malformed weights row at line ", lineno, " in ", path, ": ", e.what());
        }
    }
    return rows;
}

}  // namespace tec
