#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tec/types.hpp"

namespace tec {

// A document reduced to its entity identifiers, in order of appearance.
// length == entities.size() == sum of term frequencies; zero-length documents
// are representable (entity-free text) and flagged by consumers.
struct EntityDocument {
    std::string doc_id;
    std::vector<EntityId> entities;
    std::map<EntityId, int> tf;

    int length() const { return static_cast<int>(entities.size()); }
    bool empty() const { return entities.empty(); }

    static EntityDocument from_entities(std::string doc_id, std::vector<EntityId> entities) {
        EntityDocument doc;
        doc.doc_id = std::move(doc_id);
        doc.entities = std::move(entities);
        for (const auto& e : doc.entities) ++doc.tf[e];
        return doc;
    }

    friend bool operator==(const EntityDocument&, const EntityDocument&) = default;
};

}  // namespace tec
