#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tec/linalg.hpp"
#include "tec/types.hpp"

namespace tec {

enum class Source { LM, Graph, Fused };

inline std::string source_name(Source s) {
    switch (s) {
        case Source::LM: return "LM";
        case Source::Graph: return "GRAPH";
        case Source::Fused: return "FUSED";
    }
    return "?";
}

// Immutable map EntityId -> unit vector for one knowledge source. Vectors are
// L2-normalized on insertion, so every consumer may assume unit norm.
// Iteration is sorted by EntityId for run-to-run determinism.
class EmbeddingStore {
  public:
    EmbeddingStore(int dim, Source source) : dim_(dim), source_(source) {
        if (dim <= 0) fail("embedding dimension must be positive, got ", dim);
    }

    int dim() const { return dim_; }
    Source source() const { return source_; }
    std::size_t size() const { return vectors_.size(); }
    bool empty() const { return vectors_.empty(); }

    // Normalizes and stores; rejects wrong dimension, zero and non-finite input.
    void add(const EntityId& id, Vec v) {
        if (id.empty()) fail("empty entity id in embedding store");
        if (static_cast<int>(v.size()) != dim_) {
            fail("embedding for ", id, " has length ", v.size(), ", expected ", dim_);
        }
        l2_normalize(v, detail::concat("embedding for ", id));
        vectors_[id] = std::move(v);
    }

    bool contains(const EntityId& id) const { return vectors_.count(id) != 0; }

    const Vec& at(const EntityId& id) const {
        auto it = vectors_.find(id);
        if (it == vectors_.end()) fail("entity not in ", source_name(source_), " store: ", id);
        return it->second;
    }

    // Sorted by EntityId.
    const std::map<EntityId, Vec>& vectors() const { return vectors_; }

    std::vector<EntityId> ids() const {
        std::vector<EntityId> out;
        out.reserve(vectors_.size());
        for (const auto& [id, _] : vectors_) out.push_back(id);
        return out;
    }

    // extra_comments lets callers persist provenance (e.g. fusion settings)
    // without breaking the comment-tolerant format.
    void save(const std::string& path, const std::vector<std::string>& extra_comments = {}) const {
        std::ofstream out(path);
        if (!out) fail("cannot open embedding file for writing: ", path);
        out << "# source_tag " << source_name(source_) << '\n';
        for (const auto& comment : extra_comments) out << "# " << comment << '\n';
        out << "dim " << dim_ << '\n';
        out.precision(17);
        for (const auto& [id, v] : vectors_) {
            out << id;
            for (double x : v) out << ' ' << x;
            out << '\n';
        }
        if (!out) fail("write failed for embedding file: ", path);
    }

  private:
    int dim_;
    Source source_;
    std::map<EntityId, Vec> vectors_;
};

// Parses the text embedding format: optional `#` comments, a `dim <D>` header,
// then `entity_id v1 ... vD` rows. All vectors are L2-normalized on load.
inline EmbeddingStore load_embeddings(const std::string& path, Source source) {
    std::ifstream in(path);
    if (!in) fail("cannot open embedding file: ", path);

    std::string line;
    std::size_t line_no = 0;
    int dim = -1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        std::istringstream header(line);
        std::string keyword;
        header >> keyword >> dim;
        if (keyword != "dim" || header.fail() || dim <= 0) {
            fail("expected 'dim <D>' header at line ", line_no, " in ", path);
        }
        break;
    }
    if (dim <= 0) fail("embedding file has no 'dim' header: ", path);

    EmbeddingStore store(dim, source);
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;

        std::istringstream row(line);
        EntityId id;
        row >> id;
        Vec v;
        v.reserve(static_cast<std::size_t>(dim));
        double x = 0.0;
        while (row >> x) v.push_back(x);
        if (!row.eof()) {
            fail("malformed embedding row at line ", line_no, " in ", path);
        }
        if (static_cast<int>(v.size()) != dim) {
            fail("embedding for ", id, " at line ", line_no, " has ", v.size(),
                 " components, expected ", dim);
        }
        store.add(id, std::move(v));
    }
    if (store.empty()) fail("embedding file has no vectors: ", path);
    return store;
}

// Entities present in every store, sorted by EntityId.
inline std::set<EntityId> vocabulary_intersection(const std::vector<const EmbeddingStore*>& stores) {
    if (stores.empty()) fail("vocabulary_intersection needs at least one store");
    std::set<EntityId> common;
    for (const auto& [id, _] : stores.front()->vectors()) common.insert(id);
    for (std::size_t i = 1; i < stores.size(); ++i) {
        std::set<EntityId> next;
        for (const auto& id : common) {
            if (stores[i]->contains(id)) next.insert(id);
        }
        common.swap(next);
    }
    if (common.empty()) fail("no common entities across embedding stores");
    return common;
}

}  // namespace tec
