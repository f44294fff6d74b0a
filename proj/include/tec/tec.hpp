#pragma once

// Topics-as-entity-clusters: entity extraction, embedding fusion, K-Means
// topics, inverse-distance inference, corpus reranking, coherence metrics.

#include "tec/aho_corasick.hpp"
#include "tec/corpus_io.hpp"
#include "tec/document.hpp"
#include "tec/embedding_store.hpp"
#include "tec/entitizer.hpp"
#include "tec/fusion.hpp"
#include "tec/inference.hpp"
#include "tec/kmeans.hpp"
#include "tec/lexicon.hpp"
#include "tec/linalg.hpp"
#include "tec/log.hpp"
#include "tec/metrics.hpp"
#include "tec/model.hpp"
#include "tec/normalize.hpp"
#include "tec/pipeline.hpp"
#include "tec/rerank.hpp"
#include "tec/types.hpp"
