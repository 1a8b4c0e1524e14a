#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "codeaug/data/dataset.hpp"
#include "codeaug/transform/transform.hpp"

namespace codeaug {

/// Chain depths drawn uniformly for augmentation and TTA copies.
inline constexpr int kMinChainDepth = 1;
inline constexpr int kMaxChainDepth = 3;

struct Variant {
  std::string code;
  TransformRecord record;
};

/// Up to `m` variants of `code` whose printed text differs from the
/// canonical original and from each other. Each candidate is a chain of
/// uniform depth in [1, 3]; at most `8 * m` candidates are tried.
std::vector<Variant> distinct_variants(const std::string& code, int m, std::span<const TransformKind> kinds,
                                       std::uint64_t seed, const std::string& origin_id);

struct VariantChain {
  std::vector<Dataset> levels;                     // D_1 .. D_k
  std::vector<std::vector<VariantRecord>> records;  // origin -> level record per sample
};

/// Element-wise iterated transformation. Level t applies one more chain
/// step to every sample of level t-1; a sample where nothing applies is
/// carried forward unchanged with `carried` set. Records compose from the
/// k = 0 origin. Classify datasets only.
VariantChain build_variant_chain(const Dataset& d, int k, std::span<const TransformKind> kinds, std::uint64_t seed);

struct AugmentResult {
  Dataset dataset;
  std::vector<VariantRecord> records;
  std::vector<std::pair<std::string, int>> shortfall;  // origin id, missing variant count
  int shortfall_total() const;
};

/// Every original followed by up to `m` distinct variants. Clone pairs get
/// one side rewritten per variant; search pairs keep the query and rewrite
/// the code. Variants are ordered after their origin.
AugmentResult balanced_augment(const Dataset& d, int m, std::span<const TransformKind> kinds, std::uint64_t seed);

}  // namespace codeaug
