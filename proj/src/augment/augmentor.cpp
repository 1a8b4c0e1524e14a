#include "codeaug/augment/augmentor.hpp"

#include <set>

#include "codeaug/errors.hpp"
#include "codeaug/frontend/parser.hpp"
#include "codeaug/frontend/printer.hpp"
#include "codeaug/util/rng.hpp"

namespace codeaug {

namespace {

std::string canonical(const std::string& code) { return print_program(parse(code)); }

}  // namespace

std::vector<Variant> distinct_variants(const std::string& code, int m, std::span<const TransformKind> kinds,
                                       std::uint64_t seed, const std::string& origin_id) {
  std::vector<Variant> out;
  if (m <= 0 || kinds.empty()) return out;
  Ast origin = parse(code);
  std::set<std::string> seen = {print_program(origin)};
  Rng rng(derive_seed(seed, "variants:" + origin_id));
  for (int attempt = 0; attempt < 8 * m && static_cast<int>(out.size()) < m; ++attempt) {
    int depth = static_cast<int>(rng.range(kMinChainDepth, kMaxChainDepth));
    std::uint64_t chain_seed = rng.next();
    ChainResult chain;
    try {
      chain = apply_sequence(origin, depth, kinds, chain_seed, origin_id);
    } catch (const NoApplicableTransform&) {
      break;
    }
    std::string text = print_program(chain.ast);
    if (!seen.insert(text).second) continue;
    out.push_back({std::move(text), std::move(chain.record)});
  }
  return out;
}

VariantChain build_variant_chain(const Dataset& d, int k, std::span<const TransformKind> kinds, std::uint64_t seed) {
  if (d.task != Task::Classify) throw UnknownTask("variant chains are built for classify datasets only");
  VariantChain out;
  std::vector<Ast> current;
  std::vector<TransformRecord> lineage;
  for (const auto& s : d.samples) {
    current.push_back(parse(s.code));
    lineage.push_back({s.origin_id, {}, seed});
  }
  for (int t = 1; t <= k; ++t) {
    Dataset level;
    level.task = d.task;
    std::vector<VariantRecord> records;
    for (std::size_t i = 0; i < d.samples.size(); ++i) {
      const DatasetSample& origin = d.samples[i];
      DatasetSample s = origin;
      s.id = origin.id + "~k" + std::to_string(t);
      s.k = t;
      s.origin_id = origin.origin_id;
      std::uint64_t step_seed = derive_seed(seed, origin.id + ":level" + std::to_string(t));
      try {
        ChainResult chain = apply_sequence(current[i], 1, kinds, step_seed, origin.origin_id);
        current[i] = std::move(chain.ast);
        lineage[i] = compose(lineage[i], chain.record);
        s.carried = false;
      } catch (const NoApplicableTransform&) {
        s.carried = true;
      }
      s.code = print_program(current[i]);
      records.push_back({s.id, "code", lineage[i]});
      level.samples.push_back(std::move(s));
    }
    out.levels.push_back(std::move(level));
    out.records.push_back(std::move(records));
  }
  return out;
}

int AugmentResult::shortfall_total() const {
  int t = 0;
  for (const auto& [id, n] : shortfall) t += n;
  return t;
}

AugmentResult balanced_augment(const Dataset& d, int m, std::span<const TransformKind> kinds, std::uint64_t seed) {
  AugmentResult out;
  out.dataset.task = d.task;
  for (const auto& origin : d.samples) {
    out.dataset.samples.push_back(origin);
    std::vector<DatasetSample> variants;
    std::vector<VariantRecord> records;
    if (d.task == Task::ClonePair) {
      // Rewrite one side per variant; both sides share one distinctness pool.
      Rng rng(derive_seed(seed, "sides:" + origin.id));
      std::set<std::pair<std::string, std::string>> seen = {{canonical(origin.code), canonical(origin.code_b)}};
      auto pool_a = distinct_variants(origin.code, m, kinds, derive_seed(seed, "a"), origin.id);
      auto pool_b = distinct_variants(origin.code_b, m, kinds, derive_seed(seed, "b"), origin.id);
      std::size_t ia = 0, ib = 0;
      while (static_cast<int>(variants.size()) < m && (ia < pool_a.size() || ib < pool_b.size())) {
        bool side_a = ib >= pool_b.size() || (ia < pool_a.size() && rng.coin());
        const Variant& v = side_a ? pool_a[ia++] : pool_b[ib++];
        DatasetSample s = origin;
        (side_a ? s.code : s.code_b) = v.code;
        if (!seen.insert({s.code, s.code_b}).second) continue;
        s.id = origin.id + "~v" + std::to_string(variants.size() + 1);
        s.k = static_cast<int>(v.record.steps.size());
        records.push_back({s.id, side_a ? "code_a" : "code_b", v.record});
        variants.push_back(std::move(s));
      }
    } else {
      for (auto& v : distinct_variants(origin.code, m, kinds, seed, origin.id)) {
        DatasetSample s = origin;
        s.code = std::move(v.code);
        s.id = origin.id + "~v" + std::to_string(variants.size() + 1);
        s.k = static_cast<int>(v.record.steps.size());
        records.push_back({s.id, "code", std::move(v.record)});
        variants.push_back(std::move(s));
      }
    }
    if (static_cast<int>(variants.size()) < m) {
      out.shortfall.emplace_back(origin.id, m - static_cast<int>(variants.size()));
    }
    for (auto& s : variants) out.dataset.samples.push_back(std::move(s));
    for (auto& r : records) out.records.push_back(std::move(r));
  }
  return out;
}

}  // namespace codeaug
