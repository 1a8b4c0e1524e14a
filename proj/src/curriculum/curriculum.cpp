#include "codeaug/curriculum/curriculum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "codeaug/errors.hpp"
#include "codeaug/util/rng.hpp"

namespace codeaug {

void PacingConfig::validate() const {
  if (!(delta0 > 0.0 && delta0 <= 1.0)) throw DataError("delta0 must be in (0, 1]");
  if (total_steps < 1) throw DataError("total steps must be at least 1");
  if (kind == PacingKind::Root && root < 2) throw DataError("root_n needs n >= 2");
  if (kind == PacingKind::Step && groups < 1) throw DataError("step pacing needs at least one group");
}

PacingConfig parse_pacing(std::string_view name, double delta0, int total_steps) {
  PacingConfig c;
  c.delta0 = delta0;
  c.total_steps = total_steps;
  if (name == "linear") {
    c.kind = PacingKind::Linear;
  } else if (name == "step") {
    c.kind = PacingKind::Step;
  } else if (name == "geom_progression" || name == "geom") {
    c.kind = PacingKind::Geom;
  } else if (name == "anti") {
    c.kind = PacingKind::Anti;
  } else if (name == "none" || name == "random") {
    c.kind = PacingKind::None;
  } else if (name.starts_with("root_")) {
    c.kind = PacingKind::Root;
    std::string n(name.substr(5));
    if (n.empty() || n.find_first_not_of("0123456789") != std::string::npos) {
      throw DataError("bad pacing function: " + std::string(name));
    }
    c.root = std::stoi(n);
  } else {
    throw DataError("unknown pacing function: " + std::string(name));
  }
  c.validate();
  return c;
}

std::string pacing_name(const PacingConfig& cfg) {
  switch (cfg.kind) {
    case PacingKind::Linear: return "linear";
    case PacingKind::Step: return "step";
    case PacingKind::Geom: return "geom_progression";
    case PacingKind::Root: return "root_" + std::to_string(cfg.root);
    case PacingKind::Anti: return "anti";
    case PacingKind::None: return "none";
  }
  return "linear";
}

double pace_fraction(const PacingConfig& cfg, int s) {
  const double d0 = cfg.delta0;
  const int T = cfg.total_steps;
  s = std::clamp(s, 0, T);
  const double x = static_cast<double>(s) / static_cast<double>(T);
  switch (cfg.kind) {
    case PacingKind::Linear:
    case PacingKind::Anti:
      return std::min(1.0, d0 + (1.0 - d0) * x);
    case PacingKind::Root: {
      double n = cfg.root;
      double dn = std::pow(d0, n);
      return std::min(1.0, std::pow(dn + (1.0 - dn) * x, 1.0 / n));
    }
    case PacingKind::Geom:
      return std::min(1.0, std::pow(d0, 1.0 - x));
    case PacingKind::Step: {
      const int G = cfg.groups;
      if (G <= 1 || s == T) return 1.0;
      int g = std::min(G - 1, static_cast<int>(std::floor(x * G)));
      return d0 + (1.0 - d0) * static_cast<double>(g) / static_cast<double>(G - 1);
    }
    case PacingKind::None:
      return 1.0;
  }
  return 1.0;
}

std::vector<std::string> order_dataset(const Dataset& d, const ScoringStrategy& strategy) {
  std::vector<std::size_t> idx(d.samples.size());
  std::iota(idx.begin(), idx.end(), 0);
  using Kind = ScoringStrategy::Kind;
  switch (strategy.kind) {
    case Kind::AugmentationBased:
      std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const auto& x = d.samples[a];
        const auto& y = d.samples[b];
        if ((x.k > 0) != (y.k > 0)) return x.k == 0;
        return x.k < y.k;
      });
      break;
    case Kind::ClassBased: {
      if (d.task != Task::Classify) throw DataError("class-based ordering needs a classify dataset");
      for (const auto& s : d.samples) {
        if (!strategy.class_scores.count(s.label)) {
          throw MissingScore("no difficulty score for class " + std::to_string(s.label));
        }
      }
      std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        int la = d.samples[a].label, lb = d.samples[b].label;
        double sa = strategy.class_scores.at(la), sb = strategy.class_scores.at(lb);
        if (sa != sb) return sa < sb;
        return la < lb;
      });
      break;
    }
    case Kind::External: {
      for (const auto& s : d.samples) {
        if (!strategy.sample_scores.count(s.id)) throw MissingScore("no difficulty score for sample " + s.id);
      }
      std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return strategy.sample_scores.at(d.samples[a].id) < strategy.sample_scores.at(d.samples[b].id);
      });
      break;
    }
  }
  std::vector<std::string> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(d.samples[i].id);
  return out;
}

CurriculumSchedule make_schedule(const Dataset& d, const ScoringStrategy& strategy, const PacingConfig& pacing,
                                 std::uint64_t seed) {
  pacing.validate();
  CurriculumSchedule s;
  s.pacing = pacing;
  if (pacing.kind == PacingKind::None) {
    for (const auto& x : d.samples) s.ordering.push_back(x.id);
    Rng rng(derive_seed(seed, "schedule:none"));
    rng.shuffle(s.ordering);
    return s;
  }
  s.ordering = order_dataset(d, strategy);
  if (pacing.kind == PacingKind::Anti) std::reverse(s.ordering.begin(), s.ordering.end());
  return s;
}

std::size_t subset_size(const PacingConfig& cfg, int s, std::size_t n) {
  double f = pace_fraction(cfg, s);
  auto k = static_cast<std::size_t>(std::ceil(f * static_cast<double>(n) - 1e-9));
  return std::min(k, n);
}

std::vector<std::string> subset_at(const CurriculumSchedule& schedule, int s) {
  std::size_t k = subset_size(schedule.pacing, s, schedule.ordering.size());
  return {schedule.ordering.begin(), schedule.ordering.begin() + static_cast<std::ptrdiff_t>(k)};
}

std::string schedule_json(const CurriculumSchedule& schedule) {
  nlohmann::ordered_json j;
  j["ordering"] = schedule.ordering;
  j["pacing"] = pacing_name(schedule.pacing);
  j["delta0"] = schedule.pacing.delta0;
  j["T"] = schedule.pacing.total_steps;
  if (schedule.pacing.kind == PacingKind::Step) j["groups"] = schedule.pacing.groups;
  return j.dump(2) + "\n";
}

}  // namespace codeaug
