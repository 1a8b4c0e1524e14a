#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "codeaug/data/dataset.hpp"

namespace codeaug {

enum class PacingKind { Linear, Step, Geom, Root, Anti, None };

struct PacingConfig {
  PacingKind kind = PacingKind::Linear;
  int groups = 3;  // step
  int root = 2;    // root_n
  double delta0 = 0.33;
  int total_steps = 1;  // T

  void validate() const;
};

/// "linear", "step", "geom_progression", "root_<n>", "anti", "none".
PacingConfig parse_pacing(std::string_view name, double delta0 = 0.33, int total_steps = 1);
std::string pacing_name(const PacingConfig& cfg);

/// Fraction of the ordering available at step s in [0, T]; anti uses the
/// linear curve (its ordering is reversed by make_schedule), none is 1.
double pace_fraction(const PacingConfig& cfg, int s);

struct ScoringStrategy {
  enum class Kind { AugmentationBased, ClassBased, External };
  Kind kind = Kind::AugmentationBased;
  std::map<int, double> class_scores;           // ClassBased
  std::map<std::string, double> sample_scores;  // External
};

/// Easy-to-hard permutation of sample ids; ties keep dataset order.
/// Throws MissingScore when a class or sample has no score.
std::vector<std::string> order_dataset(const Dataset& d, const ScoringStrategy& strategy);

struct CurriculumSchedule {
  std::vector<std::string> ordering;
  PacingConfig pacing;
};

/// Orders `d` and attaches pacing. Anti reverses the ordering; none replaces
/// it with a shuffle drawn from `seed`.
CurriculumSchedule make_schedule(const Dataset& d, const ScoringStrategy& strategy, const PacingConfig& pacing,
                                 std::uint64_t seed);

/// The first ceil(f(s) * n) ids of the ordering. A 1e-9 slack absorbs
/// rounding in f(s) * n so that 0.33 * 100 admits 33.
std::vector<std::string> subset_at(const CurriculumSchedule& schedule, int s);
std::size_t subset_size(const PacingConfig& cfg, int s, std::size_t n);

std::string schedule_json(const CurriculumSchedule& schedule);

}  // namespace codeaug
