// codeaug: command-line driver for corpus generation, augmentation,
// difficulty scoring, curriculum training, TTA evaluation and ablations.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "codeaug/augment/augmentor.hpp"
#include "codeaug/corpus/generator.hpp"
#include "codeaug/errors.hpp"
#include "codeaug/experiments.hpp"
#include "codeaug/frontend/parser.hpp"
#include "codeaug/frontend/printer.hpp"
#include "codeaug/interp/interpreter.hpp"
#include "codeaug/metrics/metrics.hpp"
#include "codeaug/model/harness.hpp"
#include "codeaug/tta/tta.hpp"
#include "codeaug/util/rng.hpp"

#ifndef CODEAUG_VERSION
#define CODEAUG_VERSION "0.0.0"
#endif

using namespace codeaug;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LearnerOpts {
  LearnerConfig cfg;
  std::string feature = "both";
  std::string pace_unit = "batch";

  void add(CLI::App* app) {
    app->add_option("--feature", feature, "token_unigram, token_bigram or both")->capture_default_str();
    app->add_option("--vocab-cap", cfg.vocab_cap, "Feature columns kept")->capture_default_str();
    app->add_option("--lr", cfg.learning_rate, "SGD learning rate")->capture_default_str();
    app->add_option("--epochs", cfg.epochs, "Training epochs")->capture_default_str();
    app->add_option("--batch", cfg.batch, "Mini-batch size")->capture_default_str();
    app->add_option("--l2", cfg.l2, "L2 decay")->capture_default_str();
    app->add_option("--pace-unit", pace_unit, "Curriculum step unit: epoch or batch")->capture_default_str();
  }
  LearnerConfig resolve() const {
    LearnerConfig out = cfg;
    out.feature = parse_feature(feature);
    out.pace_unit = parse_pace_unit(pace_unit);
    out.validate();
    return out;
  }
};

struct CorpusOpts {
  std::string in;
  int classes = 8;
  int per_class = 40;
  std::uint64_t corpus_seed = 17;

  void add(CLI::App* app) {
    app->add_option("--in", in, "Classify JSONL (default: generate a corpus)");
    app->add_option("--classes", classes, "Generated classes")->capture_default_str()->check(CLI::Range(2, 1 << 20));
    app->add_option("--per-class", per_class, "Generated programs per class")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app->add_option("--corpus-seed", corpus_seed, "Corpus generator seed")->capture_default_str();
  }
  Dataset load() const {
    if (!in.empty()) return read_dataset(in, Task::Classify);
    return corpus_dataset(classes, per_class, corpus_seed);
  }
};

std::string canonical(const std::string& p) {
  return std::filesystem::weakly_canonical(std::filesystem::path(p)).string();
}

void require_distinct(const std::vector<std::string>& inputs, const std::vector<std::string>& outputs) {
  std::vector<std::string> seen;
  for (const auto& i : inputs) {
    if (!i.empty()) seen.push_back(canonical(i));
  }
  for (const auto& o : outputs) {
    auto c = canonical(o);
    for (const auto& s : seen) {
      if (s == c) throw UsageError("output path collides with another input or output: " + o);
    }
    seen.push_back(c);
  }
}

std::vector<std::uint64_t> run_seeds(std::uint64_t master, int n) {
  if (n < 1) throw UsageError("--seeds must be at least 1");
  std::vector<std::uint64_t> out;
  for (int i = 0; i < n; ++i) out.push_back(master + static_cast<std::uint64_t>(i));
  return out;
}

// "# "-prefixed header: tool version and every option of the subcommand,
// defaults included.
std::string report_header(const CLI::App* sub) {
  std::string out = "# version: codeaug " CODEAUG_VERSION "\n# command: " + sub->get_name() + "\n";
  std::string cfg = sub->config_to_str(true, false);
  std::size_t start = 0;
  while (start < cfg.size()) {
    std::size_t end = cfg.find('\n', start);
    if (end == std::string::npos) end = cfg.size();
    std::string line = cfg.substr(start, end - start);
    if (!line.empty()) out += "# config: " + line + "\n";
    start = end + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Program transformation, augmentation and curriculum toolkit"};
  app.set_version_flag("--version", std::string("codeaug ") + CODEAUG_VERSION);
  app.set_config("--config", "", "Key-value config file (TOML/INI); flags override it");
  app.require_subcommand(1);

  // Per-subcommand master seed; std::map nodes stay put while CLI11 holds
  // references into them.
  std::map<std::string, std::uint64_t> seeds;
  auto add_seed = [&](CLI::App* sub, std::uint64_t def = 1) {
    auto& s = seeds[sub->get_name()] = def;
    sub->add_option("--seed", s, "Master seed")->envname("CODEAUG_SEED")->capture_default_str();
  };

  // gen-corpus
  auto* gen = app.add_subcommand("gen-corpus", "Generate a classify corpus");
  int gen_classes = 8, gen_per_class = 40;
  std::string gen_out;
  gen->add_option("--classes", gen_classes, "Classes")->capture_default_str()->check(CLI::Range(2, 1 << 20));
  gen->add_option("--per-class", gen_per_class, "Programs per class")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  gen->add_option("--out", gen_out, "Output JSONL")->required();
  add_seed(gen, 17);

  // transform
  auto* tr = app.add_subcommand("transform", "Apply k random semantic-preserving rewrites to one program");
  std::string tr_in, tr_out, tr_record, tr_kinds = "all";
  int tr_k = 1;
  tr->add_option("in,--in", tr_in, "Program source")->required()->check(CLI::ExistingFile);
  tr->add_option("out,--out", tr_out, "Rewritten program")->required();
  tr->add_option("--record", tr_record, "Transform record (JSONL)");
  tr->add_option("--k", tr_k, "Rewrite steps")->capture_default_str()->check(CLI::NonNegativeNumber);
  tr->add_option("--kinds", tr_kinds, "Kinds or families, comma separated")->capture_default_str();
  std::string tr_kind;
  int tr_site = -1;
  tr->add_option("--kind", tr_kind, "Apply exactly this kind at --site-index instead of a random chain");
  tr->add_option("--site-index", tr_site, "Index into the kind's pre-order site list")->needs("--kind");
  add_seed(tr);

  // chain
  auto* ch = app.add_subcommand("chain", "Build variant levels D_1..D_k of a classify dataset");
  std::string ch_in, ch_prefix, ch_kinds = "all";
  int ch_k = 3;
  ch->add_option("in,--in", ch_in, "Classify JSONL")->required()->check(CLI::ExistingFile);
  ch->add_option("--out-prefix", ch_prefix, "Writes <prefix>_D<t>.jsonl and records")->required();
  ch->add_option("--k", ch_k, "Levels")->capture_default_str()->check(CLI::PositiveNumber);
  ch->add_option("--kinds", ch_kinds, "Kinds or families")->capture_default_str();
  add_seed(ch);

  // augment
  auto* au = app.add_subcommand("augment", "Balanced augmentation with m variants per sample");
  std::string au_in, au_out, au_task = "classify", au_kinds = "all";
  int au_m = 3;
  au->add_option("in,--in", au_in, "Dataset JSONL")->required()->check(CLI::ExistingFile);
  au->add_option("out,--out", au_out, "Augmented JSONL (records go next to it)")->required();
  au->add_option("--task", au_task, "classify, clone_pair or search_pair")->capture_default_str();
  au->add_option("--m", au_m, "Variants per sample")->capture_default_str()->check(CLI::NonNegativeNumber);
  au->add_option("--kinds", au_kinds, "Kinds or families")->capture_default_str();
  add_seed(au);

  // run
  auto* rn = app.add_subcommand("run", "Interpret a program");
  std::string rn_in, rn_stdin, rn_out;
  std::uint64_t rn_limit = kDefaultStepLimit;
  rn->add_option("in,--in", rn_in, "Program source")->required()->check(CLI::ExistingFile);
  rn->add_option("--stdin", rn_stdin, "File fed to the program's stdin")->check(CLI::ExistingFile);
  rn->add_option("--out", rn_out, "Program stdout (default: terminal)");
  rn->add_option("--step-limit", rn_limit, "Step limit")->capture_default_str();

  // hyp1 / hyp2
  ExperimentConfig xcfg;
  LearnerOpts learner;
  CorpusOpts corpus;
  int n_seeds = 5;
  std::string kinds = "all", out;
  auto add_experiment = [&](CLI::App* sub) {
    corpus.add(sub);
    learner.add(sub);
    sub->add_option("--seeds", n_seeds, "Runs; seeds are seed .. seed+n-1")->capture_default_str();
    sub->add_option("--kinds", kinds, "Kinds or families")->capture_default_str();
    sub->add_option("--out", out, "Report CSV")->required();
    add_seed(sub);
  };
  auto* h1 = app.add_subcommand("hyp1", "Metric of a union-trained model on D_0..D_k");
  std::string h1_metric = "map";
  add_experiment(h1);
  h1->add_option("--k", xcfg.k, "Levels")->capture_default_str()->check(CLI::PositiveNumber);
  h1->add_option("--metric", h1_metric, "accuracy, map, precision or mrr")->capture_default_str();
  auto* h2 = app.add_subcommand("hyp2", "Class difficulty on original vs augmented training sets");
  add_experiment(h2);
  h2->add_option("--m", xcfg.m, "Variants per sample")->capture_default_str();
  h2->add_option("--folds", xcfg.folds, "Leave-one-out folds")->capture_default_str()->check(CLI::Range(2, 1000));

  // loo-score
  auto* lo = app.add_subcommand("loo-score", "Held-out cross-entropy per sample");
  std::string lo_in, lo_out;
  int lo_folds = 5;
  LearnerOpts lo_learner;
  lo->add_option("in,--in", lo_in, "Classify JSONL")->required()->check(CLI::ExistingFile);
  lo->add_option("--out", lo_out, "Scores CSV")->required();
  lo->add_option("--folds", lo_folds, "Folds")->capture_default_str()->check(CLI::Range(2, 1000));
  lo_learner.add(lo);
  add_seed(lo);

  // train
  auto* tn = app.add_subcommand("train", "Train the reference learner, optionally with a curriculum");
  std::string tn_in, tn_model, tn_task = "classify", tn_pacing, tn_strategy = "augmentation", tn_schedule;
  double tn_delta0 = 0.33;
  int tn_folds = 5;
  LearnerOpts tn_learner;
  tn->add_option("in,--in", tn_in, "Training JSONL")->required()->check(CLI::ExistingFile);
  tn->add_option("--model", tn_model, "Output model file")->required();
  tn->add_option("--task", tn_task, "classify, clone_pair or search_pair")->capture_default_str();
  tn->add_option("--pacing", tn_pacing, "Curriculum pacing (omit for plain training)");
  tn->add_option("--strategy", tn_strategy, "augmentation or class")->capture_default_str();
  tn->add_option("--delta0", tn_delta0, "Starting fraction")->capture_default_str();
  tn->add_option("--folds", tn_folds, "Folds for class-based scoring")->capture_default_str();
  tn->add_option("--schedule-out", tn_schedule, "Write the schedule as JSON");
  tn_learner.add(tn);
  add_seed(tn);

  // eval
  auto* ev = app.add_subcommand("eval", "Score a model on a dataset, optionally with TTA");
  std::string ev_model, ev_in, ev_out, ev_metric = "accuracy", ev_kinds = "all";
  bool ev_tta = false;
  int ev_copies = 3;
  ev->add_option("model,--model", ev_model, "Model file")->required()->check(CLI::ExistingFile);
  ev->add_option("in,--in", ev_in, "Test JSONL")->required()->check(CLI::ExistingFile);
  ev->add_option("--out", ev_out, "Report CSV")->required();
  ev->add_option("--metric", ev_metric, "Metric")->capture_default_str();
  ev->add_flag("--tta", ev_tta, "Add TTA rows");
  ev->add_option("--copies", ev_copies, "TTA copies")->capture_default_str()->check(CLI::PositiveNumber);
  ev->add_option("--kinds", ev_kinds, "TTA kinds or families")->capture_default_str();
  add_seed(ev);

  // ablate
  auto* ab = app.add_subcommand("ablate", "Pacing sweep and component toggles");
  std::string ab_mode = "both", ab_pacings = "none,anti,linear,step,geom_progression,root_2,root_5,root_10";
  add_experiment(ab);
  ab->add_option("--mode", ab_mode, "pacing, components or both")->capture_default_str();
  ab->add_option("--pacings", ab_pacings, "Pacing rows of the sweep")->capture_default_str();
  ab->add_option("--strategy", xcfg.strategy, "augmentation or class")->capture_default_str();
  ab->add_option("--cl-pacing", xcfg.pacing, "Pacing of the CL arm in component toggles")->capture_default_str();
  ab->add_option("--delta0", xcfg.delta0, "Starting fraction")->capture_default_str();
  ab->add_option("--m", xcfg.m, "Variants per sample")->capture_default_str();
  ab->add_option("--copies", xcfg.tta_copies, "TTA copies")->capture_default_str();
  ab->add_option("--test-fraction", xcfg.test_fraction, "Held-out fraction")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::uint64_t seed = seeds[app.get_subcommands().front()->get_name()];
  // Names the text being parsed in source diagnostics.
  std::string source_name = "<input>";
  if (tr->parsed()) source_name = tr_in;
  if (rn->parsed()) source_name = rn_in;
  try {
    if (gen->parsed()) {
      require_distinct({}, {gen_out});
      Dataset d = corpus_dataset(gen_classes, gen_per_class, seed);
      write_dataset(d, gen_out);
      std::fprintf(stderr, "gen-corpus: %zu programs, %d classes\n", d.samples.size(), d.num_classes());
    } else if (tr->parsed()) {
      require_distinct({tr_in}, {tr_out, tr_record});
      auto ks = parse_kind_list(tr_kinds);
      Ast ast = parse(read_file(tr_in));
      std::string origin = std::filesystem::path(tr_in).stem().string();
      TransformRecord rec{origin, {}, seed};
      if (!tr_kind.empty()) {
        auto kind = parse_kind(tr_kind);
        if (!kind) throw UsageError("unknown transform kind: " + tr_kind);
        auto sites = applicable_sites(ast, *kind);
        if (sites.empty()) throw InapplicableSite(tr_kind + " has no applicable site");
        int idx = tr_site < 0 ? 0 : tr_site;
        if (idx >= static_cast<int>(sites.size())) {
          throw InapplicableSite("site index " + std::to_string(idx) + " out of range (" +
                                 std::to_string(sites.size()) + " sites)");
        }
        const Site& site = sites[static_cast<std::size_t>(idx)];
        std::uint64_t step_seed = derive_seed(seed, std::uint64_t{0});
        Rng rng(step_seed);
        ast = apply(ast, site, rng);
        rec.steps.push_back({site.kind, site.path, step_seed});
      } else if (tr_k > 0) {
        auto r = apply_sequence(ast, tr_k, ks, seed, origin);
        ast = std::move(r.ast);
        rec = std::move(r.record);
      }
      write_file(tr_out, print_program(ast));
      if (!tr_record.empty()) write_file(tr_record, records_to_jsonl({{origin, "code", rec}}));
      std::fprintf(stderr, "transform: %zu steps applied\n", rec.steps.size());
    } else if (ch->parsed()) {
      std::vector<std::string> outs;
      for (int t = 1; t <= ch_k; ++t) {
        std::string p = ch_prefix + "_D" + std::to_string(t) + ".jsonl";
        outs.push_back(p);
        outs.push_back(records_path(p));
      }
      require_distinct({ch_in}, outs);
      Dataset d = read_dataset(ch_in, Task::Classify);
      auto ks = parse_kind_list(ch_kinds);
      VariantChain c = build_variant_chain(d, ch_k, ks, seed);
      for (int t = 0; t < ch_k; ++t) {
        const auto& p = outs[static_cast<std::size_t>(2 * t)];
        write_dataset(c.levels[static_cast<std::size_t>(t)], p);
        write_file(records_path(p), records_to_jsonl(c.records[static_cast<std::size_t>(t)]));
        int carried = 0;
        for (const auto& s : c.levels[static_cast<std::size_t>(t)].samples) carried += s.carried ? 1 : 0;
        std::fprintf(stderr, "chain: D%d %zu samples, %d carried\n", t + 1,
                     c.levels[static_cast<std::size_t>(t)].samples.size(), carried);
      }
    } else if (au->parsed()) {
      require_distinct({au_in}, {au_out, records_path(au_out)});
      Dataset d = read_dataset(au_in, parse_task(au_task));
      AugmentResult r = balanced_augment(d, au_m, parse_kind_list(au_kinds), seed);
      write_dataset(r.dataset, au_out);
      write_file(records_path(au_out), records_to_jsonl(r.records));
      double ratio = d.samples.empty() ? 0.0 : static_cast<double>(r.dataset.samples.size()) / d.samples.size();
      std::fprintf(stderr, "augment: %zu -> %zu (ratio %.4f), shortfall %d over %zu samples\n", d.samples.size(),
                   r.dataset.samples.size(), ratio, r.shortfall_total(), r.shortfall.size());
      for (const auto& [id, n] : r.shortfall) std::fprintf(stderr, "  shortfall %s %d\n", id.c_str(), n);
    } else if (rn->parsed()) {
      if (!rn_out.empty()) require_distinct({rn_in, rn_stdin}, {rn_out});
      Ast ast = parse(read_file(rn_in));
      ExecResult r = run(ast, rn_stdin.empty() ? std::string() : read_file(rn_stdin), rn_limit);
      if (rn_out.empty()) {
        std::cout << r.stdout_bytes;
      } else {
        write_file(rn_out, r.stdout_bytes);
      }
      std::fprintf(stderr, "run: %s%s%s\n", status_name(r.status), r.message.empty() ? "" : ": ", r.message.c_str());
      if (r.status != ExecResult::Status::Ok) return kExitData;
    } else if (h1->parsed() || h2->parsed() || ab->parsed()) {
      require_distinct({corpus.in}, {out});
      xcfg.seeds = run_seeds(seed, n_seeds);
      xcfg.learner = learner.resolve();
      xcfg.kinds = parse_kind_list(kinds);
      Dataset d = corpus.load();
      const CLI::App* sub = h1->parsed() ? h1 : h2->parsed() ? h2 : ab;
      std::string body;
      if (h1->parsed()) {
        if (!is_known_metric(h1_metric)) throw UsageError("unknown metric: " + h1_metric);
        Hyp1Result r = run_hypothesis1(d, xcfg, h1_metric);
        body = r.csv();
        auto mean = r.mean();
        for (std::size_t t = 0; t < mean.size(); ++t) std::fprintf(stderr, "hyp1: D%zu %.4f\n", t, mean[t]);
      } else if (h2->parsed()) {
        Hyp2Result r = run_hypothesis2(d, xcfg);
        body = r.csv();
        for (const auto& w : r.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
        std::fprintf(stderr, "hyp2: variants at least as hard as originals in %.1f%% of classes\n",
                     100.0 * r.harder_fraction());
      } else {
        if (ab_mode != "pacing" && ab_mode != "components" && ab_mode != "both") {
          throw UsageError("--mode must be pacing, components or both");
        }
        std::vector<std::string> pacings;
        for (const auto& p : CLI::detail::split(ab_pacings, ',')) {
          parse_pacing(p);
          pacings.push_back(p);
        }
        std::vector<AblationRow> rows;
        if (ab_mode != "components") rows = run_pacing_sweep(d, xcfg, pacings);
        if (ab_mode != "pacing") {
          auto more = run_component_ablation(d, xcfg);
          rows.insert(rows.end(), more.begin(), more.end());
        }
        body = ablation_csv(rows);
        for (const auto& [k, v] : ablation_means(rows)) std::fprintf(stderr, "ablate: %-18s %.4f\n", k.c_str(), v);
      }
      write_file(out, report_header(sub) + body);
    } else if (lo->parsed()) {
      require_distinct({lo_in}, {lo_out});
      Dataset d = read_dataset(lo_in, Task::Classify);
      LinearLearner proto(lo_learner.resolve());
      FoldLog log;
      auto scores = leave_one_out_scores(d, lo_folds, proto, seed, &log);
      std::string body = "sample_id,label,k,score\n";
      for (std::size_t i = 0; i < scores.size(); ++i) {
        const auto& s = d.samples[i];
        body += s.id + "," + std::to_string(s.label) + "," + std::to_string(s.k) + "," +
                format_double(scores[i].score) + "\n";
      }
      for (const auto& w : log.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
      write_file(lo_out, report_header(lo) + body);
    } else if (tn->parsed()) {
      require_distinct({tn_in}, {tn_model, tn_schedule});
      Dataset d = read_dataset(tn_in, parse_task(tn_task));
      LearnerConfig cfg = tn_learner.resolve();
      cfg.seed = seed;
      LinearLearner model(cfg);
      if (tn_pacing.empty()) {
        model.fit(d, nullptr, 0);
      } else {
        ExperimentConfig sc;
        sc.strategy = tn_strategy;
        sc.folds = tn_folds;
        sc.learner = cfg;
        ScoringStrategy st = make_strategy(d, sc, seed);
        PacingConfig pc = parse_pacing(tn_pacing, tn_delta0);
        CurriculumSchedule sched = make_schedule(d, st, pc, seed);
        model.fit(d, &sched, 0);
        if (!tn_schedule.empty()) write_file(tn_schedule, schedule_json(sched));
      }
      save_model(model.state(), tn_model);
      if (d.task == Task::Classify) std::fprintf(stderr, "train: loss %.6f\n", mean_loss(model.state(), d));
    } else if (ev->parsed()) {
      require_distinct({ev_model, ev_in}, {ev_out});
      ModelState state = load_model(ev_model);
      Dataset d = read_dataset(ev_in, state.task);
      LinearLearner model(state);
      EvalReport rep;
      if (ev_tta) {
        TtaConfig tc;
        tc.copies = ev_copies;
        tc.kinds = parse_kind_list(ev_kinds);
        tc.seed = seed;
        rep = tta_evaluate(model, d, tc, ev_metric);
      } else {
        rep.rows.push_back({"test", ev_metric, score_dataset(model, d, ev_metric), seed, std::nullopt});
      }
      write_file(ev_out, report_header(ev) + rep.csv());
      for (const auto& r : rep.rows) std::fprintf(stderr, "eval: %s %.4f\n", r.metric.c_str(), r.value);
    }
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const SourceError& e) {
    std::fprintf(stderr, "%s:%d:%d: %s\n", source_name.c_str(), e.line(), e.col(), e.message().c_str());
    return kExitData;
  } catch (const DataError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kExitInternal;
  }
  return kExitOk;
}
