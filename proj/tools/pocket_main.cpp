#include "pocket/bench.hpp"
#include "pocket/error.hpp"
#include "pocket/transform.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

struct Common {
  std::string dataset_dir = "data/UCR";
  std::string dataset;
  std::string model = "rocket-ppv-max";
  std::size_t num_kernels = 10000;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::string out;
  bool znormalize = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--dataset-dir", c.dataset_dir, "Directory holding <name>/<name>_TRAIN.tsv");
  app->add_option("--model", c.model, "rocket-ppv-max | rocket-ppv | minirocket");
  app->add_option("--num-kernels", c.num_kernels, "Kernels (G) in the random bank");
  app->add_option("--seed", c.seed, "Base seed; repeat r uses seed + r");
  app->add_option("--threads", c.threads, "Worker threads");
  app->add_flag("--znormalize", c.znormalize, "Z-normalize each series before the transform");
}

struct PruneFlags {
  std::optional<pocket::Index> remain;
  std::optional<double> remain_rate;
  std::string method = "pocket";
  int iters = 50;
  std::vector<double> k_grid{0.01, 0.1, 1, 10, 100, 1000};
  std::vector<double> rho_grid{0.01, 0.1, 1, 10, 100};
  std::optional<double> k, rho1, rho2;
  bool no_stage2 = false;
  int repeats = 10;
  int folds = 5;
  bool baseline_random = false;
  bool baseline_scratch = false;
  bool trace = false;
};

void add_prune_flags(CLI::App* app, PruneFlags& p, bool with_remain) {
  if (with_remain) {
    auto* a = app->add_option("--remain", p.remain, "Kernels to keep (m)");
    auto* b = app->add_option("--remain-rate", p.remain_rate, "Fraction of kernels to keep, in (0, 1)");
    a->excludes(b);
  }
  app->add_option("--method", p.method, "pocket | admm | none")->check(CLI::IsMember({"pocket", "admm", "none"}));
  app->add_option("--iters", p.iters, "Solver iterations T");
  app->add_option("--k-grid", p.k_grid, "CV grid for k")->delimiter(',');
  app->add_option("--rho-grid", p.rho_grid, "CV grid for rho1 and rho2 (full product)")->delimiter(',');
  app->add_option("--k", p.k, "Fixed k, skips CV");
  auto* r1 = app->add_option("--rho1", p.rho1, "Fixed rho1, skips CV");
  auto* r2 = app->add_option("--rho2", p.rho2, "Fixed rho2, skips CV");
  r1->needs(r2);
  r2->needs(r1);
  app->add_option("--folds", p.folds, "CV folds");
  app->add_flag("--no-stage2", p.no_stage2, "Skip the ridge refit");
  app->add_option("--repeats", p.repeats, "Independent repeats with fresh kernels");
  app->add_flag("--baseline-random", p.baseline_random, "Also refit on a random kept set of the same size");
  app->add_flag("--baseline-scratch", p.baseline_scratch, "Also train from scratch with m kernels");
  app->add_flag("--trace", p.trace, "Write per-iteration trace CSVs");
}

pocket::RunOptions to_options(const Common& c, const PruneFlags& p) {
  pocket::RunOptions o;
  o.dataset_dir = c.dataset_dir;
  o.dataset = c.dataset;
  o.model = pocket::parse_model_kind(c.model);
  o.num_kernels = c.num_kernels;
  o.remain = p.remain;
  o.remain_rate = p.remain_rate;
  o.method = pocket::parse_prune_method(p.method);
  o.iterations = p.iters;
  o.folds = p.folds;
  o.k_grid = p.k_grid;
  o.rho_grid = p.rho_grid;
  o.k = p.k;
  o.rho1 = p.rho1;
  o.rho2 = p.rho2;
  o.stage2 = !p.no_stage2;
  o.repeats = p.repeats;
  o.seed = c.seed;
  o.threads = c.threads;
  o.znormalize = c.znormalize;
  if (!c.out.empty()) o.out = c.out;
  o.baseline_random = p.baseline_random;
  o.baseline_scratch = p.baseline_scratch;
  o.trace = p.trace;
  return o;
}

void print_summary(const pocket::RunReport& r) {
  auto pct = [](const pocket::AccuracyStats& s) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f +- %.2f", 100 * s.mean, 100 * s.std);
    return std::string(buf);
  };
  std::cout << r.dataset << " " << r.model << " " << r.method << " m=" << r.remain << " ("
            << 100 * r.remain_rate << "%)" << (r.remain_rate_substituted ? " [rate substituted]" : "") << "\n"
            << "  unpruned " << pct(r.unpruned) << "\n";
  if (!r.stage1.per_repeat.empty()) std::cout << "  stage1   " << pct(r.stage1) << "\n";
  if (!r.stage2.per_repeat.empty()) std::cout << "  stage2   " << pct(r.stage2) << "\n";
  if (r.baseline_random) std::cout << "  random   " << pct(*r.baseline_random) << "\n";
  if (r.baseline_scratch) std::cout << "  scratch  " << pct(*r.baseline_scratch) << "\n";
  std::cout << "  time cv " << r.timing.cv << "s refit " << r.timing.refit << "s stage2 " << r.timing.stage2
            << "s sum " << r.timing.sum << "s\n";
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random-kernel pruning for time series classification"};
  app.require_subcommand(1);

  Common tc;
  auto* tr = app.add_subcommand("transform", "Write the train/test feature matrices of a seeded bank");
  add_common(tr, tc);
  tr->add_option("--dataset", tc.dataset)->required();
  tr->add_option("--out", tc.out, "Output directory")->required();

  Common pc;
  PruneFlags pf;
  auto* pr = app.add_subcommand("prune", "Prune a random kernel bank and evaluate it");
  add_common(pr, pc);
  pr->add_option("--dataset", pc.dataset)->required();
  pr->add_option("--out", pc.out, "Output directory for reports, traces and the model bundle");
  add_prune_flags(pr, pf, true);

  Common sc;
  PruneFlags sf;
  std::vector<double> rates;
  std::string batch;
  auto* sw = app.add_subcommand("sweep", "Run prune over several remain rates or a batch file");
  add_common(sw, sc);
  sw->add_option("--dataset", sc.dataset);
  sw->add_option("--out", sc.out, "Output directory");
  sw->add_option("--rates", rates, "Remain rates")->delimiter(',');
  sw->add_option("--batch", batch, "File of '<dataset> <remain-rate>' lines");
  add_prune_flags(sw, sf, false);

  std::string bundle, eval_dir = "data/UCR", eval_ds;
  std::size_t eval_threads = 1;
  auto* ev = app.add_subcommand("eval", "Evaluate a saved model bundle on a test split");
  ev->add_option("--bundle", bundle, "Bundle directory")->required();
  ev->add_option("--dataset-dir", eval_dir);
  ev->add_option("--dataset", eval_ds)->required();
  ev->add_option("--threads", eval_threads);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*tr) {
      namespace fs = std::filesystem;
      auto [train, test] = pocket::train_test_pair(tc.dataset_dir, tc.dataset);
      if (tc.znormalize) {
        pocket::znormalize_rows(train.series);
        pocket::znormalize_rows(test.series);
      }
      const auto kind = pocket::parse_model_kind(tc.model);
      const auto bank = kind == pocket::ModelKind::MiniRocket
                            ? pocket::generate_minirocket(tc.num_kernels, train, tc.seed)
                            : pocket::generate_rocket(tc.num_kernels, static_cast<int>(train.length()), tc.seed, kind);
      pocket::TransformOptions topts;
      topts.threads = tc.threads;
      fs::create_directories(tc.out);
      pocket::save_bank(fs::path(tc.out) / "bank.txt", bank);
      pocket::save_feature_matrix(fs::path(tc.out) / "train.feat", pocket::build_feature_matrix(train, bank, topts));
      pocket::save_feature_matrix(fs::path(tc.out) / "test.feat", pocket::build_feature_matrix(test, bank, topts));
      std::cout << "wrote " << bank.num_features() << " features for " << train.size() << " + " << test.size()
                << " series\n";
    } else if (*pr) {
      print_summary(pocket::cmd_prune(to_options(pc, pf)));
    } else if (*sw) {
      auto base = to_options(sc, sf);
      if (!batch.empty()) {
        for (const auto& e : pocket::read_batch_file(batch)) {
          auto o = base;
          o.dataset = e.dataset;
          o.remain_rate = e.remain_rate;
          o.remain_rate_substituted = e.substituted;
          if (base.out) o.out = *base.out / e.dataset;
          print_summary(pocket::cmd_prune(o));
        }
      } else {
        if (base.dataset.empty()) throw pocket::ConfigError("sweep needs --dataset or --batch");
        for (const auto& r : pocket::cmd_sweep(base, rates)) print_summary(r);
      }
    } else if (*ev) {
      const double acc = pocket::cmd_eval(bundle, eval_dir, eval_ds, eval_threads);
      std::printf("accuracy %.4f\n", acc);
    }
  } catch (const pocket::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
