#include "pocket/bench.hpp"

#include "pocket/admm.hpp"
#include "pocket/error.hpp"
#include "pocket/pocket.hpp"
#include "pocket/ridge.hpp"
#include "pocket/transform.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace pocket {

using nlohmann::json;
namespace fs = std::filesystem;

std::string_view to_string(PruneMethod m) {
  switch (m) {
    case PruneMethod::None: return "none";
    case PruneMethod::Admm: return "admm";
    case PruneMethod::Pocket: return "pocket";
  }
  return "none";
}

PruneMethod parse_prune_method(std::string_view text) {
  if (text == "none") return PruneMethod::None;
  if (text == "admm") return PruneMethod::Admm;
  if (text == "pocket") return PruneMethod::Pocket;
  throw ConfigError("unknown method '" + std::string(text) + "'");
}

AccuracyStats summarize(std::vector<double> values) {
  AccuracyStats s;
  s.per_repeat = std::move(values);
  const auto n = s.per_repeat.size();
  if (n == 0) return s;
  s.mean = std::accumulate(s.per_repeat.begin(), s.per_repeat.end(), 0.0) / static_cast<double>(n);
  if (n > 1) {
    double ss = 0.0;
    for (double v : s.per_repeat) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(n - 1));
  }
  return s;
}

// ---- JSON ------------------------------------------------------------------

namespace {

json stats_json(const AccuracyStats& s) {
  return json{{"per_repeat", s.per_repeat}, {"mean", s.mean}, {"std", s.std}};
}

AccuracyStats stats_from(const json& j) {
  return AccuracyStats{j.at("per_repeat").get<std::vector<double>>(), j.at("mean").get<double>(),
                       j.at("std").get<double>()};
}

} // namespace

json timing_json(const RunReport& r) {
  return json{{"cv_seconds", r.timing.cv},
              {"refit_seconds", r.timing.refit},
              {"stage2_seconds", r.timing.stage2},
              {"sum_seconds", r.timing.sum}};
}

json to_json(const RunReport& r, bool with_timing) {
  json hyper = json::array();
  for (const auto& h : r.hyper) hyper.push_back(json{{"k", h.k}, {"rho1", h.rho1}, {"rho2", h.rho2}});
  json j{{"dataset", r.dataset},
         {"model", r.model},
         {"method", r.method},
         {"num_kernels", r.num_kernels},
         {"num_features", r.num_features},
         {"remain", r.remain},
         {"remain_rate", r.remain_rate},
         {"remain_rate_substituted", r.remain_rate_substituted},
         {"znormalize", r.znormalize},
         {"iterations", r.iterations},
         {"repeats", r.repeats},
         {"seeds", r.seeds},
         {"accuracy",
          {{"unpruned", stats_json(r.unpruned)},
           {"stage1", stats_json(r.stage1)},
           {"stage2", stats_json(r.stage2)}}},
         {"hyper", hyper},
         {"cv_bypassed", r.cv_bypassed},
         {"unpruned_alpha", r.unpruned_alpha},
         {"stage2_alpha", r.stage2_alpha},
         {"factorizations", r.factorizations},
         {"degenerate", r.degenerate}};
  if (r.baseline_random) j["accuracy"]["baseline_random"] = stats_json(*r.baseline_random);
  if (r.baseline_scratch) j["accuracy"]["baseline_scratch"] = stats_json(*r.baseline_scratch);
  if (with_timing) j["timing"] = timing_json(r);
  return j;
}

RunReport report_from_json(const json& j) {
  RunReport r;
  r.dataset = j.at("dataset").get<std::string>();
  r.model = j.at("model").get<std::string>();
  r.method = j.at("method").get<std::string>();
  r.num_kernels = j.at("num_kernels").get<std::size_t>();
  r.num_features = j.at("num_features").get<Index>();
  r.remain = j.at("remain").get<Index>();
  r.remain_rate = j.at("remain_rate").get<double>();
  r.remain_rate_substituted = j.at("remain_rate_substituted").get<bool>();
  r.znormalize = j.value("znormalize", false);
  r.iterations = j.at("iterations").get<int>();
  r.repeats = j.at("repeats").get<int>();
  r.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  const auto& acc = j.at("accuracy");
  r.unpruned = stats_from(acc.at("unpruned"));
  r.stage1 = stats_from(acc.at("stage1"));
  r.stage2 = stats_from(acc.at("stage2"));
  if (acc.contains("baseline_random")) r.baseline_random = stats_from(acc.at("baseline_random"));
  if (acc.contains("baseline_scratch")) r.baseline_scratch = stats_from(acc.at("baseline_scratch"));
  for (const auto& h : j.at("hyper"))
    r.hyper.push_back({h.at("k").get<double>(), h.at("rho1").get<double>(), h.at("rho2").get<double>()});
  r.cv_bypassed = j.at("cv_bypassed").get<std::vector<bool>>();
  r.unpruned_alpha = j.at("unpruned_alpha").get<std::vector<double>>();
  r.stage2_alpha = j.at("stage2_alpha").get<std::vector<double>>();
  r.factorizations = j.at("factorizations").get<std::vector<std::size_t>>();
  r.degenerate = j.at("degenerate").get<std::vector<bool>>();
  if (j.contains("timing")) {
    const auto& t = j.at("timing");
    r.timing = {t.at("cv_seconds").get<double>(), t.at("refit_seconds").get<double>(),
                t.at("stage2_seconds").get<double>(), t.at("sum_seconds").get<double>()};
  }
  return r;
}

// ---- bundle files ----------------------------------------------------------

namespace {

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_num(const std::string& tok, const char* what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw DataError(std::string(what) + ": bad number '" + tok + "'");
  return v;
}

void write_matrix(const fs::path& path, const Matrix& M) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "pocket-matrix 1 " << M.rows() << ' ' << M.cols() << '\n';
  for (Index i = 0; i < M.rows(); ++i) {
    for (Index j = 0; j < M.cols(); ++j) out << (j ? " " : "") << fmt(M(i, j));
    out << '\n';
  }
}

Matrix read_matrix(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  std::string magic;
  int version = 0;
  Index rows = -1, cols = -1;
  in >> magic >> version >> rows >> cols;
  if (magic != "pocket-matrix" || version != 1 || rows < 0 || cols < 0)
    throw DataError(path.string() + ": not a matrix file");
  Matrix M(rows, cols);
  std::string tok;
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) {
      if (!(in >> tok)) throw DataError(path.string() + ": truncated");
      M(i, j) = parse_num(tok, "matrix");
    }
  return M;
}

} // namespace

void save_bundle(const fs::path& dir, const ModelBundle& b) {
  fs::create_directories(dir);
  save_bank(dir / "bank.txt", b.bank);
  Matrix s(b.standardizer.width(), 2);
  if (s.rows() > 0) {
    s.col(0) = b.standardizer.centers;
    s.col(1) = b.standardizer.scales;
  }
  write_matrix(dir / "standardizer.txt", s);
  write_matrix(dir / "weights.txt", b.W);
  json meta = b.metadata;
  meta["label_tokens"] = b.label_tokens;
  std::ofstream(dir / "metadata.json") << meta.dump(2) << '\n';
}

ModelBundle load_bundle(const fs::path& dir) {
  ModelBundle b;
  b.bank = load_bank(dir / "bank.txt");
  const Matrix s = read_matrix(dir / "standardizer.txt");
  if (s.cols() != 2) throw DataError("standardizer file must have two columns");
  b.standardizer.centers = s.col(0);
  b.standardizer.scales = s.col(1);
  b.W = read_matrix(dir / "weights.txt");
  std::ifstream meta(dir / "metadata.json");
  if (!meta) throw DataError("missing metadata.json in " + dir.string());
  b.metadata = json::parse(meta);
  b.label_tokens = b.metadata.at("label_tokens").get<std::vector<std::string>>();
  if (b.W.rows() != b.standardizer.width())
    throw DimensionError("bundle weights and standardizer disagree on H");
  if (static_cast<Index>(b.bank.num_features()) != b.standardizer.width())
    throw DimensionError("bundle bank and standardizer disagree on H");
  return b;
}

double evaluate_bundle(const ModelBundle& b, const TimeSeriesDataset& test, std::size_t threads) {
  if (test.length() != b.bank.series_length)
    throw DimensionError("series length " + std::to_string(test.length()) + " does not match bundle (" +
                         std::to_string(b.bank.series_length) + ")");
  TransformOptions topts;
  topts.threads = threads;
  const Matrix X = standardize_apply(transform(test.series, b.bank, topts), b.standardizer);
  if (b.W.cols() != static_cast<Index>(b.label_tokens.size()))
    throw DimensionError("bundle weights do not match its label count");
  return accuracy(argmax_rows(X * b.W), test.labels);
}

double cmd_eval(const fs::path& bundle_dir, const fs::path& dataset_dir, const std::string& dataset,
                std::size_t threads) {
  const ModelBundle b = load_bundle(bundle_dir);
  auto test = load_ucr_tsv(dataset_dir / dataset / (dataset + "_TEST.tsv"), b.label_tokens);
  if (b.metadata.value("znormalize", false)) znormalize_rows(test.series);
  return evaluate_bundle(b, test, threads);
}

// ---- experiments -------------------------------------------------------------

Index remain_count(const RunOptions& opts, Index num_groups) {
  if (opts.remain && opts.remain_rate) throw ConfigError("give either a remain count or a remain rate");
  if (opts.remain) {
    if (*opts.remain < 1 || *opts.remain >= num_groups)
      throw ConfigError("remain must satisfy 1 <= m < G (G = " + std::to_string(num_groups) + ")");
    return *opts.remain;
  }
  if (opts.remain_rate) return resolve_remain(*opts.remain_rate, num_groups);
  throw ConfigError("a remain count or remain rate is required");
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <class E>
[[noreturn]] void rethrow_as(const E&, const std::string& msg) {
  throw E(msg);
}

[[noreturn]] void rethrow_with_context(const std::string& ctx) {
  try {
    throw;
  } catch (const DataError& e) {
    rethrow_as(e, ctx + e.what());
  } catch (const DimensionError& e) {
    rethrow_as(e, ctx + e.what());
  } catch (const ConfigError& e) {
    rethrow_as(e, ctx + e.what());
  } catch (const NumericalError& e) {
    rethrow_as(e, ctx + e.what());
  } catch (const std::exception& e) {
    throw Error(ctx + e.what());
  }
}

KernelBank make_bank(const RunOptions& opts, std::size_t count, const TimeSeriesDataset& train,
                     std::uint64_t seed) {
  if (opts.model == ModelKind::MiniRocket) return generate_minirocket(count, train, seed);
  return generate_rocket(count, static_cast<int>(train.length()), seed, opts.model);
}

struct Split {
  Matrix train;
  Matrix test;
  Standardizer stdz;
  Matrix train_raw;
};

Split featurize(const TimeSeriesDataset& train, const TimeSeriesDataset& test, const KernelBank& bank,
                std::size_t threads) {
  TransformOptions topts;
  topts.threads = threads;
  Split s;
  s.train_raw = transform(train.series, bank, topts);
  auto [Xs, stdz] = standardize_fit(s.train_raw);
  s.train = std::move(Xs);
  s.stdz = std::move(stdz);
  s.test = standardize_apply(transform(test.series, bank, topts), s.stdz);
  return s;
}

double ridge_accuracy(const Matrix& Xtr, const Matrix& Y, const Matrix& Xte, const std::vector<int>& yte,
                      double* alpha_out = nullptr, Matrix* W_out = nullptr) {
  const double alpha = loocv_select_alpha(Xtr, Y).best_alpha;
  Matrix W = fit_ridge(Xtr, Y, alpha);
  const double acc = accuracy(argmax_rows(Xte * W), yte);
  if (alpha_out) *alpha_out = alpha;
  if (W_out) *W_out = std::move(W);
  return acc;
}

std::string rate_label(double rate) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(4);
  s << rate;
  return s.str();
}

} // namespace

RunReport cmd_prune(const RunOptions& opts) {
  if (opts.repeats < 1) throw ConfigError("repeats must be >= 1");
  if (opts.iterations < 1) throw ConfigError("iterations must be >= 1");
  if (opts.num_kernels < 1) throw ConfigError("num-kernels must be >= 1");
  if (opts.method == PruneMethod::Pocket && opts.k && *opts.k <= 0) throw ConfigError("k must be > 0");
  if (opts.rho1.has_value() != opts.rho2.has_value()) throw ConfigError("give both rho1 and rho2");

  const std::string ctx0 = opts.dataset + ": ";
  TimeSeriesDataset train, test;
  try {
    std::tie(train, test) = train_test_pair(opts.dataset_dir, opts.dataset);
    if (opts.znormalize) {
      znormalize_rows(train.series);
      znormalize_rows(test.series);
    }
  } catch (...) {
    rethrow_with_context(ctx0);
  }

  RunReport rep;
  rep.dataset = opts.dataset;
  rep.model = std::string(to_string(opts.model));
  rep.method = std::string(to_string(opts.method));
  rep.num_kernels = opts.num_kernels;
  rep.iterations = opts.iterations;
  rep.repeats = opts.repeats;
  rep.remain_rate_substituted = opts.remain_rate_substituted;
  rep.znormalize = opts.znormalize;

  const Index G = static_cast<Index>(opts.num_kernels);
  const bool prune = opts.method != PruneMethod::None;
  if (prune) {
    rep.remain = remain_count(opts, G);
    rep.remain_rate = static_cast<double>(rep.remain) / static_cast<double>(G);
  } else {
    rep.remain = G;
    rep.remain_rate = 1.0;
  }

  if (opts.out) fs::create_directories(*opts.out);
  std::vector<double> acc_unpruned, acc_s1, acc_s2, acc_rand, acc_scratch;

  for (int r = 0; r < opts.repeats; ++r) {
    const std::uint64_t seed = opts.seed + static_cast<std::uint64_t>(r);
    rep.seeds.push_back(seed);
    try {
      const KernelBank bank = make_bank(opts, opts.num_kernels, train, seed);
      Split split = featurize(train, test, bank, opts.threads);
      rep.num_features = split.train.cols();
      const auto group_map = make_group_map(opts.model, static_cast<Index>(bank.size()));
      const GroupView view(group_map, split.train.cols());
      const Matrix Y = encode_labels(train.labels, train.num_classes).Y;

      double alpha0 = 0.0;
      Matrix W0;
      acc_unpruned.push_back(ridge_accuracy(split.train, Y, split.test, test.labels, &alpha0, &W0));
      rep.unpruned_alpha.push_back(alpha0);

      ModelBundle bundle;
      bundle.label_tokens = train.label_tokens;
      json meta{{"dataset", opts.dataset}, {"model", rep.model}, {"seed", seed}, {"method", rep.method},
                {"znormalize", opts.znormalize}};

      if (!prune) {
        bundle.bank = bank;
        bundle.standardizer = split.stdz;
        bundle.W = W0;
        meta["weights"] = "unpruned";
        meta["accuracy"] = acc_unpruned.back();
      } else {
        // Hyperparameters: supplied or cross-validated on the training split.
        HyperPoint hp;
        bool bypassed = false;
        const bool supplied = opts.method == PruneMethod::Pocket ? opts.k.has_value() : opts.rho1.has_value();
        auto t0 = Clock::now();
        if (supplied) {
          if (opts.method == PruneMethod::Pocket) hp.k = *opts.k;
          else hp = HyperPoint{1.0, *opts.rho1, *opts.rho2};
        } else {
          CvPlan plan;
          plan.folds = opts.folds;
          plan.seed = seed;
          plan.threads = opts.threads;
          plan.grid = opts.method == PruneMethod::Pocket ? k_grid(opts.k_grid) : rho_grid(opts.rho_grid, opts.rho_grid);
          SolverSpec spec{opts.method == PruneMethod::Pocket ? Method::Pocket : Method::Admm, rep.remain,
                          opts.iterations};
          const CvResult cv = cv_select(split.train_raw, train.labels, train.num_classes, view, plan, spec);
          hp = cv.best;
          bypassed = cv.bypassed;
          if (opts.out) {
            std::ofstream f(*opts.out / ("cv_r" + std::to_string(r) + ".csv"));
            write_cv_report_csv(f, plan, cv);
          }
        }
        rep.timing.cv += seconds_since(t0);
        rep.hyper.push_back(hp);
        rep.cv_bypassed.push_back(bypassed);

        t0 = Clock::now();
        PruneResult pr;
        if (opts.method == PruneMethod::Pocket) {
          PocketConfig cfg;
          cfg.m = rep.remain;
          cfg.k = hp.k;
          cfg.iterations = opts.iterations;
          pr = stage1(split.train, Y, cfg, view);
        } else {
          AdmmConfig cfg;
          cfg.m = rep.remain;
          cfg.rho1 = hp.rho1;
          cfg.rho2 = hp.rho2;
          cfg.iterations = opts.iterations;
          pr = admm_prune(split.train, Y, view, cfg);
        }
        rep.timing.refit += seconds_since(t0);
        rep.factorizations.push_back(pr.factorizations);
        rep.degenerate.push_back(pr.degenerate);
        acc_s1.push_back(accuracy(predict(split.test, RidgeModel{pr.W_pruned, 0.0, pr.kept_columns}), test.labels));

        if (opts.trace && opts.out) {
          std::ofstream f(*opts.out / ("trace_r" + std::to_string(r) + ".csv"));
          write_trace_csv(f, pr.trace);
        }

        Matrix W_final = pr.W_pruned;
        meta["weights"] = "stage1";
        meta["accuracy"] = acc_s1.back();
        if (opts.stage2) {
          t0 = Clock::now();
          const RidgeModel m2 = stage2(split.train, pr.selected_groups, view, Y);
          rep.timing.stage2 += seconds_since(t0);
          rep.stage2_alpha.push_back(m2.alpha);
          acc_s2.push_back(accuracy(predict(split.test, m2), test.labels));
          W_final = m2.W;
          meta["weights"] = "stage2";
          meta["alpha"] = m2.alpha;
          meta["accuracy"] = acc_s2.back();
        }

        if (opts.baseline_random) {
          std::vector<int> ids(static_cast<std::size_t>(G));
          std::iota(ids.begin(), ids.end(), 0);
          std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
          std::shuffle(ids.begin(), ids.end(), rng);
          ids.resize(static_cast<std::size_t>(rep.remain));
          std::sort(ids.begin(), ids.end());
          acc_rand.push_back(accuracy(predict(split.test, stage2(split.train, ids, view, Y)), test.labels));
        }
        if (opts.baseline_scratch) {
          const KernelBank small = make_bank(opts, static_cast<std::size_t>(rep.remain), train, seed);
          const Split s = featurize(train, test, small, opts.threads);
          acc_scratch.push_back(ridge_accuracy(s.train, Y, s.test, test.labels));
        }

        const std::set<int> keep(pr.selected_groups.begin(), pr.selected_groups.end());
        bundle.bank = prune_bank(bank, keep);
        bundle.standardizer = split.stdz.restrict(pr.kept_columns);
        bundle.W = W_final;
        meta["selected_groups"] = pr.selected_groups;
      }

      if (opts.out && r == opts.repeats - 1) {
        bundle.metadata = std::move(meta);
        save_bundle(*opts.out / "model", bundle);
      }
    } catch (...) {
      rethrow_with_context(ctx0 + "repeat " + std::to_string(r) + ": ");
    }
  }

  rep.unpruned = summarize(acc_unpruned);
  rep.stage1 = summarize(acc_s1);
  rep.stage2 = summarize(acc_s2);
  if (opts.baseline_random && prune) rep.baseline_random = summarize(acc_rand);
  if (opts.baseline_scratch && prune) rep.baseline_scratch = summarize(acc_scratch);
  rep.timing.sum = rep.timing.cv + rep.timing.refit + rep.timing.stage2;

  if (opts.out) {
    std::ofstream(*opts.out / "report.json") << to_json(rep, false).dump(2) << '\n';
    std::ofstream(*opts.out / "timing.json") << timing_json(rep).dump(2) << '\n';
  }
  return rep;
}

std::vector<RunReport> cmd_sweep(const RunOptions& base, const std::vector<double>& rates) {
  if (rates.empty()) throw ConfigError("sweep: empty rate list");
  std::vector<RunReport> out;
  for (double rate : rates) {
    RunOptions o = base;
    o.remain.reset();
    o.remain_rate = rate;
    if (base.out) o.out = *base.out / ("rate-" + rate_label(rate));
    out.push_back(cmd_prune(o));
  }
  if (base.out) {
    json all = json::array();
    for (const auto& r : out) all.push_back(to_json(r, false));
    fs::create_directories(*base.out);
    std::ofstream(*base.out / "sweep.json") << all.dump(2) << '\n';
  }
  return out;
}

std::vector<BatchEntry> read_batch_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read batch file " + path.string());
  std::vector<BatchEntry> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    std::string name, rate;
    if (!(fields >> name)) continue;
    if (!(fields >> rate)) throw DataError(path.string() + ":" + std::to_string(lineno) + ": missing rate");
    BatchEntry e{name, parse_num(rate, "batch file"), false};
    if (e.remain_rate == 1.0) {
      e.remain_rate = 0.5;
      e.substituted = true;
    }
    out.push_back(e);
  }
  return out;
}

} // namespace pocket
