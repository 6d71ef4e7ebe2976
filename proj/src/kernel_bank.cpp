#include "pocket/kernel_bank.hpp"

#include "pocket/error.hpp"
#include "pocket/transform.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace pocket {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::RocketPpvMax: return "rocket-ppv-max";
    case ModelKind::RocketPpv: return "rocket-ppv";
    case ModelKind::MiniRocket: return "minirocket";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view text) {
  std::string s(text);
  std::replace(s.begin(), s.end(), '_', '-');
  if (s == "rocket-ppv-max" || s == "rocket") return ModelKind::RocketPpvMax;
  if (s == "rocket-ppv") return ModelKind::RocketPpv;
  if (s == "minirocket") return ModelKind::MiniRocket;
  throw ConfigError("unknown model kind '" + std::string(text) + "'");
}

bool operator==(const RocketKernel& a, const RocketKernel& b) {
  return a.weights == b.weights && a.bias == b.bias && a.dilation == b.dilation &&
         a.padding == b.padding && a.group_id == b.group_id;
}

KernelBank generate_rocket(std::size_t num_kernels, int series_length, std::uint64_t seed,
                           ModelKind kind) {
  if (kind == ModelKind::MiniRocket)
    throw ConfigError("generate_rocket: use generate_minirocket for MINIROCKET banks");
  if (num_kernels < 1) throw ConfigError("generate_rocket: need at least one kernel");
  if (series_length < 2) throw ConfigError("generate_rocket: series length must be >= 2");

  std::mt19937_64 rng(seed);
  constexpr std::array<int, 3> lengths{7, 9, 11};
  std::uniform_int_distribution<int> pick_length(0, 2);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform_bias(-1.0, 1.0);
  std::bernoulli_distribution coin(0.5);

  KernelBank bank;
  bank.kind = kind;
  bank.seed = seed;
  bank.series_length = series_length;
  bank.kernels.reserve(num_kernels);
  for (std::size_t g = 0; g < num_kernels; ++g) {
    RocketKernel k;
    const int len = lengths[static_cast<std::size_t>(pick_length(rng))];
    k.weights.resize(static_cast<std::size_t>(len));
    for (auto& w : k.weights) w = normal(rng);
    const double mean = std::accumulate(k.weights.begin(), k.weights.end(), 0.0) / len;
    for (auto& w : k.weights) w -= mean;
    k.bias = uniform_bias(rng);

    const double max_exponent =
        std::max(0.0, std::log2(static_cast<double>(series_length - 1) / (len - 1)));
    std::uniform_real_distribution<double> exponent(0.0, max_exponent);
    k.dilation = std::max(1, static_cast<int>(std::floor(std::exp2(exponent(rng)))));
    const int same = ((len - 1) * k.dilation) / 2;
    k.padding = coin(rng) ? same : 0;
    // Series shorter than the kernel span only admit the padded variant.
    if (k.receptive_field() > series_length + 2 * k.padding) k.padding = same;
    k.group_id = static_cast<int>(g);
    bank.kernels.push_back(std::move(k));
  }
  return bank;
}

std::vector<std::array<int, 3>> minirocket_base_patterns() {
  std::vector<std::array<int, 3>> out;
  for (int a = 0; a < 9; ++a)
    for (int b = a + 1; b < 9; ++b)
      for (int c = b + 1; c < 9; ++c) out.push_back({a, b, c});
  return out;
}

namespace {

double quantile_linear(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

} // namespace

KernelBank generate_minirocket(std::size_t num_features, const TimeSeriesDataset& train,
                               std::uint64_t seed) {
  constexpr std::size_t kBase = 84;
  constexpr std::size_t kMaxDilations = 32;
  if (num_features < kBase)
    throw ConfigError("generate_minirocket: need at least 84 features, got " +
                      std::to_string(num_features));
  if (train.size() == 0) throw ConfigError("generate_minirocket: empty training set");
  const int series_length = static_cast<int>(train.length());
  if (series_length < 2) throw ConfigError("generate_minirocket: series length must be >= 2");

  const auto patterns = minirocket_base_patterns();
  const std::size_t per_kernel = num_features / kBase;
  const std::size_t extra = num_features % kBase;

  // Dilations log-spaced over [1, (L-1)/8], deduplicated after flooring; each
  // distinct dilation receives a share of the per-kernel feature budget.
  const std::size_t num_dil = std::min(per_kernel, kMaxDilations);
  const double max_exponent = std::max(0.0, std::log2((series_length - 1) / 8.0));
  std::vector<int> dilations;
  std::vector<std::size_t> counts;
  for (std::size_t i = 0; i < num_dil; ++i) {
    const double e = num_dil == 1 ? 0.0 : max_exponent * static_cast<double>(i) / (num_dil - 1);
    const int d = static_cast<int>(std::floor(std::exp2(e)));
    if (!dilations.empty() && dilations.back() == d) {
      ++counts.back();
    } else {
      dilations.push_back(d);
      counts.push_back(1);
    }
  }
  const double multiplier = static_cast<double>(per_kernel) / static_cast<double>(num_dil);
  std::vector<std::size_t> per_dilation(counts.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    per_dilation[i] = static_cast<std::size_t>(static_cast<double>(counts[i]) * multiplier);
    assigned += per_dilation[i];
  }
  for (std::size_t i = 0; assigned < per_kernel; i = (i + 1) % per_dilation.size(), ++assigned)
    ++per_dilation[i];

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Index> pick_series(0, train.size() - 1);

  KernelBank bank;
  bank.kind = ModelKind::MiniRocket;
  bank.seed = seed;
  bank.series_length = series_length;
  bank.kernels.reserve(num_features);

  std::size_t combination = 0;
  for (std::size_t di = 0; di < dilations.size(); ++di) {
    for (std::size_t p = 0; p < kBase; ++p, ++combination) {
      // The first `extra` base kernels carry one more feature at the smallest dilation.
      const std::size_t q = per_dilation[di] + (di == 0 && p < extra ? 1 : 0);
      if (q == 0) continue;
      RocketKernel proto;
      proto.weights.assign(9, -1.0);
      for (int pos : patterns[p]) proto.weights[static_cast<std::size_t>(pos)] = 2.0;
      proto.dilation = dilations[di];
      const int same = 4 * proto.dilation;
      proto.padding = combination % 2 == 0 ? same : 0;
      if (proto.receptive_field() > series_length + 2 * proto.padding) proto.padding = same;

      const Index n = pick_series(rng);
      std::vector<double> row(static_cast<std::size_t>(series_length));
      for (int j = 0; j < series_length; ++j) row[static_cast<std::size_t>(j)] = train.series(n, j);
      const auto response = convolve1d(row, proto);

      for (std::size_t j = 0; j < q; ++j) {
        RocketKernel k = proto;
        k.bias = -quantile_linear(response, static_cast<double>(j + 1) / static_cast<double>(q + 1));
        k.group_id = static_cast<int>(bank.kernels.size());
        bank.kernels.push_back(std::move(k));
      }
    }
  }
  return bank;
}

KernelBank prune_bank(const KernelBank& bank, const std::set<int>& keep) {
  if (keep.empty()) throw ConfigError("prune_bank: keep set is empty");
  std::set<int> present;
  for (const auto& k : bank.kernels) present.insert(k.group_id);
  for (int id : keep)
    if (!present.contains(id))
      throw ConfigError("prune_bank: unknown group id " + std::to_string(id));
  KernelBank out = bank;
  out.kernels.clear();
  for (const auto& k : bank.kernels)
    if (keep.contains(k.group_id)) out.kernels.push_back(k);
  return out;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& tok) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw DataError("kernel bank: bad number '" + tok + "'");
  return v;
}

template <typename T>
T parse_int(const std::string& tok) {
  T v{};
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw DataError("kernel bank: bad integer '" + tok + "'");
  return v;
}

constexpr std::string_view kBankMagic = "pocket-kernel-bank";

} // namespace

void write_bank(std::ostream& out, const KernelBank& bank) {
  out << kBankMagic << " 1 " << to_string(bank.kind) << ' ' << bank.seed << ' '
      << bank.series_length << ' ' << bank.size() << '\n';
  for (const auto& k : bank.kernels) {
    out << to_string(bank.kind) << ' ' << k.length();
    for (double w : k.weights) out << ' ' << format_double(w);
    out << ' ' << format_double(k.bias) << ' ' << k.dilation << ' ' << k.padding << ' '
        << k.group_id << '\n';
  }
}

KernelBank read_bank(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("kernel bank: empty input");
  std::istringstream header(line);
  std::string magic, version, kind, seed, length, count;
  header >> magic >> version >> kind >> seed >> length >> count;
  if (magic != kBankMagic || version != "1") throw DataError("kernel bank: bad header");

  KernelBank bank;
  bank.kind = parse_model_kind(kind);
  bank.seed = parse_int<std::uint64_t>(seed);
  bank.series_length = parse_int<int>(length);
  const auto n = parse_int<std::size_t>(count);
  bank.kernels.reserve(n);
  while (bank.kernels.size() < n && std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream rec(line);
    std::vector<std::string> tok;
    for (std::string t; rec >> t;) tok.push_back(std::move(t));
    if (tok.size() < 2) throw DataError("kernel bank: truncated record");
    if (parse_model_kind(tok[0]) != bank.kind) throw DataError("kernel bank: mixed model kinds");
    const auto len = parse_int<std::size_t>(tok[1]);
    if (tok.size() != len + 6) throw DataError("kernel bank: wrong field count");
    RocketKernel k;
    for (std::size_t j = 0; j < len; ++j) k.weights.push_back(parse_double(tok[2 + j]));
    k.bias = parse_double(tok[2 + len]);
    k.dilation = parse_int<int>(tok[3 + len]);
    k.padding = parse_int<int>(tok[4 + len]);
    k.group_id = parse_int<int>(tok[5 + len]);
    if (k.dilation < 1 || k.padding < 0) throw DataError("kernel bank: invalid dilation/padding");
    bank.kernels.push_back(std::move(k));
  }
  if (bank.kernels.size() != n) throw DataError("kernel bank: fewer kernels than declared");
  return bank;
}

void save_bank(const std::filesystem::path& path, const KernelBank& bank) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  write_bank(out, bank);
}

KernelBank load_bank(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return read_bank(in);
}

} // namespace pocket
