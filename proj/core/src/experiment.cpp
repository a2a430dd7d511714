#include "semisup/experiment.hpp"

#include "semisup/compensated_sum.hpp"
#include "semisup/data_io.hpp"
#include "semisup/error.hpp"
#include "semisup/number_format.hpp"
#include "semisup/semi_supervised.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

namespace semisup {

namespace {

constexpr double kSelfLearnSlack = 1e-10;
constexpr double kEmSlack = 1e-9;

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = trim(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
    if (!piece.empty()) out.emplace_back(piece);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename Int>
Int parse_integer(std::string_view key, std::string_view text) {
  text = trim(text);
  Int value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::InvalidConfig, "config key '" + std::string(key) + "': expected an integer, got '" +
                                              std::string(text) + "'");
  }
  return value;
}

std::vector<Index> parse_sizes(std::string_view key, std::string_view text) {
  std::vector<Index> out;
  for (const auto& piece : split_list(text)) out.push_back(parse_integer<Index>(key, piece));
  return out;
}

bool parse_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw Error(ErrorCode::InvalidConfig, "config key '" + std::string(key) + "': expected a boolean");
}

std::uint64_t method_code(const MethodId& id) {
  return static_cast<std::uint64_t>(id.method) * 2 + static_cast<std::uint64_t>(id.kind) + 1;
}

bool non_decreasing(const std::vector<double>& values, double slack, bool relative) {
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double allowed = relative ? slack * (1.0 + std::abs(values[i - 1])) : slack;
    if (values[i] < values[i - 1] - allowed) return false;
  }
  return true;
}

std::string cell_context(const std::string& dataset, const MethodId& method, Index n_labeled, Index n_unlabeled) {
  return "dataset '" + dataset + "', method " + to_string(method) + ", n_labeled " + std::to_string(n_labeled) +
         ", n_unlabeled " + std::to_string(n_unlabeled);
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::Supervised: return "supervised";
    case Method::SelfLearned: return "self_learned";
    case Method::EmSoft: return "em_soft";
    case Method::Constrained: return "constrained";
  }
  return "unknown";
}

Method parse_method(std::string_view text) {
  text = trim(text);
  for (Method m : {Method::Supervised, Method::SelfLearned, Method::EmSoft, Method::Constrained}) {
    if (text == to_string(m)) return m;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown method '" + std::string(text) + "'");
}

std::string to_string(const MethodId& id) {
  return std::string(to_string(id.method)) + ":" + std::string(to_string(id.kind));
}

MethodId parse_method_id(std::string_view text) {
  text = trim(text);
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::InvalidConfig, "method '" + std::string(text) + "' must look like constrained:nmc");
  }
  return {parse_method(text.substr(0, colon)), parse_classifier_kind(trim(text.substr(colon + 1)))};
}

ExperimentConfig default_config() {
  ExperimentConfig config;
  const char* env = std::getenv(kDataDirEnv);
  config.data_dir = env && *env ? std::filesystem::path(env) : std::filesystem::path("data");
  for (const auto& spec : dataset_registry()) config.datasets.push_back(spec.name);
  for (ClassifierKind kind : {ClassifierKind::Nmc, ClassifierKind::Lda}) {
    for (Method m : {Method::Supervised, Method::SelfLearned, Method::Constrained}) config.methods.push_back({m, kind});
  }
  return config;
}

void check_config(const ExperimentConfig& config) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidConfig, msg); };
  if (config.datasets.empty()) fail("no datasets configured");
  if (config.methods.empty()) fail("no methods configured");
  if (config.repetitions < 1) fail("repetitions must be at least 1");
  if (config.min_per_class_nmc < 1) fail("min_per_class_nmc must be at least 1");
  if (config.min_per_class_lda < 2) fail("min_per_class_lda must be at least 2");
  if (config.max_redraws < 0) fail("max_redraws must be non-negative");
  if (config.max_replacements < 0) fail("max_replacements must be non-negative");
  if (config.max_iter < 1) fail("max_iter must be at least 1");
  if (!(config.em_tol > 0.0)) fail("em_tol must be positive");
  if (config.workers < 1) fail("workers must be at least 1");
  if (config.unlabeled_sizes.empty()) fail("no unlabeled sizes configured");
  for (std::size_t i = 0; i < config.unlabeled_sizes.size(); ++i) {
    if (config.unlabeled_sizes[i] < 1) fail("unlabeled sizes must be positive");
    if (i > 0 && config.unlabeled_sizes[i] <= config.unlabeled_sizes[i - 1]) {
      fail("unlabeled sizes must be strictly increasing");
    }
  }
  for (ClassifierKind kind : {ClassifierKind::Nmc, ClassifierKind::Lda}) {
    for (Index n : config.labeled_sizes(kind)) {
      if (n < 2 * config.min_per_class(kind)) {
        fail("labeled size " + std::to_string(n) + " cannot hold " + std::to_string(config.min_per_class(kind)) +
             " objects of each class for " + std::string(to_string(kind)));
      }
    }
  }
  for (const auto& id : config.methods) {
    if (config.labeled_sizes(id.kind).empty()) fail("no labeled sizes for " + std::string(to_string(id.kind)));
  }
}

ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  ExperimentConfig config = default_config();
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::InvalidConfig, "config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(trim(body.substr(0, eq)));
    const std::string_view value = trim(body.substr(eq + 1));

    if (key == "data_dir") {
      config.data_dir = std::filesystem::path(std::string(value));
      if (config.data_dir.is_relative() && !base_dir.empty()) config.data_dir = base_dir / config.data_dir;
    } else if (key == "datasets") {
      config.datasets = split_list(value);
    } else if (key == "methods") {
      config.methods.clear();
      for (const auto& m : split_list(value)) config.methods.push_back(parse_method_id(m));
    } else if (key == "labeled_sizes_nmc") {
      config.labeled_sizes_nmc = parse_sizes(key, value);
    } else if (key == "labeled_sizes_lda") {
      config.labeled_sizes_lda = parse_sizes(key, value);
    } else if (key == "unlabeled_sizes") {
      config.unlabeled_sizes = parse_sizes(key, value);
    } else if (key == "repetitions") {
      config.repetitions = parse_integer<int>(key, value);
    } else if (key == "master_seed") {
      config.master_seed = parse_integer<std::uint64_t>(key, value);
    } else if (key == "min_per_class_nmc") {
      config.min_per_class_nmc = parse_integer<int>(key, value);
    } else if (key == "min_per_class_lda") {
      config.min_per_class_lda = parse_integer<int>(key, value);
    } else if (key == "max_redraws") {
      config.max_redraws = parse_integer<int>(key, value);
    } else if (key == "max_replacements") {
      config.max_replacements = parse_integer<int>(key, value);
    } else if (key == "max_iter") {
      config.max_iter = parse_integer<int>(key, value);
    } else if (key == "em_tol") {
      const auto v = parse_double(value);
      if (!v) throw Error(ErrorCode::InvalidConfig, "config key 'em_tol': expected a number");
      config.em_tol = *v;
    } else if (key == "stratified") {
      config.stratified = parse_bool(key, value);
    } else if (key == "workers") {
      config.workers = parse_integer<int>(key, value);
    } else {
      throw Error(ErrorCode::InvalidConfig, "config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  check_config(config);
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config '" + path.string() + "'");
  return parse_config(in, path.parent_path());
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_string(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

RepSeeds rep_seeds(std::uint64_t master_seed, std::string_view dataset, const MethodId& method, Index n_labeled,
                   Index n_unlabeled, int rep, int attempt) {
  std::uint64_t h = mix64(master_seed);
  h = mix64(h ^ hash_string(dataset));
  h = mix64(h ^ method_code(method));
  h = mix64(h ^ static_cast<std::uint64_t>(n_labeled));
  h = mix64(h ^ static_cast<std::uint64_t>(rep));
  h = mix64(h ^ static_cast<std::uint64_t>(attempt));
  RepSeeds seeds;
  seeds.labeled = mix64(h ^ 0x4c4142454cULL);  // "LABEL"
  seeds.unlabeled = mix64(mix64(h ^ static_cast<std::uint64_t>(n_unlabeled)) ^ 0x554e4c4142ULL);  // "UNLAB"
  return seeds;
}

TrainingDraw draw_training_sets(const Dataset& data, Index n_labeled, Index n_unlabeled, const RepSeeds& seeds,
                                const DrawOptions& options) {
  if (n_labeled < 1 || n_unlabeled < 0) throw Error(ErrorCode::InvalidSpec, "training set sizes must be positive");
  if (data.size() < 1) throw Error(ErrorCode::EmptyInput, "cannot draw from an empty data set");
  const auto k = static_cast<std::size_t>(data.num_classes);

  TrainingDraw draw;
  std::mt19937_64 rng(seeds.labeled);
  std::uniform_int_distribution<Index> pick(0, data.size() - 1);
  std::vector<Index>& idx = draw.labeled_indices;

  if (options.stratified) {
    std::vector<std::vector<Index>> members(k);
    for (Index i = 0; i < data.size(); ++i) members[static_cast<std::size_t>(data.labels[static_cast<std::size_t>(i)])].push_back(i);
    for (std::size_t c = 0; c < k; ++c) {
      if (members[c].empty()) throw Error(ErrorCode::MissingClass, "class " + std::to_string(c) + " absent from " + data.name);
      std::uniform_int_distribution<std::size_t> within(0, members[c].size() - 1);
      for (int r = 0; r < options.min_per_class && static_cast<Index>(idx.size()) < n_labeled; ++r) {
        idx.push_back(members[c][within(rng)]);
      }
    }
    while (static_cast<Index>(idx.size()) < n_labeled) idx.push_back(pick(rng));
  } else {
    std::vector<int> counts(k);
    while (true) {
      idx.clear();
      std::fill(counts.begin(), counts.end(), 0);
      for (Index i = 0; i < n_labeled; ++i) {
        const Index j = pick(rng);
        idx.push_back(j);
        ++counts[static_cast<std::size_t>(data.labels[static_cast<std::size_t>(j)])];
      }
      const bool ok = std::all_of(counts.begin(), counts.end(), [&](int c) { return c >= options.min_per_class; });
      if (ok) break;
      if (draw.redraws >= options.max_redraws) {
        throw Error(ErrorCode::RedrawLimitExceeded, "no labeled draw with " + std::to_string(options.min_per_class) +
                                                        " objects per class after " +
                                                        std::to_string(options.max_redraws) + " redraws");
      }
      ++draw.redraws;
    }
  }

  std::mt19937_64 rng_unlabeled(seeds.unlabeled);
  draw.unlabeled_indices.reserve(static_cast<std::size_t>(n_unlabeled));
  for (Index i = 0; i < n_unlabeled; ++i) draw.unlabeled_indices.push_back(pick(rng_unlabeled));

  draw.labeled = take_rows(data, idx);
  draw.unlabeled = take_feature_rows(data.features, draw.unlabeled_indices);
  return draw;
}

Summary summarize(const std::vector<double>& values) {
  Summary s;
  if (values.empty()) return s;
  const auto n = static_cast<double>(values.size());
  CompensatedSum sum;
  for (double v : values) sum.add(v);
  s.mean = sum.value() / n;
  if (values.size() > 1) {
    CompensatedSum sq;
    for (double v : values) sq.add((v - s.mean) * (v - s.mean));
    s.sd = std::sqrt(sq.value() / (n - 1.0));
  }
  s.se = s.sd / std::sqrt(n);
  return s;
}

CurveCell aggregate_cell(std::string dataset, const MethodId& method, Index n_labeled, Index n_unlabeled,
                         const std::vector<RepRecord>& records) {
  std::vector<double> err, joint, marginal;
  err.reserve(records.size());
  joint.reserve(records.size());
  marginal.reserve(records.size());
  CurveCell cell;
  for (const auto& r : records) {
    err.push_back(r.error);
    joint.push_back(r.joint_ll);
    marginal.push_back(r.marginal_ll);
    cell.degenerate_draw_count += r.redraws;
  }
  const Summary e = summarize(err);
  const Summary j = summarize(joint);
  const Summary m = summarize(marginal);
  cell.dataset = std::move(dataset);
  cell.method = method;
  cell.n_labeled = n_labeled;
  cell.n_unlabeled = n_unlabeled;
  cell.n_reps = static_cast<int>(records.size());
  cell.mean_error = e.mean, cell.sd_error = e.sd, cell.se_error = e.se;
  cell.mean_joint_ll = j.mean, cell.sd_joint_ll = j.sd, cell.se_joint_ll = j.se;
  cell.mean_marginal_ll = m.mean, cell.sd_marginal_ll = m.sd, cell.se_marginal_ll = m.se;
  return cell;
}

RepRecord run_repetition(const Dataset& data, const MethodId& method, const TrainingDraw& draw,
                         const ExperimentConfig& config) {
  RepRecord rec;
  auto finish = [&](const GaussianClassifier& model) {
    const EvalResult ev = evaluate(model, data);
    rec.error = ev.error_rate;
    rec.joint_ll = ev.avg_joint_loglik;
    rec.marginal_ll = ev.avg_marginal_loglik;
    rec.variance_clamped = model.report().variance_clamped;
    rec.ridge_applied = model.report().ridge_applied;
    rec.psd_repaired = model.report().psd_repaired;
  };
  switch (method.method) {
    case Method::Supervised:
      finish(fit_supervised(method.kind, draw.labeled));
      break;
    case Method::Constrained:
      finish(fit_constrained(method.kind, draw.labeled, draw.unlabeled));
      break;
    case Method::SelfLearned: {
      const auto res = fit_self_learned(method.kind, draw.labeled, draw.unlabeled, config.max_iter);
      finish(res.model);
      rec.iterations = res.trace.iterations;
      rec.converged = res.trace.converged;
      rec.objective_monotone = non_decreasing(res.trace.objective_per_iter, kSelfLearnSlack, false);
      break;
    }
    case Method::EmSoft: {
      const auto res = fit_em_soft(method.kind, draw.labeled, draw.unlabeled, config.max_iter, config.em_tol);
      finish(res.model);
      rec.iterations = res.trace.iterations;
      rec.converged = res.trace.converged;
      rec.objective_monotone = non_decreasing(res.trace.objective_per_iter, kEmSlack, true);
      break;
    }
  }
  return rec;
}

CurveCell run_cell(const Dataset& data, const MethodId& method, Index n_labeled, Index n_unlabeled,
                   const ExperimentConfig& config, std::vector<RepRecord>* records) {
  const DrawOptions options{config.min_per_class(method.kind), config.max_redraws, config.stratified};
  std::vector<RepRecord> out(static_cast<std::size_t>(config.repetitions));

  auto one_rep = [&](int rep) {
    int redraws = 0;
    for (int attempt = 0; attempt <= config.max_replacements; ++attempt) {
      const RepSeeds seeds =
          rep_seeds(config.master_seed, data.name, method, n_labeled, n_unlabeled, rep, attempt);
      TrainingDraw draw;
      try {
        draw = draw_training_sets(data, n_labeled, n_unlabeled, seeds, options);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::RedrawLimitExceeded) throw;
        redraws += config.max_redraws + 1;
        continue;
      }
      RepRecord rec = run_repetition(data, method, draw, config);
      rec.rep = rep;
      rec.attempt = attempt;
      rec.redraws = redraws + draw.redraws;
      return rec;
    }
    throw Error(ErrorCode::RedrawLimitExceeded, "repetition " + std::to_string(rep) + " could not be drawn after " +
                                                    std::to_string(config.max_replacements) + " replacements");
  };

  std::atomic<int> next{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    while (true) {
      const int rep = next.fetch_add(1);
      if (rep >= config.repetitions) return;
      try {
        out[static_cast<std::size_t>(rep)] = one_rep(rep);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(config.repetitions);
        return;
      }
    }
  };

  const int threads = std::min(config.workers, config.repetitions);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  CurveCell cell = aggregate_cell(data.name, method, n_labeled, n_unlabeled, out);
  if (records) *records = std::move(out);
  return cell;
}

std::vector<CurveCell> run_grid(const ExperimentConfig& config, const std::vector<Dataset>& datasets,
                                const CellCallback& on_cell) {
  check_config(config);
  std::vector<CurveCell> cells;
  for (const auto& data : datasets) {
    for (const auto& method : config.methods) {
      for (Index n_labeled : config.labeled_sizes(method.kind)) {
        for (Index n_unlabeled : config.unlabeled_sizes) {
          CellRecords done;
          try {
            done.cell = run_cell(data, method, n_labeled, n_unlabeled, config, on_cell ? &done.records : nullptr);
          } catch (const Error& e) {
            throw Error(e.code(), cell_context(data.name, method, n_labeled, n_unlabeled) + ": " + e.what());
          }
          if (on_cell) on_cell(done);
          cells.push_back(std::move(done.cell));
        }
      }
    }
  }
  return cells;
}

Dataset load_configured_dataset(const ExperimentConfig& config, const std::string& name) {
  const auto path = config.data_dir / (name + ".csv");
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::Io, "dataset '" + name + "': file not found at '" + path.string() + "'");
  }
  try {
    if (const DatasetSpec* spec = find_dataset_spec(name)) return load_dataset(path, *spec);
    Dataset data = read_canonical_csv(path, name);
    check_dataset(data, true);
    return data;
  } catch (const Error& e) {
    throw Error(e.code(), "dataset '" + name + "' at '" + path.string() + "': " + e.what());
  }
}

std::vector<CurveCell> run_grid(const ExperimentConfig& config, const CellCallback& on_cell) {
  check_config(config);
  std::vector<Dataset> datasets;
  datasets.reserve(config.datasets.size());
  for (const auto& name : config.datasets) datasets.push_back(load_configured_dataset(config, name));
  return run_grid(config, datasets, on_cell);
}

}  // namespace semisup
