#include "guessvi/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <variant>

#include "guessvi/generators.hpp"
#include "guessvi/io.hpp"
#include "guessvi/oracle.hpp"

namespace guessvi {

namespace {

// Values of the supported TOML subset.
using Scalar = std::variant<std::string, double, bool>;
struct Value {
  std::vector<Scalar> items;
  bool is_array = false;
  std::size_t line = 0;
};
using Table = std::map<std::string, Value>;

[[noreturn]] void spec_fail(std::size_t line, const std::string& msg) {
  throw std::runtime_error("bench spec line " + std::to_string(line) + ": " + msg);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string_view strip_comment(std::string_view s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

Scalar parse_scalar(std::string_view tok, std::size_t line) {
  tok = trim(tok);
  if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"') {
    std::string out;
    for (std::size_t i = 1; i + 1 < tok.size(); ++i) {
      if (tok[i] == '\\' && i + 2 < tok.size()) ++i;
      out.push_back(tok[i]);
    }
    return out;
  }
  if (tok == "true") return true;
  if (tok == "false") return false;
  std::string cleaned;
  for (char c : tok)
    if (c != '_') cleaned.push_back(c);
  double v = 0.0;
  auto res = std::from_chars(cleaned.data(), cleaned.data() + cleaned.size(), v);
  if (cleaned.empty() || res.ec != std::errc() || res.ptr != cleaned.data() + cleaned.size())
    spec_fail(line, "cannot parse value '" + std::string(tok) + "'");
  return v;
}

Value parse_value(std::string_view text, std::size_t line) {
  text = trim(text);
  Value v;
  v.line = line;
  if (!text.empty() && text.front() == '[') {
    if (text.back() != ']') spec_fail(line, "unterminated array");
    v.is_array = true;
    std::string_view body = text.substr(1, text.size() - 2);
    std::size_t start = 0;
    bool quoted = false;
    for (std::size_t i = 0; i <= body.size(); ++i) {
      if (i < body.size() && body[i] == '"') quoted = !quoted;
      if (i == body.size() || (body[i] == ',' && !quoted)) {
        std::string_view item = trim(body.substr(start, i - start));
        if (!item.empty()) v.items.push_back(parse_scalar(item, line));
        start = i + 1;
      }
    }
    return v;
  }
  v.items.push_back(parse_scalar(text, line));
  return v;
}

struct Document {
  Table top;
  std::vector<Table> instances;
};

Document parse_document(const std::string& text) {
  Document doc;
  Table* current = &doc.top;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view s = trim(strip_comment(raw));
    if (s.empty()) continue;
    if (s == "[[instance]]") {
      doc.instances.emplace_back();
      current = &doc.instances.back();
      continue;
    }
    if (s.front() == '[') spec_fail(line, "unsupported table '" + std::string(s) + "'");
    auto eq = s.find('=');
    if (eq == std::string_view::npos) spec_fail(line, "expected key = value");
    std::string key(trim(s.substr(0, eq)));
    if (key.empty()) spec_fail(line, "empty key");
    if (current->count(key)) spec_fail(line, "duplicate key '" + key + "'");
    (*current)[key] = parse_value(s.substr(eq + 1), line);
  }
  return doc;
}

const Scalar& single(const Value& v, const std::string& key) {
  if (v.is_array || v.items.size() != 1) spec_fail(v.line, "'" + key + "' must be a single value");
  return v.items[0];
}

double get_number(const Table& t, const std::string& key, double fallback) {
  auto it = t.find(key);
  if (it == t.end()) return fallback;
  const Scalar& s = single(it->second, key);
  if (!std::holds_alternative<double>(s)) spec_fail(it->second.line, "'" + key + "' must be a number");
  return std::get<double>(s);
}

std::uint64_t get_count(const Table& t, const std::string& key, std::uint64_t fallback) {
  auto it = t.find(key);
  if (it == t.end()) return fallback;
  double v = get_number(t, key, 0.0);
  if (v < 0 || v != std::floor(v) || v > 1.8e19) spec_fail(it->second.line, "'" + key + "' must be a non-negative integer");
  return static_cast<std::uint64_t>(v);
}

std::optional<std::string> get_string(const Table& t, const std::string& key) {
  auto it = t.find(key);
  if (it == t.end()) return std::nullopt;
  const Scalar& s = single(it->second, key);
  if (!std::holds_alternative<std::string>(s)) spec_fail(it->second.line, "'" + key + "' must be a string");
  return std::get<std::string>(s);
}

bool get_bool(const Table& t, const std::string& key, bool fallback) {
  auto it = t.find(key);
  if (it == t.end()) return fallback;
  const Scalar& s = single(it->second, key);
  if (!std::holds_alternative<bool>(s)) spec_fail(it->second.line, "'" + key + "' must be true or false");
  return std::get<bool>(s);
}

void check_keys(const Table& t, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : t) {
    bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
    if (!ok) spec_fail(value.line, "unknown key '" + key + "'");
  }
}

std::string format_fixed(double x, int digits) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, digits);
  return std::string(buf, res.ptr);
}

}  // namespace

double epsilon_from_exponent(double x) { return std::pow(1e6, -x); }

BenchSpec parse_bench_spec(const std::string& text, const std::string& base_dir,
                           std::optional<std::uint64_t> env_seed) {
  Document doc = parse_document(text);
  check_keys(doc.top, {"seed", "epsilon", "algorithms", "timeout_s", "max_updates",
                       "epsilon_exponents", "oracle", "threads", "k1", "k2",
                       "conservative_bounds", "collapse_mecs"});
  BenchSpec spec;
  spec.seed = get_count(doc.top, "seed", env_seed.value_or(kDefaultSeed));
  spec.timeout_s = get_number(doc.top, "timeout_s", spec.timeout_s);
  if (!(spec.timeout_s > 0)) throw std::runtime_error("bench spec: timeout_s must be positive");
  if (doc.top.count("max_updates")) spec.max_updates = get_count(doc.top, "max_updates", 0);
  spec.oracle = get_bool(doc.top, "oracle", false);
  spec.threads = static_cast<unsigned>(std::max<std::uint64_t>(1, get_count(doc.top, "threads", 1)));
  spec.guess.k1 = static_cast<std::uint32_t>(get_count(doc.top, "k1", spec.guess.k1));
  spec.guess.k2 = static_cast<std::uint32_t>(get_count(doc.top, "k2", spec.guess.k2));
  spec.guess.conservative_bounds = get_bool(doc.top, "conservative_bounds", false);
  spec.collapse = get_bool(doc.top, "collapse_mecs", true);

  if (auto it = doc.top.find("epsilon_exponents"); it != doc.top.end()) {
    spec.epsilons.clear();
    for (const Scalar& s : it->second.items) {
      if (!std::holds_alternative<double>(s)) spec_fail(it->second.line, "epsilon_exponents must be numbers");
      spec.epsilons.push_back(epsilon_from_exponent(std::get<double>(s)));
    }
    if (doc.top.count("epsilon")) spec_fail(it->second.line, "give either epsilon or epsilon_exponents");
  } else {
    spec.epsilons = {get_number(doc.top, "epsilon", 1e-3)};
  }
  for (double e : spec.epsilons)
    if (!(e > 0)) throw std::runtime_error("bench spec: epsilon must be positive");

  if (auto it = doc.top.find("algorithms"); it != doc.top.end()) {
    spec.algorithms.clear();
    for (const Scalar& s : it->second.items) {
      if (!std::holds_alternative<std::string>(s)) spec_fail(it->second.line, "algorithms must be strings");
      auto algo = parse_algorithm(std::get<std::string>(s));
      if (!algo) spec_fail(it->second.line, "unknown algorithm '" + std::get<std::string>(s) + "'");
      spec.algorithms.push_back(*algo);
    }
  }

  std::size_t position = 0;
  for (const Table& t : doc.instances) {
    check_keys(t, {"name", "generator", "file", "n", "p", "branch", "kind", "objective",
                   "targets", "seed"});
    BenchInstance inst;
    auto name = get_string(t, "name");
    if (!name) throw std::runtime_error("bench spec: instance without a name");
    inst.name = *name;
    if (inst.name.empty() || inst.name.find_first_of(",\n\r") != std::string::npos)
      throw std::runtime_error("bench spec: instance names must be non-empty and free of commas");
    inst.seed = get_count(t, "seed", spec.seed + position);
    auto file = get_string(t, "file");
    auto gen = get_string(t, "generator");
    if (file.has_value() == gen.has_value())
      throw std::runtime_error("bench spec: instance '" + inst.name + "' needs exactly one of file, generator");
    if (file) {
      std::filesystem::path path(*file);
      if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
      inst.model = read_model_file(path.string());
    } else if (*gen == "slow-mc") {
      inst.model = gen_slow_mc(get_count(t, "n", 12), get_number(t, "p", 0.5));
    } else if (*gen == "slow-mdp") {
      inst.model = gen_slow_mdp(get_count(t, "n", 4));
    } else if (*gen == "random") {
      RandomModelParams rp;
      rp.n = get_count(t, "n", rp.n);
      rp.branch = get_count(t, "branch", rp.branch);
      rp.num_targets = get_count(t, "targets", rp.num_targets);
      rp.seed = inst.seed;
      auto kind = get_string(t, "kind").value_or("mc");
      if (kind != "mc" && kind != "mdp") throw std::runtime_error("bench spec: kind must be mc or mdp");
      rp.kind = kind == "mc" ? ModelKind::Mc : ModelKind::Mdp;
      auto obj = get_string(t, "objective").value_or("reach");
      if (obj != "reach" && obj != "ssp") throw std::runtime_error("bench spec: objective must be reach or ssp");
      rp.objective = obj == "reach" ? ObjectiveKind::Reach : ObjectiveKind::Ssp;
      inst.model = gen_random(rp);
    } else {
      throw std::runtime_error("bench spec: unknown generator '" + *gen + "'");
    }
    spec.instances.push_back(std::move(inst));
    ++position;
  }
  return spec;
}

BenchSpec load_bench_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::optional<std::uint64_t> env_seed;
  if (const char* env = std::getenv("GUESSVI_SEED"); env && *env) {
    std::uint64_t v = 0;
    std::string_view sv(env);
    auto res = std::from_chars(sv.data(), sv.data() + sv.size(), v);
    if (res.ec != std::errc() || res.ptr != sv.data() + sv.size())
      throw std::runtime_error("GUESSVI_SEED must be a non-negative integer");
    env_seed = v;
  }
  auto base = std::filesystem::path(path).parent_path();
  return parse_bench_spec(buf.str(), base.empty() ? "." : base.string(), env_seed);
}

std::vector<BenchRow> run_bench(const BenchSpec& spec) {
  // Oracle values, when requested and affordable.
  std::vector<std::optional<ValueVector>> reference(spec.instances.size());
  if (spec.oracle) {
    for (std::size_t i = 0; i < spec.instances.size(); ++i) {
      const Model& m = spec.instances[i].model;
      if (m.num_states() > 500) continue;
      try {
        reference[i] = m.kind() == ModelKind::Mc ? exact_mc_value(m).values : exact_mdp_value(m).values;
      } catch (const std::exception&) {
      }
    }
  }

  struct Cell {
    std::size_t instance, algorithm, epsilon;
  };
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < spec.instances.size(); ++i)
    for (std::size_t a = 0; a < spec.algorithms.size(); ++a)
      for (std::size_t e = 0; e < spec.epsilons.size(); ++e) cells.push_back({i, a, e});

  std::vector<BenchRow> rows(cells.size());
  auto run_cell = [&](std::size_t c) {
    const Cell& cell = cells[c];
    const BenchInstance& inst = spec.instances[cell.instance];
    BenchRow& row = rows[c];
    row.instance = inst.name;
    row.algorithm = to_string(spec.algorithms[cell.algorithm]);
    row.epsilon_index = cell.epsilon;
    row.epsilon = spec.epsilons[cell.epsilon];
    row.seed = inst.seed;
    SolveOptions opt;
    opt.algorithm = spec.algorithms[cell.algorithm];
    opt.epsilon = row.epsilon;
    opt.guess = spec.guess;
    opt.collapse = spec.collapse;
    if (spec.max_updates) opt.limits.max_updates = *spec.max_updates;
    const auto start = std::chrono::steady_clock::now();
    opt.limits.deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                      std::chrono::duration<double>(spec.timeout_s));
    try {
      SolveReport rep = solve(inst.model, opt);
      row.bellman_updates = rep.bellman_updates;
      row.final_width = width(rep.bounds);
      row.converged = rep.converged;
      row.timed_out = !rep.converged && opt.limits.exhausted(rep.bellman_updates);
      if (reference[cell.instance]) {
        const ValueVector& ref = *reference[cell.instance];
        ValueVector mid = midpoint(rep.bounds);
        double err = 0.0;
        for (std::size_t s = 0; s < ref.size(); ++s) err = std::max(err, std::abs(mid[s] - ref[s]));
        row.oracle_error = err;
      }
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    row.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(spec.threads, static_cast<unsigned>(cells.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < cells.size(); c = next++) run_cell(c);
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  std::stable_sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
    if (a.instance != b.instance) return a.instance < b.instance;
    if (a.algorithm != b.algorithm) return a.algorithm < b.algorithm;
    return a.epsilon_index < b.epsilon_index;
  });
  return rows;
}

void write_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << kCsvHeader << '\n';
  for (const BenchRow& r : rows) {
    std::string algo = r.algorithm;
    if (!r.error.empty()) algo += "+error";
    else if (r.timed_out) algo += "+timeout";
    else if (!r.converged) algo += "+stalled";
    out << r.instance << ',' << algo << ',' << format_double(r.epsilon) << ',' << r.bellman_updates
        << ',' << format_fixed(r.wall_time_s, 6) << ',' << format_double(r.final_width) << ','
        << (r.oracle_error ? format_double(*r.oracle_error) : std::string("NA")) << ',' << r.seed
        << '\n';
  }
}

}  // namespace guessvi
