#include "guessvi/io.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

namespace guessvi {

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

struct Parser {
  std::size_t line = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line, msg); }

  double number(std::string_view tok) const {
    double v = 0.0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
      fail("bad number '" + std::string(tok) + "'");
    return v;
  }

  std::size_t index(std::string_view tok) const {
    std::size_t v = 0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
      fail("bad integer '" + std::string(tok) + "'");
    return v;
  }
};

struct PendingCost {
  StateId state;
  double cost;
  std::size_t line;
};

}  // namespace

Model parse_model(std::string_view text) {
  Parser p;
  std::optional<ModelKind> kind;
  std::optional<ObjectiveKind> objective;
  std::optional<std::size_t> num_states;
  std::optional<ModelBuilder> builder;
  std::vector<std::optional<StateKind>> kinds;
  std::vector<std::uint8_t> is_target;
  std::vector<std::uint8_t> has_cost;
  std::vector<PendingCost> costs;

  auto state = [&](std::string_view tok) -> StateId {
    std::size_t s = p.index(tok);
    if (s >= *num_states) p.fail("state " + std::string(tok) + " out of range");
    return static_cast<StateId>(s);
  };

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    ++p.line;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    auto tok = split(raw);
    if (tok.empty()) continue;
    const std::string_view key = tok[0];
    auto arity = [&](std::size_t lo, std::size_t hi) {
      if (tok.size() < lo + 1 || tok.size() > hi + 1)
        p.fail(std::string(key) + ": wrong number of fields");
    };

    if (key == "MODEL" || key == "OBJECTIVE" || key == "STATES") {
      arity(1, 1);
      if (builder) p.fail(std::string(key) + " after the model body started");
      if (key == "MODEL") {
        if (kind) p.fail("duplicate MODEL");
        if (tok[1] == "mc") kind = ModelKind::Mc;
        else if (tok[1] == "mdp") kind = ModelKind::Mdp;
        else p.fail("MODEL must be mc or mdp");
      } else if (key == "OBJECTIVE") {
        if (objective) p.fail("duplicate OBJECTIVE");
        if (tok[1] == "reach") objective = ObjectiveKind::Reach;
        else if (tok[1] == "ssp") objective = ObjectiveKind::Ssp;
        else p.fail("OBJECTIVE must be reach or ssp");
      } else {
        if (num_states) p.fail("duplicate STATES");
        num_states = p.index(tok[1]);
        if (*num_states == 0) p.fail("STATES must be positive");
      }
      continue;
    }

    if (!builder) {
      if (!kind || !objective || !num_states) p.fail("MODEL, OBJECTIVE and STATES must come first");
      builder.emplace(*kind, *objective, *num_states);
      kinds.assign(*num_states, std::nullopt);
      is_target.assign(*num_states, 0);
      has_cost.assign(*num_states, 0);
    }

    if (key == "KIND") {
      arity(2, 2);
      StateId s = state(tok[1]);
      if (kinds[s]) p.fail("duplicate KIND for state " + std::to_string(s));
      if (tok[2] == "d") kinds[s] = StateKind::Decision;
      else if (tok[2] == "p") kinds[s] = StateKind::Probabilistic;
      else p.fail("KIND must be d or p");
      builder->set_kind(s, *kinds[s]);
    } else if (key == "EDGE") {
      arity(2, 3);
      StateId from = state(tok[1]);
      StateId to = state(tok[2]);
      if (!kinds[from]) p.fail("EDGE from state " + std::to_string(from) + " before its KIND");
      double prob = 0.0;
      if (*kinds[from] == StateKind::Probabilistic) {
        if (tok.size() != 4) p.fail("missing probability on probabilistic edge");
        prob = p.number(tok[3]);
      } else if (tok.size() == 4) {
        p.fail("prob on decision edge");
      }
      try {
        builder->add_edge(from, to, prob);
      } catch (const ModelError& e) {
        p.fail(e.what());
      }
    } else if (key == "TARGET") {
      arity(2, 2);
      StateId s = state(tok[1]);
      if (is_target[s]) p.fail("duplicate TARGET for state " + std::to_string(s));
      if (has_cost[s]) p.fail("TARGET on a state with a COST");
      is_target[s] = 1;
      builder->set_target(s, p.number(tok[2]));
    } else if (key == "COST") {
      arity(2, 2);
      if (*objective != ObjectiveKind::Ssp) p.fail("COST requires OBJECTIVE ssp");
      StateId s = state(tok[1]);
      if (has_cost[s]) p.fail("duplicate COST for state " + std::to_string(s));
      if (is_target[s]) p.fail("COST on a target; use the TARGET weight");
      has_cost[s] = 1;
      costs.push_back({s, p.number(tok[2]), p.line});
    } else {
      p.fail("unknown directive '" + std::string(key) + "'");
    }
  }

  if (!builder) {
    if (!kind || !objective || !num_states) p.fail("MODEL, OBJECTIVE and STATES are required");
    builder.emplace(*kind, *objective, *num_states);
    kinds.assign(*num_states, std::nullopt);
  }
  for (std::size_t s = 0; s < kinds.size(); ++s)
    if (!kinds[s]) p.fail("missing KIND for state " + std::to_string(s));
  for (const PendingCost& c : costs) {
    if (is_target[c.state]) {
      p.line = c.line;
      p.fail("COST on a target; use the TARGET weight");
    }
    builder->set_cost(c.state, c.cost);
  }
  return builder->build();
}

std::string serialize_model(const Model& model) {
  std::ostringstream out;
  const std::size_t n = model.num_states();
  out << "MODEL " << (model.kind() == ModelKind::Mc ? "mc" : "mdp") << '\n';
  out << "OBJECTIVE " << (model.objective().kind() == ObjectiveKind::Reach ? "reach" : "ssp")
      << '\n';
  out << "STATES " << n << '\n';
  for (StateId s = 0; s < n; ++s) out << "KIND " << s << (model.is_decision(s) ? " d" : " p") << '\n';
  for (StateId s = 0; s < n; ++s) {
    for (const Transition& t : model.successors(s)) {
      out << "EDGE " << s << ' ' << t.target;
      if (!model.is_decision(s)) out << ' ' << format_double(t.probability);
      out << '\n';
    }
  }
  for (StateId t : model.objective().targets())
    out << "TARGET " << t << ' ' << format_double(model.weight(t)) << '\n';
  if (model.objective().kind() == ObjectiveKind::Ssp)
    for (StateId s = 0; s < n; ++s)
      if (!model.is_target(s)) out << "COST " << s << ' ' << format_double(model.weight(s)) << '\n';
  return out.str();
}

Model read_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

void write_model_file(const std::string& path, const Model& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << serialize_model(model);
}

}  // namespace guessvi
