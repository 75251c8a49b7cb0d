#include "lexctrl/scenario_config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <variant>

namespace lexctrl {
namespace {

struct Value;
using ValueList = std::vector<Value>;
using ValueTable = std::vector<std::pair<std::string, Value>>;

struct Value {
  std::variant<double, bool, std::string, ValueList, ValueTable> data;

  bool is_number() const { return std::holds_alternative<double>(data); }
  bool is_bool() const { return std::holds_alternative<bool>(data); }
  bool is_ident() const { return std::holds_alternative<std::string>(data); }
  bool is_list() const { return std::holds_alternative<ValueList>(data); }
  bool is_table() const { return std::holds_alternative<ValueTable>(data); }
};

struct Entry {
  std::string section;
  std::string key;
  Value value;
};

class ValueParser {
 public:
  explicit ValueParser(const std::string& text) : text_(text) {}

  Value parse() {
    Value v = parse_value();
    skip_ws();
    if (pos_ != text_.size()) throw ConfigError("trailing characters after value: " + text_);
    return v;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    if (pos_ >= text_.size()) throw ConfigError("unexpected end of value: " + text_);
    return text_[pos_];
  }

  void expect(char c) {
    if (peek() != c) throw ConfigError(std::string("expected '") + c + "' in value: " + text_);
    ++pos_;
  }

  Value parse_value() {
    const char c = peek();
    if (c == '[') return parse_list();
    if (c == '{') return parse_table();
    if (c == '-' || c == '+' || c == '.' || std::isdigit(static_cast<unsigned char>(c)))
      return parse_number();
    return parse_ident();
  }

  Value parse_list() {
    expect('[');
    ValueList list;
    if (peek() == ']') {
      ++pos_;
      return Value{list};
    }
    while (true) {
      list.push_back(parse_value());
      const char c = peek();
      ++pos_;
      if (c == ']') break;
      if (c != ',') throw ConfigError("expected ',' or ']' in list: " + text_);
    }
    return Value{list};
  }

  Value parse_table() {
    expect('{');
    ValueTable table;
    if (peek() == '}') {
      ++pos_;
      return Value{table};
    }
    while (true) {
      const std::string key = parse_key();
      skip_ws();
      expect('=');
      table.emplace_back(key, parse_value());
      const char c = peek();
      ++pos_;
      if (c == '}') break;
      if (c != ',') throw ConfigError("expected ',' or '}' in table: " + text_);
    }
    return Value{table};
  }

  std::string parse_key() {
    skip_ws();
    size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (pos_ == start) throw ConfigError("expected key in value: " + text_);
    return text_.substr(start, pos_ - start);
  }

  Value parse_number() {
    size_t consumed = 0;
    double v = 0.0;
    try {
      v = std::stod(text_.substr(pos_), &consumed);
    } catch (const std::exception&) {
      throw ConfigError("bad number in value: " + text_);
    }
    pos_ += consumed;
    return Value{v};
  }

  Value parse_ident() {
    const std::string word = parse_key();
    if (word == "true") return Value{true};
    if (word == "false") return Value{false};
    return Value{word};
  }

  const std::string& text_;
  size_t pos_ = 0;
};

std::vector<Entry> parse_document(const std::string& text) {
  std::vector<Entry> entries;
  std::istringstream is(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    size_t begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    size_t end = line.find_last_not_of(" \t\r");
    line = line.substr(begin, end - begin + 1);

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("bad section header at line " + std::to_string(lineno));
      section = line.substr(1, line.size() - 2);
      if (section != "chain" && section != "tasks" && section != "run")
        throw ConfigError("unknown section [" + section + "]");
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value at line " + std::to_string(lineno));
    if (section.empty()) throw ConfigError("key outside any section at line " + std::to_string(lineno));
    std::string key = line.substr(0, eq);
    key.erase(key.find_last_not_of(" \t") + 1);
    entries.push_back({section, key, ValueParser(line.substr(eq + 1)).parse()});
  }
  return entries;
}

double as_number(const Value& v, const std::string& what) {
  if (!v.is_number()) throw ConfigError(what + ": expected a number");
  return std::get<double>(v.data);
}

bool as_bool(const Value& v, const std::string& what) {
  if (!v.is_bool()) throw ConfigError(what + ": expected true/false");
  return std::get<bool>(v.data);
}

std::string as_ident(const Value& v, const std::string& what) {
  if (!v.is_ident()) throw ConfigError(what + ": expected an identifier");
  return std::get<std::string>(v.data);
}

Eigen::VectorXd as_vector(const Value& v, const std::string& what) {
  if (!v.is_list()) throw ConfigError(what + ": expected a list of numbers");
  const ValueList& list = std::get<ValueList>(v.data);
  Eigen::VectorXd out(list.size());
  for (size_t i = 0; i < list.size(); ++i) out[i] = as_number(list[i], what);
  return out;
}

TaskKind parse_kind(const std::string& word) {
  if (word == "EOM") return TaskKind::kEom;
  if (word == "TIP_POSITION") return TaskKind::kTipPosition;
  if (word == "JOINT_TARGET") return TaskKind::kJointTarget;
  if (word == "VELOCITY_REG") return TaskKind::kVelocityReg;
  if (word == "TORQUE_REG") return TaskKind::kTorqueReg;
  if (word == "TRUST_REGION") return TaskKind::kTrustRegion;
  if (word == "TORQUE_LIMIT") return TaskKind::kTorqueLimit;
  if (word == "COM_BOX") return TaskKind::kComBox;
  throw ConfigError("unknown task kind: " + word);
}

struct ParsedTask {
  TaskSpec spec;
  bool has_kv = false;
};

ParsedTask parse_task(const Value& v) {
  if (!v.is_table()) throw ConfigError("task: expected an inline table");
  ParsedTask out;
  bool has_kind = false;
  for (const auto& [key, val] : std::get<ValueTable>(v.data)) {
    if (key == "level")
      out.spec.level = static_cast<int>(as_number(val, "task.level"));
    else if (key == "kind") {
      out.spec.kind = parse_kind(as_ident(val, "task.kind"));
      has_kind = true;
    } else if (key == "kp")
      out.spec.kp = as_number(val, "task.kp");
    else if (key == "kv") {
      out.spec.kv = as_number(val, "task.kv");
      out.has_kv = true;
    } else if (key == "target")
      out.spec.target = as_vector(val, "task.target");
    else if (key == "augmentable")
      out.spec.augmentable = as_bool(val, "task.augmentable");
    else if (key == "joint")
      out.spec.joint = static_cast<int>(as_number(val, "task.joint"));
    else if (key == "rho")
      out.spec.rho = as_number(val, "task.rho");
    else if (key == "bound")
      out.spec.bound = as_number(val, "task.bound");
    else if (key == "lower")
      out.spec.com_lower = as_number(val, "task.lower");
    else if (key == "upper")
      out.spec.com_upper = as_number(val, "task.upper");
    else
      throw ConfigError("unknown task key: " + key);
  }
  if (!has_kind) throw ConfigError("task: missing kind");
  return out;
}

}  // namespace

ConfigOverride parse_override(const std::string& spec) {
  const size_t eq = spec.find('=');
  const size_t dot = spec.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq)
    throw ConfigError("override must look like section.key=value: " + spec);
  ConfigOverride o;
  o.section = spec.substr(0, dot);
  o.key = spec.substr(dot + 1, eq - dot - 1);
  o.raw_value = spec.substr(eq + 1);
  if (o.section == "tasks") throw ConfigError("task entries cannot be overridden: " + spec);
  if (o.section != "run" && o.section != "chain")
    throw ConfigError("override section must be run or chain: " + spec);
  return o;
}

Scenario load_scenario_text(const std::string& text, const std::string& name,
                            const std::vector<ConfigOverride>& overrides) {
  std::vector<Entry> entries = parse_document(text);
  for (const ConfigOverride& o : overrides) {
    bool replaced = false;
    for (Entry& e : entries) {
      if (e.section == o.section && e.key == o.key) {
        e.value = ValueParser(o.raw_value).parse();
        replaced = true;
      }
    }
    if (!replaced) entries.push_back({o.section, o.key, ValueParser(o.raw_value).parse()});
  }

  std::vector<Link> links;
  Eigen::Vector2d gravity(0.0, -9.81);
  std::vector<ParsedTask> tasks;
  double dt = 0.005, duration = 10.0, mu = 0.1, eps = 1e-8, nu_scale = 1e-12;
  Formulation formulation = Formulation::kVel;
  Method method = Method::kGaussNewton;
  unsigned seed = 0;
  std::optional<Eigen::VectorXd> q0, qd0;
  std::optional<GainRule> gain_rule;

  for (const Entry& e : entries) {
    if (e.section == "chain") {
      if (e.key == "links") {
        if (!e.value.is_list()) throw ConfigError("chain.links: expected a list of tables");
        for (const Value& v : std::get<ValueList>(e.value.data)) {
          if (!v.is_table()) throw ConfigError("chain.links: expected inline tables");
          Link link;
          bool has_com = false;
          for (const auto& [key, val] : std::get<ValueTable>(v.data)) {
            if (key == "length")
              link.length = as_number(val, "link.length");
            else if (key == "mass")
              link.mass = as_number(val, "link.mass");
            else if (key == "com_offset") {
              link.com_offset = as_number(val, "link.com_offset");
              has_com = true;
            } else
              throw ConfigError("unknown link key: " + key);
          }
          if (!has_com) link.com_offset = link.length;  // mass at the distal end by default
          links.push_back(link);
        }
      } else if (e.key == "gravity") {
        const Eigen::VectorXd g = as_vector(e.value, "chain.gravity");
        if (g.size() != 2) throw ConfigError("chain.gravity: expected [gx, gz]");
        gravity = g;
      } else {
        throw ConfigError("unknown chain key: " + e.key);
      }
    } else if (e.section == "tasks") {
      if (e.key != "task") throw ConfigError("unknown tasks key: " + e.key);
      tasks.push_back(parse_task(e.value));
    } else {  // run
      if (e.key == "dt")
        dt = as_number(e.value, "run.dt");
      else if (e.key == "duration")
        duration = as_number(e.value, "run.duration");
      else if (e.key == "formulation") {
        const std::string w = as_ident(e.value, "run.formulation");
        if (w == "VEL")
          formulation = Formulation::kVel;
        else if (w == "ACC")
          formulation = Formulation::kAcc;
        else
          throw ConfigError("run.formulation must be VEL or ACC");
      } else if (e.key == "method") {
        const std::string w = as_ident(e.value, "run.method");
        if (w == "GN")
          method = Method::kGaussNewton;
        else if (w == "NEWTON_AH")
          method = Method::kNewtonAH;
        else if (w == "LM")
          method = Method::kLm;
        else
          throw ConfigError("run.method must be GN, NEWTON_AH or LM");
      } else if (e.key == "mu")
        mu = as_number(e.value, "run.mu");
      else if (e.key == "seed")
        seed = static_cast<unsigned>(as_number(e.value, "run.seed"));
      else if (e.key == "q0")
        q0 = as_vector(e.value, "run.q0");
      else if (e.key == "qd0")
        qd0 = as_vector(e.value, "run.qd0");
      else if (e.key == "eps")
        eps = as_number(e.value, "run.eps");
      else if (e.key == "nu_scale")
        nu_scale = as_number(e.value, "run.nu_scale");
      else if (e.key == "gain_rule") {
        const std::string w = as_ident(e.value, "run.gain_rule");
        if (w == "KV_KP")
          gain_rule = GainRule::kKvOfKp;
        else if (w == "KV_KP_MU")
          gain_rule = GainRule::kKvOfKpMu;
        else
          throw ConfigError("run.gain_rule must be KV_KP or KV_KP_MU");
      } else
        throw ConfigError("unknown run key: " + e.key);
    }
  }

  if (links.empty()) throw ConfigError("config: [chain] links missing");
  if (tasks.empty()) throw ConfigError("config: [tasks] empty");

  Scenario s{.name = name, .chain = PlanarChain(links, gravity)};
  s.dt = dt;
  s.duration = duration;
  s.formulation = formulation;
  s.method = method;
  s.mu = mu;
  s.eps = eps;
  s.nu_scale = nu_scale;
  s.seed = seed;
  const int n = s.chain.dof();
  s.q0 = q0.value_or(Eigen::VectorXd::Zero(n));
  s.qd0 = qd0.value_or(Eigen::VectorXd::Zero(n));
  for (ParsedTask& t : tasks) {
    if (!t.has_kv && t.spec.kp > 0.0) {
      const GainRule rule = gain_rule.value_or(GainRule::kKvOfKp);
      t.spec.kv = rule == GainRule::kKvOfKp ? 2.0 * std::sqrt(t.spec.kp)
                                            : 2.0 * std::sqrt((1.0 + mu * mu) * t.spec.kp);
    }
    s.tasks.push_back(t.spec);
  }
  s.validate();
  return s;
}

Scenario load_scenario_file(const std::string& path, const std::vector<ConfigOverride>& overrides) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  std::string name = path;
  const size_t slash = name.find_last_of('/');
  if (slash != std::string::npos) name = name.substr(slash + 1);
  const size_t ext = name.rfind(".cfg");
  if (ext != std::string::npos) name = name.substr(0, ext);
  return load_scenario_text(buf.str(), name, overrides);
}

}  // namespace lexctrl
