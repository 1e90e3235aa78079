#include "kirigami/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kirigami {

const char* case_name(CaseKind k) {
  switch (k) {
    case CaseKind::auxetic: return "auxetic";
    case CaseKind::non_auxetic: return "non_auxetic";
    case CaseKind::mixed: return "mixed";
    case CaseKind::custom: return "custom";
  }
  return "?";
}

const char* solver_name(SolverKind s) {
  return s == SolverKind::newton ? "newton" : "picard";
}

void apply_preset(RunConfig& cfg, CaseKind kind) {
  cfg.case_kind = kind;
  switch (kind) {
    case CaseKind::auxetic:
      cfg.alpha = -0.9;
      cfg.beta = 0.9;
      cfg.epsilon = 0.0;
      cfg.r_tol = 1e-8;
      break;
    case CaseKind::non_auxetic:
      cfg.alpha = -0.9;
      cfg.beta = 0.0;
      cfg.epsilon = 0.5;
      cfg.r_tol = 1e-6;
      break;
    case CaseKind::mixed:
      cfg.alpha = -1.6;
      cfg.beta = 0.4;
      cfg.epsilon = 0.071;
      cfg.r_tol = 1e-6;
      // mu1 = cos + 1.6 sin has a zero at -atan(1/1.6) = -0.5586, inside
      // the global default cut-off; narrow it so the bound M exists.
      cfg.xi_minus = -0.39269908169872414;  // -pi/8
      break;
    case CaseKind::custom:
      break;
  }
}

namespace {

double parse_real(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  double v;
  if (!(in >> v)) throw std::invalid_argument("value of '" + key + "' is not a number: " + value);
  return v;
}

int parse_int(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  int v;
  if (!(in >> v)) throw std::invalid_argument("value of '" + key + "' is not an integer: " + value);
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw std::invalid_argument("value of '" + key + "' is not a boolean: " + value);
}

std::vector<double> parse_real_list(const std::string& key, const std::string& value) {
  std::string s = value;
  for (char& c : s)
    if (c == ',') c = ' ';
  std::istringstream in(s);
  std::vector<double> out;
  double v;
  while (in >> v) out.push_back(v);
  if (!in.eof()) throw std::invalid_argument("value of '" + key + "' is not a list of numbers");
  return out;
}

}  // namespace

void apply_key_value(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "case") {
    if (value == "auxetic") apply_preset(cfg, CaseKind::auxetic);
    else if (value == "non_auxetic") apply_preset(cfg, CaseKind::non_auxetic);
    else if (value == "mixed") apply_preset(cfg, CaseKind::mixed);
    else if (value == "custom") apply_preset(cfg, CaseKind::custom);
    else throw std::invalid_argument("unknown case '" + value + "'");
  } else if (key == "alpha") cfg.alpha = parse_real(key, value);
  else if (key == "beta") cfg.beta = parse_real(key, value);
  else if (key == "epsilon") cfg.epsilon = parse_real(key, value);
  else if (key == "nx") cfg.nx = parse_int(key, value);
  else if (key == "ny") cfg.ny = parse_int(key, value);
  else if (key == "L") cfg.L = parse_real(key, value);
  else if (key == "xi_minus") cfg.xi_minus = parse_real(key, value);
  else if (key == "xi_plus") cfg.xi_plus = parse_real(key, value);
  else if (key == "dirichlet_constant") {
    cfg.dirichlet.kind = DirichletData::Kind::constant;
    cfg.dirichlet.value = parse_real(key, value);
  } else if (key == "dirichlet_ramp") {
    const auto vals = parse_real_list(key, value);
    if (vals.size() != 2)
      throw std::invalid_argument("'dirichlet_ramp' expects two values: <left> <right>");
    cfg.dirichlet.kind = DirichletData::Kind::ramp;
    cfg.dirichlet.left = vals[0];
    cfg.dirichlet.right = vals[1];
  } else if (key == "neumann") cfg.neumann = parse_real(key, value);
  else if (key == "r_tol") cfg.r_tol = parse_real(key, value);
  else if (key == "a_tol") cfg.a_tol = parse_real(key, value);
  else if (key == "max_iterations") cfg.max_iterations = parse_int(key, value);
  else if (key == "solver") {
    if (value == "newton") cfg.solver = SolverKind::newton;
    else if (value == "picard") cfg.solver = SolverKind::picard;
    else throw std::invalid_argument("unknown solver '" + value + "'");
  } else if (key == "quadrature_order") cfg.quadrature_order = parse_int(key, value);
  else if (key == "output_prefix") cfg.output_prefix = value;
  else if (key == "manufactured") cfg.manufactured = parse_bool(key, value);
  else if (key == "levels") cfg.levels = parse_int(key, value);
  else if (key == "epsilons") cfg.epsilons = parse_real_list(key, value);
  else throw std::invalid_argument("unknown key '" + key + "'");
}

void apply_config_text(RunConfig& cfg, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config file, line " + std::to_string(lineno) +
                                  ": expected 'key = value'");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::invalid_argument("config file, line " + std::to_string(lineno) +
                                  ": expected 'key = value'");
    try {
      apply_key_value(cfg, key, value);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config file, line " + std::to_string(lineno) + ": " +
                                  e.what());
    }
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  apply_config_text(cfg, buf.str());
}

}  // namespace kirigami
