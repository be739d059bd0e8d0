#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cbpp/errors.hpp"

namespace cbpp {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Variable {
  std::string name;
  double lb = 0.0;
  double ub = kInf;
  bool integer = false;
};

enum class Relation { Le, Eq, Ge };

struct LinTerm {
  int var = -1;
  double coeff = 0.0;
};

struct Constraint {
  std::string name;
  std::vector<LinTerm> terms;
  Relation rel = Relation::Eq;
  double rhs = 0.0;
};

// Solver-agnostic MILP in minimize form. For the packing formulations,
// arc_vars[k] is the column of graph arc k and z_index the bin-count column.
struct MilpModel {
  std::vector<Variable> variables;
  std::vector<Constraint> constraints;
  std::vector<LinTerm> objective;  // minimized
  int z_index = -1;
  std::vector<int> arc_vars;

  int add_variable(const std::string& name, double lb, double ub, bool integer) {
    variables.push_back({name, lb, ub, integer});
    return static_cast<int>(variables.size()) - 1;
  }

  int num_variables() const { return static_cast<int>(variables.size()); }
  int num_constraints() const { return static_cast<int>(constraints.size()); }
};

inline double eval_terms(const std::vector<LinTerm>& terms, const std::vector<double>& x) {
  double v = 0.0;
  for (const LinTerm& t : terms) v += t.coeff * x[static_cast<std::size_t>(t.var)];
  return v;
}

inline double eval_objective(const MilpModel& model, const std::vector<double>& x) {
  return eval_terms(model.objective, x);
}

// Checks a point against bounds, rows, and (when int_tol >= 0) integrality.
// Returns a description of the first violation, or nullopt when clean.
inline std::optional<std::string> check_assignment(const MilpModel& model,
                                                   const std::vector<double>& x,
                                                   double feas_tol, double int_tol = -1.0) {
  if (x.size() != model.variables.size())
    return "assignment has " + std::to_string(x.size()) + " values, model has " +
           std::to_string(model.variables.size()) + " variables";
  for (int j = 0; j < model.num_variables(); ++j) {
    const Variable& v = model.variables[static_cast<std::size_t>(j)];
    double val = x[static_cast<std::size_t>(j)];
    if (val < v.lb - feas_tol || val > v.ub + feas_tol)
      return "variable " + v.name + " = " + std::to_string(val) + " outside [" +
             std::to_string(v.lb) + ", " + std::to_string(v.ub) + "]";
    if (int_tol >= 0.0 && v.integer && std::fabs(val - std::round(val)) > int_tol)
      return "variable " + v.name + " = " + std::to_string(val) + " is not integral";
  }
  for (const Constraint& c : model.constraints) {
    double lhs = eval_terms(c.terms, x);
    bool ok = c.rel == Relation::Le   ? lhs <= c.rhs + feas_tol
              : c.rel == Relation::Ge ? lhs >= c.rhs - feas_tol
                                      : std::fabs(lhs - c.rhs) <= feas_tol;
    if (!ok)
      return "row " + c.name + ": lhs " + std::to_string(lhs) +
             (c.rel == Relation::Le ? " <= " : c.rel == Relation::Ge ? " >= " : " = ") +
             std::to_string(c.rhs) + " violated";
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// LP-format emission. Deterministic: identical models give identical bytes.
// Sections: Minimize / Subject To / Bounds / Generals / End. Coefficients are
// printed with up to 17 significant digits.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline bool lp_name_ok(const std::string& name) {
  if (name.empty() || name.size() > 255) return false;
  if (std::isdigit(static_cast<unsigned char>(name[0])) || name[0] == '.') return false;
  for (char c : name)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')) return false;
  return true;
}

inline void append_terms(std::ostringstream& out, const std::vector<LinTerm>& terms,
                         const MilpModel& model) {
  for (const LinTerm& t : terms) {
    const std::string& name = model.variables[static_cast<std::size_t>(t.var)].name;
    double c = t.coeff;
    out << (c < 0 ? " - " : " + ");
    double a = std::fabs(c);
    if (a != 1.0) out << fmt_num(a) << " ";
    out << name;
  }
}

}  // namespace detail

inline std::string emit_lp(const MilpModel& model) {
  std::unordered_set<std::string> names;
  for (const Variable& v : model.variables) {
    if (!detail::lp_name_ok(v.name)) throw EmitError("illegal variable name: '" + v.name + "'");
    if (!names.insert(v.name).second)
      throw EmitError("variable name collision: '" + v.name + "'");
  }
  std::unordered_set<std::string> row_names;
  for (const Constraint& c : model.constraints) {
    if (!detail::lp_name_ok(c.name)) throw EmitError("illegal row name: '" + c.name + "'");
    if (!row_names.insert(c.name).second)
      throw EmitError("row name collision: '" + c.name + "'");
  }

  std::ostringstream out;
  out << "Minimize\n obj:";
  detail::append_terms(out, model.objective, model);
  out << "\nSubject To\n";
  std::vector<char> seen(static_cast<std::size_t>(model.num_variables()), 0);
  for (const Constraint& c : model.constraints) {
    for (const LinTerm& t : c.terms) {
      if (t.var < 0 || t.var >= model.num_variables())
        throw EmitError("row " + c.name + " references unknown variable");
      if (seen[static_cast<std::size_t>(t.var)])
        throw EmitError("row " + c.name + " repeats variable " +
                        model.variables[static_cast<std::size_t>(t.var)].name);
      seen[static_cast<std::size_t>(t.var)] = 1;
    }
    for (const LinTerm& t : c.terms) seen[static_cast<std::size_t>(t.var)] = 0;
    out << " " << c.name << ":";
    detail::append_terms(out, c.terms, model);
    out << (c.rel == Relation::Le ? " <= " : c.rel == Relation::Ge ? " >= " : " = ")
        << detail::fmt_num(c.rhs) << "\n";
  }
  out << "Bounds\n";
  for (const Variable& v : model.variables) {
    bool lb_inf = std::isinf(v.lb), ub_inf = std::isinf(v.ub);
    if (!lb_inf && !ub_inf && v.lb == v.ub)
      out << " " << v.name << " = " << detail::fmt_num(v.lb) << "\n";
    else if (!lb_inf && !ub_inf)
      out << " " << detail::fmt_num(v.lb) << " <= " << v.name << " <= " << detail::fmt_num(v.ub)
          << "\n";
    else if (!lb_inf)
      out << " " << v.name << " >= " << detail::fmt_num(v.lb) << "\n";
    else if (!ub_inf)
      out << " " << v.name << " <= " << detail::fmt_num(v.ub) << "\n";
    else
      out << " " << v.name << " free\n";
  }
  out << "Generals\n";
  for (const Variable& v : model.variables)
    if (v.integer) out << " " << v.name << "\n";
  out << "End\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// LP-format reader for the subset above (plus free-form whitespace). Enough
// to round-trip our own emission and to accept hand-written toy models.
// ---------------------------------------------------------------------------

namespace detail {

struct LpTokenizer {
  std::vector<std::string> tokens;
  std::size_t pos = 0;

  explicit LpTokenizer(const std::string& text) {
    std::string cur;
    auto flush = [&]() {
      if (!cur.empty()) {
        tokens.push_back(cur);
        cur.clear();
      }
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
      char ch = text[i];
      if (ch == '\\') {  // LP comment: to end of line
        flush();
        while (i < text.size() && text[i] != '\n') ++i;
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(ch))) {
        flush();
        continue;
      }
      if (ch == ':' || ch == '+' || ch == '-') {
        flush();
        tokens.emplace_back(1, ch);
        continue;
      }
      if (ch == '<' || ch == '>' || ch == '=') {
        flush();
        std::string rel(1, ch);
        if (ch != '=' && i + 1 < text.size() && text[i + 1] == '=') {
          rel += '=';
          ++i;
        }
        tokens.push_back(rel);
        continue;
      }
      cur += ch;
    }
    flush();
  }

  bool done() const { return pos >= tokens.size(); }
  const std::string& peek() const {
    static const std::string kEmpty;
    return done() ? kEmpty : tokens[pos];
  }
  std::string take() {
    if (done()) throw LpParseError("unexpected end of LP text");
    return tokens[pos++];
  }
};

inline std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

inline bool is_number_token(const std::string& t) {
  if (t.empty()) return false;
  char c = t[0];
  return std::isdigit(static_cast<unsigned char>(c)) || c == '.';
}

inline double to_number(const std::string& t) {
  try {
    std::size_t used = 0;
    double v = std::stod(t, &used);
    if (used != t.size()) throw LpParseError("bad number: '" + t + "'");
    return v;
  } catch (const std::exception&) {
    throw LpParseError("bad number: '" + t + "'");
  }
}

// Section keyword lookahead, consuming multi-word forms ("subject to").
inline int match_section(LpTokenizer& tz) {
  if (tz.done()) return -1;
  std::string w = lower(tz.peek());
  if (w == "minimize" || w == "min") return 0;
  if (w == "maximize" || w == "max") return 6;
  if (w == "subject" || w == "st" || w == "s.t." || w == "such") return 1;
  if (w == "bounds" || w == "bound") return 2;
  if (w == "generals" || w == "general" || w == "integers" || w == "integer") return 3;
  if (w == "binaries" || w == "binary" || w == "bin") return 4;
  if (w == "end") return 5;
  return -1;
}

}  // namespace detail

inline MilpModel parse_lp(const std::string& text) {
  detail::LpTokenizer tz(text);
  MilpModel model;
  std::unordered_map<std::string, int> var_of;
  auto var_id = [&](const std::string& name) {
    auto it = var_of.find(name);
    if (it != var_of.end()) return it->second;
    int id = model.add_variable(name, 0.0, kInf, false);
    var_of[name] = id;
    return id;
  };

  // terms until a relation / section keyword; returns the parsed linear part
  auto parse_expr = [&](detail::LpTokenizer& t) {
    std::vector<LinTerm> terms;
    double sign = 1.0;
    bool have_sign = false;
    while (!t.done()) {
      if (!have_sign && detail::match_section(t) >= 0) break;
      std::string tok = t.peek();
      if (tok == "<=" || tok == ">=" || tok == "=" || tok == "<" || tok == ">") break;
      t.take();
      if (tok == "+") {
        sign = 1.0;
        have_sign = true;
        continue;
      }
      if (tok == "-") {
        sign = have_sign ? -sign : -1.0;
        have_sign = true;
        continue;
      }
      double coeff = sign;
      if (detail::is_number_token(tok)) {
        coeff = sign * detail::to_number(tok);
        if (t.done() || detail::match_section(t) >= 0) {
          // dangling constant (e.g. "obj: 0"); ignore zero, reject the rest
          if (coeff != 0.0) throw LpParseError("constant term in expression");
          sign = 1.0;
          have_sign = false;
          continue;
        }
        std::string nxt = t.peek();
        if (nxt == "<=" || nxt == ">=" || nxt == "=" || nxt == "<" || nxt == ">") {
          if (coeff != 0.0) throw LpParseError("constant term in expression");
          sign = 1.0;
          have_sign = false;
          continue;
        }
        tok = t.take();
      }
      terms.push_back({var_id(tok), coeff});
      sign = 1.0;
      have_sign = false;
    }
    return terms;
  };

  int section = detail::match_section(tz);
  if (section != 0) {
    if (section == 6) throw LpParseError("only Minimize models are supported");
    throw LpParseError("LP text must start with Minimize");
  }
  tz.take();

  // objective: optional "name:" then expression
  if (!tz.done()) {
    std::size_t save = tz.pos;
    std::string maybe = tz.take();
    if (!tz.done() && tz.peek() == ":")
      tz.take();  // drop the label
    else
      tz.pos = save;
  }
  model.objective = parse_expr(tz);

  if (detail::match_section(tz) != 1) throw LpParseError("missing Subject To section");
  tz.take();
  if (detail::lower(tz.peek()) == "to" || detail::lower(tz.peek()) == "that") tz.take();

  int auto_row = 0;
  while (!tz.done() && detail::match_section(tz) < 0) {
    std::string name;
    std::size_t save = tz.pos;
    std::string first = tz.take();
    if (!tz.done() && tz.peek() == ":") {
      tz.take();
      name = first;
    } else {
      tz.pos = save;
      name = "r" + std::to_string(auto_row);
    }
    ++auto_row;
    Constraint c;
    c.name = name;
    c.terms = parse_expr(tz);
    std::string rel = tz.take();
    if (rel == "<=" || rel == "<")
      c.rel = Relation::Le;
    else if (rel == ">=" || rel == ">")
      c.rel = Relation::Ge;
    else if (rel == "=")
      c.rel = Relation::Eq;
    else
      throw LpParseError("expected relation in row " + name + ", got '" + rel + "'");
    double sign = 1.0;
    std::string num = tz.take();
    if (num == "-") {
      sign = -1.0;
      num = tz.take();
    } else if (num == "+") {
      num = tz.take();
    }
    c.rhs = sign * detail::to_number(num);
    model.constraints.push_back(std::move(c));
  }

  while (!tz.done()) {
    int sec = detail::match_section(tz);
    if (sec == 5) break;
    if (sec == 2) {
      tz.take();
      while (!tz.done() && detail::match_section(tz) < 0) {
        // forms: "a <= x <= b" | "x <= b" | "x >= a" | "x = a" | "x free"
        std::string t0 = tz.take();
        double lead_sign = 1.0;
        if (t0 == "-") {
          lead_sign = -1.0;
          t0 = tz.take();
        }
        if (detail::is_number_token(t0)) {
          double lo = lead_sign * detail::to_number(t0);
          std::string rel = tz.take();
          if (rel != "<=" && rel != "<") throw LpParseError("bad bounds line near '" + t0 + "'");
          int v = var_id(tz.take());
          model.variables[static_cast<std::size_t>(v)].lb = lo;
          if (!tz.done() && (tz.peek() == "<=" || tz.peek() == "<")) {
            tz.take();
            std::string ub_tok = tz.take();
            double s2 = 1.0;
            if (ub_tok == "-") {
              s2 = -1.0;
              ub_tok = tz.take();
            }
            model.variables[static_cast<std::size_t>(v)].ub = s2 * detail::to_number(ub_tok);
          }
        } else {
          int v = var_id(t0);
          if (detail::lower(tz.peek()) == "free") {
            tz.take();
            model.variables[static_cast<std::size_t>(v)].lb = -kInf;
            model.variables[static_cast<std::size_t>(v)].ub = kInf;
            continue;
          }
          std::string rel = tz.take();
          std::string val_tok = tz.take();
          double s2 = 1.0;
          if (val_tok == "-") {
            s2 = -1.0;
            val_tok = tz.take();
          }
          double val = s2 * detail::to_number(val_tok);
          if (rel == "<=" || rel == "<")
            model.variables[static_cast<std::size_t>(v)].ub = val;
          else if (rel == ">=" || rel == ">")
            model.variables[static_cast<std::size_t>(v)].lb = val;
          else if (rel == "=")
            model.variables[static_cast<std::size_t>(v)].lb =
                model.variables[static_cast<std::size_t>(v)].ub = val;
          else
            throw LpParseError("bad bounds relation '" + rel + "'");
        }
      }
    } else if (sec == 3) {
      tz.take();
      while (!tz.done() && detail::match_section(tz) < 0)
        model.variables[static_cast<std::size_t>(var_id(tz.take()))].integer = true;
    } else if (sec == 4) {
      tz.take();
      while (!tz.done() && detail::match_section(tz) < 0) {
        int v = var_id(tz.take());
        model.variables[static_cast<std::size_t>(v)].integer = true;
        model.variables[static_cast<std::size_t>(v)].lb =
            std::max(model.variables[static_cast<std::size_t>(v)].lb, 0.0);
        model.variables[static_cast<std::size_t>(v)].ub =
            std::min(model.variables[static_cast<std::size_t>(v)].ub, 1.0);
      }
    } else {
      throw LpParseError("unexpected token '" + tz.peek() + "'");
    }
  }

  for (int j = 0; j < model.num_variables(); ++j)
    if (model.variables[static_cast<std::size_t>(j)].name == "z") model.z_index = j;
  return model;
}

}  // namespace cbpp
