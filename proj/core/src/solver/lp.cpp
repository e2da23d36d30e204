#include "heatlink/solver/lp.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace heatlink::solver {

std::vector<Diagnostic> validate_program(const LinearProgram& lp) {
  std::vector<Diagnostic> out;
  const int n = static_cast<int>(lp.num_variables());
  for (const Variable& v : lp.variables()) {
    if (v.lower > v.upper)
      out.push_back({"variable " + v.name, "inverted bounds: lower exceeds upper"});
    if (std::isnan(v.lower) || std::isnan(v.upper) || std::isnan(v.objective))
      out.push_back({"variable " + v.name, "NaN bound or objective coefficient"});
  }
  for (const Constraint& row : lp.constraints()) {
    for (auto [j, a] : row.terms) {
      if (j < 0 || j >= n)
        out.push_back({"constraint " + row.name,
                       "dangling reference to variable index " + std::to_string(j)});
      if (std::isnan(a))
        out.push_back({"constraint " + row.name, "NaN coefficient"});
    }
    if (std::isnan(row.rhs) || std::isinf(row.rhs))
      out.push_back({"constraint " + row.name, "non-finite right-hand side"});
  }
  return out;
}

std::vector<Diagnostic> validate_program(const MixedIntegerProgram& mip) {
  std::vector<Diagnostic> out = validate_program(mip.lp);
  const int n = static_cast<int>(mip.lp.num_variables());
  std::set<int> seen;
  for (int v : mip.integer_variables) {
    if (v < 0 || v >= n)
      out.push_back({"integrality set",
                     "references undeclared variable index " + std::to_string(v)});
    else if (!seen.insert(v).second)
      out.push_back({"integrality set",
                     "duplicate entry: " + mip.lp.variables()[v].name});
  }
  return out;
}

namespace {

// LP-format identifiers must not start with a digit or contain [],; characters.
std::string sanitise(const std::string& name) {
  std::string s;
  s.reserve(name.size());
  for (char c : name) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')
      s.push_back(c);
    else
      s.push_back('_');
  }
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) s.insert(0, "x");
  return s;
}

void write_terms(std::ostringstream& os, const LinearProgram& lp,
                 const std::vector<std::pair<int, double>>& terms) {
  bool first = true;
  for (auto [j, a] : terms) {
    if (a >= 0.0)
      os << (first ? "" : " + ") << a;
    else
      os << (first ? "- " : " - ") << -a;
    os << " " << sanitise(lp.variables()[j].name);
    first = false;
  }
  if (first) os << "0 " << sanitise(lp.variables().front().name);
}

}  // namespace

std::string to_lp_format(const LinearProgram& lp,
                         const std::vector<int>* integer_variables) {
  std::ostringstream os;
  os.precision(17);
  os << (lp.sense == Sense::Minimise ? "Minimize" : "Maximize") << "\n obj: ";
  std::vector<std::pair<int, double>> obj;
  for (int j = 0; j < static_cast<int>(lp.num_variables()); ++j)
    if (lp.variables()[j].objective != 0.0) obj.push_back({j, lp.variables()[j].objective});
  if (obj.empty() && lp.num_variables() > 0) obj.push_back({0, 0.0});
  write_terms(os, lp, obj);
  os << "\nSubject To\n";
  for (const Constraint& row : lp.constraints()) {
    os << " " << sanitise(row.name) << ": ";
    write_terms(os, lp, row.terms);
    switch (row.relation) {
      case Relation::LessEqual: os << " <= "; break;
      case Relation::Equal: os << " = "; break;
      case Relation::GreaterEqual: os << " >= "; break;
    }
    os << row.rhs << "\n";
  }
  os << "Bounds\n";
  for (const Variable& v : lp.variables()) {
    os << " ";
    if (v.lower == -kInf)
      os << "-inf";
    else
      os << v.lower;
    os << " <= " << sanitise(v.name) << " <= ";
    if (v.upper == kInf)
      os << "+inf";
    else
      os << v.upper;
    os << "\n";
  }
  if (integer_variables != nullptr && !integer_variables->empty()) {
    os << "Generals\n";
    for (int v : *integer_variables) os << " " << sanitise(lp.variables()[v].name);
    os << "\n";
  }
  os << "End\n";
  return os.str();
}

}  // namespace heatlink::solver
