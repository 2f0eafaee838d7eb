#include "modsep/signature.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace modsep {

Signature::Signature(std::initializer_list<std::string> names) : Signature(std::vector<std::string>(names)) {}

Signature::Signature(std::vector<std::string> names) : names_(std::move(names)) {
  std::sort(names_.begin(), names_.end());
  names_.erase(std::unique(names_.begin(), names_.end()), names_.end());
}

bool Signature::contains(const std::string& p) const { return std::binary_search(names_.begin(), names_.end(), p); }

int Signature::index_of(const std::string& p) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), p);
  if (it == names_.end() || *it != p) return -1;
  return static_cast<int>(it - names_.begin());
}

Signature Signature::unite(const Signature& other) const {
  std::vector<std::string> out;
  std::set_union(names_.begin(), names_.end(), other.names_.begin(), other.names_.end(), std::back_inserter(out));
  return Signature(std::move(out));
}

Signature Signature::intersect(const Signature& other) const {
  std::vector<std::string> out;
  std::set_intersection(names_.begin(), names_.end(), other.names_.begin(), other.names_.end(),
                        std::back_inserter(out));
  return Signature(std::move(out));
}

bool Signature::subset_of(const Signature& other) const {
  return std::includes(other.names_.begin(), other.names_.end(), names_.begin(), names_.end());
}

std::string Signature::to_string() const {
  std::string s = "{";
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (i) s += ' ';
    s += names_[i];
  }
  return s + "}";
}

Letter letter_of(const std::vector<std::string>& valuation, const Signature& sigma) {
  if (sigma.size() > 31) throw std::invalid_argument("signature too large for letter encoding");
  Letter c = 0;
  for (const auto& p : valuation) {
    int i = sigma.index_of(p);
    if (i >= 0) c |= Letter{1} << i;
  }
  return c;
}

std::vector<std::string> valuation_of(Letter c, const Signature& sigma) {
  std::vector<std::string> v;
  for (std::size_t i = 0; i < sigma.size(); ++i)
    if (c & (Letter{1} << i)) v.push_back(sigma[i]);
  return v;
}

Letter project_letter(Letter c, const Signature& from, const Signature& to) {
  Letter out = 0;
  for (std::size_t i = 0; i < from.size(); ++i) {
    if (!(c & (Letter{1} << i))) continue;
    int j = to.index_of(from[i]);
    if (j >= 0) out |= Letter{1} << j;
  }
  return out;
}

Signature parse_signature_list(const std::string& text) {
  std::vector<std::string> names;
  std::string cur;
  for (char ch : text) {
    if (ch == ',' || ch == ' ' || ch == '\t' || ch == '{' || ch == '}') {
      if (!cur.empty()) names.push_back(cur);
      cur.clear();
    } else {
      if (!(std::islower(static_cast<unsigned char>(ch)) || std::isdigit(static_cast<unsigned char>(ch)) || ch == '_'))
        throw std::invalid_argument("bad proposition name in signature: " + text);
      cur += ch;
    }
  }
  if (!cur.empty()) names.push_back(cur);
  return Signature(std::move(names));
}

}  // namespace modsep
