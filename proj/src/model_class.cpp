#include "modsep/model_class.hpp"

#include <stdexcept>

namespace modsep {

ModelClass ModelClass::all() { return ModelClass(Kind::All, -1, false); }
ModelClass ModelClass::words() { return ModelClass(Kind::Words, 1, false); }
ModelClass ModelClass::binary() { return ModelClass(Kind::Binary, 2, false); }

ModelClass ModelClass::dary(int d) {
  if (d < 1) throw std::invalid_argument("outdegree bound must be positive");
  if (d == 1) return words();
  if (d == 2) return binary();
  return ModelClass(Kind::Dary, d, false);
}

ModelClass ModelClass::finite(const ModelClass& inner) {
  ModelClass c = inner;
  c.finite_ = true;
  return c;
}

ModelClass ModelClass::inner() const {
  ModelClass c = *this;
  c.finite_ = false;
  return c;
}

int ModelClass::degree() const { return d_; }

ModelClass ModelClass::parse(const std::string& text) {
  if (text == "all") return all();
  if (text == "words") return words();
  if (text == "binary") return binary();
  if (text.rfind("dary:", 0) == 0) {
    std::size_t used = 0;
    int d = 0;
    try {
      d = std::stoi(text.substr(5), &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad class '" + text + "'");
    }
    if (used != text.size() - 5) throw std::invalid_argument("bad class '" + text + "'");
    return dary(d);
  }
  if (text.rfind("finite:", 0) == 0) {
    ModelClass inner = parse(text.substr(7));
    if (inner.finite_only()) throw std::invalid_argument("nested finite class");
    return finite(inner);
  }
  throw std::invalid_argument("unknown class '" + text + "'");
}

std::string ModelClass::to_string() const {
  std::string s;
  switch (base_) {
    case Kind::All:
      s = "all";
      break;
    case Kind::Words:
      s = "words";
      break;
    case Kind::Binary:
      s = "binary";
      break;
    default:
      s = "dary:" + std::to_string(d_);
      break;
  }
  return finite_ ? "finite:" + s : s;
}

}  // namespace modsep
