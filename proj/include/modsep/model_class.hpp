#pragma once

#include <string>

namespace modsep {

// All models, words (T^1), binary trees (T^2), d-ary trees (T^d, d >= 3), optionally restricted
// to finite trees.
class ModelClass {
 public:
  enum class Kind { All, Words, Binary, Dary, Finite };

  static ModelClass all();
  static ModelClass words();
  static ModelClass binary();
  // d = 1 and d = 2 give words and binary.
  static ModelClass dary(int d);
  static ModelClass finite(const ModelClass& inner);
  // "all", "words", "binary", "dary:<d>", "finite:<class>".
  static ModelClass parse(const std::string& text);

  Kind kind() const { return finite_ ? Kind::Finite : base_; }
  Kind base_kind() const { return base_; }
  bool finite_only() const { return finite_; }
  ModelClass inner() const;
  // Outdegree bound, or -1 for all models.
  int degree() const;

  std::string to_string() const;
  bool operator==(const ModelClass&) const = default;

 private:
  ModelClass(Kind base, int d, bool finite) : base_(base), d_(d), finite_(finite) {}
  Kind base_ = Kind::All;
  int d_ = -1;
  bool finite_ = false;
};

}  // namespace modsep
