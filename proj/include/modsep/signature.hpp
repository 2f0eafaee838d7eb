#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace modsep {

// Ordered, duplicate-free set of proposition names.
class Signature {
 public:
  Signature() = default;
  Signature(std::initializer_list<std::string> names);
  explicit Signature(std::vector<std::string> names);

  const std::vector<std::string>& names() const { return names_; }
  std::size_t size() const { return names_.size(); }
  bool empty() const { return names_.empty(); }
  bool contains(const std::string& p) const;
  // Position of p, or -1.
  int index_of(const std::string& p) const;
  const std::string& operator[](std::size_t i) const { return names_[i]; }

  Signature unite(const Signature& other) const;
  Signature intersect(const Signature& other) const;
  bool subset_of(const Signature& other) const;

  auto begin() const { return names_.begin(); }
  auto end() const { return names_.end(); }

  bool operator==(const Signature&) const = default;

  std::string to_string() const;  // "{a b}"

 private:
  std::vector<std::string> names_;
};

// A letter of the alphabet 2^sigma, as a bitmask over sigma's positions.
using Letter = std::uint32_t;

// Propositions of a valuation restricted to sigma, as a letter.
Letter letter_of(const std::vector<std::string>& valuation, const Signature& sigma);
std::vector<std::string> valuation_of(Letter c, const Signature& sigma);
// Re-index a letter of `from` to the positions of `to` (propositions outside `to` are dropped).
Letter project_letter(Letter c, const Signature& from, const Signature& to);

// Parse "a,b" or "a b" into a signature.
Signature parse_signature_list(const std::string& text);

}  // namespace modsep
