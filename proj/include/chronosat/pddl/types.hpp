#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chronosat/pddl/model.hpp"

namespace chronosat::pddl {

/// Type forest rooted at `object`.
class TypeHierarchy {
 public:
  TypeHierarchy() = default;
  explicit TypeHierarchy(const DomainModel& domain);

  bool contains(const std::string& type) const { return parent_.count(type) > 0; }
  bool is_subtype(const std::string& type, const std::string& ancestor) const;
  /// Types in depth-first pre-order from `object`; children in declaration order.
  const std::vector<std::string>& preorder() const { return preorder_; }

 private:
  std::map<std::string, std::string> parent_;
  std::map<std::string, std::vector<std::string>> children_;
  std::vector<std::string> preorder_;
};

/// Domain constants plus problem objects, indexed densely. Objects are sorted
/// by the pre-order position of their type (stable within a type) so every
/// type's members occupy one contiguous index range.
class ObjectTable {
 public:
  ObjectTable() = default;
  ObjectTable(const DomainModel& domain, const ProblemModel& problem);

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int id) const { return names_.at(static_cast<std::size_t>(id)); }
  const std::string& type_of(int id) const { return types_.at(static_cast<std::size_t>(id)); }
  std::optional<int> find(const std::string& name) const;
  int id(const std::string& name) const;

  /// Ids of objects whose type is `type` or one of its subtypes.
  const std::vector<int>& of_type(const std::string& type) const;
  bool has_type(int id, const std::string& type) const;

  const TypeHierarchy& types() const { return hierarchy_; }

 private:
  TypeHierarchy hierarchy_;
  std::vector<std::string> names_;
  std::vector<std::string> types_;
  std::map<std::string, int> index_;
  std::map<std::string, std::vector<int>> by_type_;
};

}  // namespace chronosat::pddl
