#include "chronosat/pddl/types.hpp"

#include <algorithm>
#include <stdexcept>

namespace chronosat::pddl {

TypeHierarchy::TypeHierarchy(const DomainModel& domain) {
  parent_["object"] = "";
  for (const auto& t : domain.types) {
    if (t.name == "object") continue;
    parent_[t.name] = t.type;
    children_[t.type].push_back(t.name);
  }
  std::vector<std::string> stack{"object"};
  while (!stack.empty()) {
    std::string cur = stack.back();
    stack.pop_back();
    preorder_.push_back(cur);
    auto it = children_.find(cur);
    if (it == children_.end()) continue;
    for (auto c = it->second.rbegin(); c != it->second.rend(); ++c) stack.push_back(*c);
  }
}

bool TypeHierarchy::is_subtype(const std::string& type, const std::string& ancestor) const {
  std::string cur = type;
  for (std::size_t guard = 0; guard <= parent_.size(); ++guard) {
    if (cur == ancestor) return true;
    auto it = parent_.find(cur);
    if (it == parent_.end() || it->second.empty()) return false;
    cur = it->second;
  }
  return false;
}

ObjectTable::ObjectTable(const DomainModel& domain, const ProblemModel& problem)
    : hierarchy_(domain) {
  std::vector<TypedName> all = domain.constants;
  all.insert(all.end(), problem.objects.begin(), problem.objects.end());
  std::map<std::string, std::size_t> rank;
  for (std::size_t i = 0; i < hierarchy_.preorder().size(); ++i) rank[hierarchy_.preorder()[i]] = i;
  std::stable_sort(all.begin(), all.end(), [&](const TypedName& a, const TypedName& b) {
    return rank[a.type] < rank[b.type];
  });
  for (const auto& o : all) {
    if (index_.count(o.name)) continue;
    index_[o.name] = static_cast<int>(names_.size());
    names_.push_back(o.name);
    types_.push_back(o.type);
  }
  for (const auto& t : hierarchy_.preorder()) {
    auto& ids = by_type_[t];
    for (int i = 0; i < size(); ++i) {
      if (hierarchy_.is_subtype(types_[static_cast<std::size_t>(i)], t)) ids.push_back(i);
    }
  }
}

std::optional<int> ObjectTable::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int ObjectTable::id(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw std::out_of_range("unknown object '" + name + "'");
  return it->second;
}

const std::vector<int>& ObjectTable::of_type(const std::string& type) const {
  static const std::vector<int> kEmpty;
  auto it = by_type_.find(type);
  return it == by_type_.end() ? kEmpty : it->second;
}

bool ObjectTable::has_type(int id, const std::string& type) const {
  return hierarchy_.is_subtype(type_of(id), type);
}

}  // namespace chronosat::pddl
