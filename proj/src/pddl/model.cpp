#include "chronosat/pddl/model.hpp"

#include <algorithm>

namespace chronosat::pddl {

namespace {
template <typename T>
const T* find_named(const std::vector<T>& items, const std::string& n) {
  auto it = std::find_if(items.begin(), items.end(), [&](const T& x) { return x.name == n; });
  return it == items.end() ? nullptr : &*it;
}
}  // namespace

const PredicateDecl* DomainModel::find_predicate(const std::string& n) const { return find_named(predicates, n); }
const FunctionDecl* DomainModel::find_function(const std::string& n) const { return find_named(functions, n); }
const ActionSchema* DomainModel::find_action(const std::string& n) const { return find_named(actions, n); }
const DurativeActionSchema* DomainModel::find_durative_action(const std::string& n) const {
  return find_named(durative_actions, n);
}

}  // namespace chronosat::pddl
