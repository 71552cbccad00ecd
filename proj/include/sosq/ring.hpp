#pragma once

#include <algorithm>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace sosq {

/// An ordered list of variable names. Cheap to copy, compared by content.
class Ring {
 public:
  Ring() : vars_(std::make_shared<const std::vector<std::string>>()) {}
  explicit Ring(std::vector<std::string> vars)
      : vars_(std::make_shared<const std::vector<std::string>>(std::move(vars))) {
    for (size_t i = 0; i < vars_->size(); ++i)
      for (size_t j = i + 1; j < vars_->size(); ++j)
        if ((*vars_)[i] == (*vars_)[j])
          throw std::invalid_argument("duplicate variable name: " + (*vars_)[i]);
  }

  int nvars() const { return static_cast<int>(vars_->size()); }
  const std::string& var(int i) const { return vars_->at(i); }
  const std::vector<std::string>& vars() const { return *vars_; }
  int index_of(const std::string& name) const {
    auto it = std::find(vars_->begin(), vars_->end(), name);
    return it == vars_->end() ? -1 : static_cast<int>(it - vars_->begin());
  }

  bool operator==(const Ring& o) const {
    return vars_ == o.vars_ || *vars_ == *o.vars_;
  }
  bool operator!=(const Ring& o) const { return !(*this == o); }

 private:
  std::shared_ptr<const std::vector<std::string>> vars_;
};

}  // namespace sosq
