#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace netcube {

// Outcome of one invariant over a whole structure. `worst_slack` is the
// smallest margin seen (negative when violated, NaN when nothing was
// constrained); `witness` describes the first violation found.
struct PropertyCheck {
  std::string name;
  bool pass = true;
  std::size_t checked = 0;
  std::size_t violations = 0;
  double worst_slack = std::numeric_limits<double>::quiet_NaN();
  std::string witness;

  PropertyCheck() = default;
  explicit PropertyCheck(std::string check_name) : name(std::move(check_name)) {}

  void observe(double slack) {
    ++checked;
    if (std::isnan(worst_slack) || slack < worst_slack) worst_slack = slack;
  }
  void fail(std::string what) {
    pass = false;
    if (violations++ == 0) witness = std::move(what);
  }
};

struct VerificationReport {
  std::vector<PropertyCheck> checks;

  bool pass() const {
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }
  const PropertyCheck* find(const std::string& name) const {
    for (const auto& c : checks) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
};

}  // namespace netcube
