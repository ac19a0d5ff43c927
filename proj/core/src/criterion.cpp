#include "whittle/criterion.hpp"

#include <sstream>
#include <stdexcept>

namespace whittle {

void validate_criterion(const Criterion& c) {
  if (const auto* d = std::get_if<Discounted>(&c)) {
    if (!(d->beta >= 0.0 && d->beta < 1.0)) throw std::invalid_argument("discount factor must lie in [0, 1)");
  }
}

std::string describe(const Criterion& c) {
  if (const auto* d = std::get_if<Discounted>(&c)) {
    std::ostringstream os;
    os << "discounted(beta=" << d->beta << ")";
    return os.str();
  }
  return "average";
}

}  // namespace whittle
