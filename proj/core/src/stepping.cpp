#include "fastdiff/stepping.hpp"

namespace fastdiff {

void StepControl::validate() const {
  if (!(dt_min > 0.0 && dt_min <= dt_init && dt_init <= dt_max)) {
    throw std::invalid_argument("StepControl: need 0 < dt_min <= dt_init <= dt_max");
  }
  if (!(newton_tol > 0.0)) throw std::invalid_argument("StepControl: newton_tol must be positive");
  if (newton_max_iter < 1) throw std::invalid_argument("StepControl: newton_max_iter must be >= 1");
  if (!(grow_factor >= 1.0) || !(shrink_factor > 0.0 && shrink_factor < 1.0)) {
    throw std::invalid_argument("StepControl: bad grow/shrink factors");
  }
}

}  // namespace fastdiff
