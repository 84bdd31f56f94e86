#include "herglotz/errors.hpp"

namespace herglotz {

RegularityError::RegularityError(const std::string& what, double time)
    : NumericError(what), time_(time) {}

}  // namespace herglotz
