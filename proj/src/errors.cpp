#include "degen/errors.hpp"

namespace degen {

ConvergenceError::ConvergenceError(const std::string& what, double achieved_error)
    : Error(what), achieved_(achieved_error) {}

} // namespace degen
