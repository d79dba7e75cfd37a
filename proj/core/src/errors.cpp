#include "stcut/errors.hpp"

namespace stcut {

AssemblyError::AssemblyError(std::size_t slab, const std::string& what)
    : NumericalError("slab " + std::to_string(slab) + ": " + what), slab_(slab) {}

SingularSystemError::SingularSystemError(std::size_t slab, double rcond,
                                         const std::string& what)
    : NumericalError("slab " + std::to_string(slab) + ": " + what +
                     " (rcond estimate " + std::to_string(rcond) + ")"),
      slab_(slab),
      rcond_(rcond) {}

}  // namespace stcut
