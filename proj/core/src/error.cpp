#include "l96sp/error.hpp"

namespace l96sp {

BlowUpError::BlowUpError(double time, const std::string& what)
    : Error(what), time_(time) {}

}  // namespace l96sp
