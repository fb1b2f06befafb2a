#include "qnls/errors.hpp"

namespace qnls {

void require(bool cond, const std::string& what) {
  if (!cond) throw InvalidParameter(what);
}

}  // namespace qnls
