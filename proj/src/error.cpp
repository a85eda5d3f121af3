#include "ldlab/error.hpp"

namespace ldlab {

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace ldlab
