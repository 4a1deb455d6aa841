#pragma once

#include <stdexcept>
#include <string>

namespace robosync {

// Root of every domain error the library throws. Defects (broken internal
// invariants) surface as std::logic_error instead.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace robosync
