#pragma once

#include <map>
#include <string>

#include "robosync/dsl/ast.hpp"
#include "robosync/errors.hpp"

namespace robosync::dsl {

class MissingSignal : public Error {
public:
    explicit MissingSignal(std::string signal);
    const std::string& signal() const { return signal_; }

private:
    std::string signal_;
};

using Snapshot = std::map<std::string, double, std::less<>>;

/// Evaluates `cond` against the latest value of each signal. Throws
/// MissingSignal when a comparison reads a signal absent from `snapshot`.
bool eval_condition(const Condition& cond, const Snapshot& snapshot);

bool compare(double lhs, CompareOp op, double rhs);

} // namespace robosync::dsl
