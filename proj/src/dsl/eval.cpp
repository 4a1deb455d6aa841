#include "robosync/dsl/eval.hpp"

namespace robosync::dsl {

MissingSignal::MissingSignal(std::string signal)
    : Error("missing signal '" + signal + "'"), signal_(std::move(signal))
{
}

bool compare(double lhs, CompareOp op, double rhs)
{
    switch (op) {
    case CompareOp::lt: return lhs < rhs;
    case CompareOp::le: return lhs <= rhs;
    case CompareOp::gt: return lhs > rhs;
    case CompareOp::ge: return lhs >= rhs;
    case CompareOp::eq: return lhs == rhs;
    case CompareOp::ne: return lhs != rhs;
    }
    return false;
}

bool eval_condition(const Condition& cond, const Snapshot& snapshot)
{
    // Both operands are always evaluated, so a missing signal is reported
    // regardless of which side would have decided the result.
    return std::visit(
        [&](const auto& node) -> bool {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Comparison>) {
                auto it = snapshot.find(node.signal);
                if (it == snapshot.end()) {
                    throw MissingSignal(node.signal);
                }
                return compare(it->second, node.op, node.value);
            } else if constexpr (std::is_same_v<T, Not>) {
                return !eval_condition(*node.inner, snapshot);
            } else if constexpr (std::is_same_v<T, And>) {
                bool l = eval_condition(*node.left, snapshot);
                bool r = eval_condition(*node.right, snapshot);
                return l && r;
            } else {
                bool l = eval_condition(*node.left, snapshot);
                bool r = eval_condition(*node.right, snapshot);
                return l || r;
            }
        },
        cond.node);
}

} // namespace robosync::dsl
