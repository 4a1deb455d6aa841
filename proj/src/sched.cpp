#include "robosync/sched.hpp"

#include <algorithm>
#include <stdexcept>

namespace robosync::sched {

std::string_view to_string(TaskCategory category)
{
    switch (category) {
    case TaskCategory::sensor_input: return "sensor_input";
    case TaskCategory::algorithmic: return "algorithmic";
    case TaskCategory::behavioral: return "behavioral";
    case TaskCategory::control: return "control";
    case TaskCategory::safety: return "safety";
    }
    return "?";
}

int category_rank(TaskCategory category)
{
    switch (category) {
    case TaskCategory::sensor_input: return 0;
    case TaskCategory::algorithmic: return 1;
    case TaskCategory::behavioral: return 2;
    case TaskCategory::control: return 3;
    case TaskCategory::safety: return 4;
    }
    return -1;
}

UnknownBehavior::UnknownBehavior(const std::string& task, const std::string& behavior)
    : Error("task '" + task + "' uses unknown behavior '" + behavior + "'")
{
}

std::map<std::string, double> assign_base_priorities(
    const std::map<std::string, double>& behavior_priorities,
    const std::map<std::string, std::set<std::string>>& usage,
    const std::set<std::string>& safety_tasks)
{
    std::map<std::string, double> out;
    for (const auto& [task, behaviors] : usage) {
        std::optional<double> best;
        for (const auto& b : behaviors) {
            auto it = behavior_priorities.find(b);
            if (it == behavior_priorities.end()) {
                throw UnknownBehavior(task, b);
            }
            best = best ? std::max(*best, it->second) : it->second;
        }
        if (best) {
            out[task] = *best;
        }
    }
    for (const auto& task : safety_tasks) {
        out[task] = kMaxPriority;
    }
    return out;
}

FrequencyCounter record_trigger(FrequencyCounter counter, std::int64_t t_us)
{
    if (!counter.trigger_timestamps.empty() && t_us < counter.trigger_timestamps.back()) {
        throw std::logic_error("record_trigger: timestamps must not go backwards");
    }
    counter.trigger_timestamps.push_back(t_us);
    return counter;
}

AdaptResult adapt_priorities(std::vector<TaskDescriptor> tasks,
                             std::map<std::string, FrequencyCounter>& counters,
                             const config::SchedulerParams& params,
                             std::int64_t t_us)
{
    AdaptResult result;
    const double window_s = params.window_seconds();
    for (auto& task : tasks) {
        PriorityUpdate update;
        update.task = task.id;
        update.t_us = t_us;
        update.base = task.base_priority;
        update.previous = task.current_priority;

        // b*: the linked behavior with the highest F; ties keep the first by name.
        for (const auto& b : task.behaviors) {
            auto it = counters.find(b);
            std::size_t f = it == counters.end() ? 0 : it->second.frequency();
            if (update.behavior.empty() || f > update.frequency) {
                update.behavior = b;
                update.frequency = f;
            }
        }

        if (task.safety_pinned || task.category == TaskCategory::safety) {
            task.current_priority = kMaxPriority;
        } else {
            double delta = params.alpha * static_cast<double>(update.frequency) / window_s;
            task.current_priority = std::min(task.base_priority + delta, params.p_max);
        }
        update.current = task.current_priority;
        result.updates.push_back(std::move(update));
    }
    for (auto& [_, counter] : counters) {
        counter.trigger_timestamps.clear();
    }
    result.tasks = std::move(tasks);
    return result;
}

std::uint64_t ReadyQueue::push(std::string task, std::uint64_t payload, std::int64_t t_us)
{
    auto seq = next_seq_++;
    entries_.push_back({std::move(task), seq, payload, t_us});
    return seq;
}

std::optional<ReadyEntry> ReadyQueue::take(std::uint64_t enqueue_seq)
{
    auto it = std::find_if(entries_.begin(), entries_.end(),
                           [&](const ReadyEntry& e) { return e.enqueue_seq == enqueue_seq; });
    if (it == entries_.end()) {
        return std::nullopt;
    }
    ReadyEntry out = std::move(*it);
    entries_.erase(it);
    return out;
}

std::optional<Selection> select_next(const ReadyQueue& queue, const std::map<std::string, TaskDescriptor>& tasks)
{
    const ReadyEntry* best = nullptr;
    const TaskDescriptor* best_task = nullptr;
    for (const auto& entry : queue.entries()) {
        auto it = tasks.find(entry.task);
        if (it == tasks.end()) {
            throw std::logic_error("select_next: queued task '" + entry.task + "' has no descriptor");
        }
        const auto* task = &it->second;
        bool better = false;
        if (!best) {
            better = true;
        } else if (task->current_priority != best_task->current_priority) {
            better = task->current_priority > best_task->current_priority;
        } else if (category_rank(task->category) != category_rank(best_task->category)) {
            better = category_rank(task->category) > category_rank(best_task->category);
        } else {
            better = entry.enqueue_seq < best->enqueue_seq;
        }
        if (better) {
            best = &entry;
            best_task = task;
        }
    }
    if (!best) {
        return std::nullopt;
    }
    return Selection{best->task, best->enqueue_seq};
}

} // namespace robosync::sched
