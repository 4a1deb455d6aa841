#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "robosync/config.hpp"
#include "robosync/errors.hpp"

namespace robosync::sched {

/// Priority scale: (0, 1], 1.0 is P_max and belongs to safety work.
inline constexpr double kMaxPriority = 1.0;

enum class TaskCategory { sensor_input, algorithmic, behavioral, control, safety };

std::string_view to_string(TaskCategory category);

/// Tie-break rank among equal priorities; higher wins.
/// Safety > Control > Behavioral > Algorithmic > SensorInput.
int category_rank(TaskCategory category);

struct TaskDescriptor {
    std::string id;
    TaskCategory category = TaskCategory::sensor_input;
    std::set<std::string> behaviors;
    double base_priority = 0.0;
    double current_priority = 0.0;
    std::int64_t cost_us = 1;
    // Pinned at kMaxPriority: safety category, or linked to a safety check/behavior.
    bool safety_pinned = false;

    bool operator==(const TaskDescriptor&) const = default;
};

class UnknownBehavior : public Error {
public:
    explicit UnknownBehavior(const std::string& task, const std::string& behavior);
};

/// Max-inheritance: a task takes the highest priority of the behaviors that
/// use it. Tasks in `safety_tasks` resolve to 1.0 whatever their usage.
/// Tasks with an empty usage set are omitted unless they are safety tasks.
std::map<std::string, double> assign_base_priorities(
    const std::map<std::string, double>& behavior_priorities,
    const std::map<std::string, std::set<std::string>>& usage,
    const std::set<std::string>& safety_tasks);

/// Triggers of one behavior inside the current tumbling window.
struct FrequencyCounter {
    std::string behavior;
    std::vector<std::int64_t> trigger_timestamps;

    std::size_t frequency() const { return trigger_timestamps.size(); }
};

FrequencyCounter record_trigger(FrequencyCounter counter, std::int64_t t_us);

struct PriorityUpdate {
    std::string task;
    std::int64_t t_us = 0;
    double base = 0.0;
    double previous = 0.0;
    double current = 0.0;
    std::size_t frequency = 0;  // F(b*) of the most-triggered linked behavior
    std::string behavior;       // b*, empty when no linked behavior
};

struct AdaptResult {
    std::vector<TaskDescriptor> tasks;
    std::vector<PriorityUpdate> updates;  // one per task, in input order
};

/// Window-boundary adjustment: current = min(base + alpha * F(b*) / W, 1.0)
/// with W in seconds and b* the most-triggered linked behavior. Pinned tasks
/// stay at 1.0. Counters are reset.
AdaptResult adapt_priorities(std::vector<TaskDescriptor> tasks,
                             std::map<std::string, FrequencyCounter>& counters,
                             const config::SchedulerParams& params,
                             std::int64_t t_us);

struct ReadyEntry {
    std::string task;
    std::uint64_t enqueue_seq = 0;
    std::uint64_t payload = 0;  // owner-defined reference
    std::int64_t enqueue_t_us = 0;
};

class ReadyQueue {
public:
    std::uint64_t push(std::string task, std::uint64_t payload, std::int64_t t_us);
    std::optional<ReadyEntry> take(std::uint64_t enqueue_seq);
    void clear() { entries_.clear(); }

    const std::vector<ReadyEntry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }

private:
    std::vector<ReadyEntry> entries_;
    std::uint64_t next_seq_ = 0;
};

struct Selection {
    std::string task;
    std::uint64_t enqueue_seq = 0;
    bool operator==(const Selection&) const = default;
};

/// Highest current priority wins; ties go to the higher category rank, then
/// to the lowest enqueue_seq.
std::optional<Selection> select_next(const ReadyQueue& queue,
                                     const std::map<std::string, TaskDescriptor>& tasks);

} // namespace robosync::sched
