#pragma once

namespace tsrkit {

// Step-decay learning-rate schedule: the rate starts at initial_lr and is
// multiplied by decay_factor after every decay_period steps.
struct TrainingSchedule {
    double initial_lr = 0.002;
    double decay_factor = 0.1;
    long decay_period = 2000;
};

// Rate at a 0-based step: initial_lr * decay_factor^(step / decay_period),
// computed by repeated multiplication so decade steps of the default
// schedule land exactly on their decimal values.
inline double learning_rate(const TrainingSchedule& schedule, long step) {
    double lr = schedule.initial_lr;
    if (step < 0 || schedule.decay_period <= 0) return lr;
    const long decades = step / schedule.decay_period;
    for (long i = 0; i < decades; ++i) lr *= schedule.decay_factor;
    return lr;
}

} // namespace tsrkit
