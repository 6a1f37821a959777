#pragma once

#include <array>
#include <vector>

#include "tsrkit/bbox.hpp"

namespace tsrkit {

// Kalman filter noise configuration. q scales the process noise (Q = q * dt
// * I), r the measurement noise (R = r * I on the four observed components),
// v0 is the initial velocity variance.
struct KalmanParams {
    double q = 1e-2;
    double r = 1.0;
    double v0 = 100.0;
};

enum class TrackStatus { tentative, confirmed, dead };

const char* track_status_name(TrackStatus status);

// One tracked object. The state is [cx, cy, w, h, vx, vy]: constant
// velocity on the center, random walk on the size. covariance is the 6x6
// matrix in row-major order.
struct Track {
    int id = 0;
    int class_id = 0;
    std::array<double, 6> state{};
    std::array<double, 36> covariance{};
    TrackStatus status = TrackStatus::tentative;
    int hits = 1;             // consecutive frames with an associated detection
    int misses = 0;           // consecutive frames without one
    double confidence = 0.0;  // last associated detection confidence

    BBox box() const;
};

// Time propagation: center moves by velocity * dt, covariance by
// F P F^T + q * dt * I. The estimate of a track with no measurements keeps
// its size and extrapolates its center.
void kalman_predict(Track& track, double dt, const KalmanParams& params);

// Measurement update with an observed box (converted to center/size form),
// Joseph-form covariance update. The innovation covariance is solved per
// component (it is diagonal for this model), so r = 0 makes the posterior
// observed components equal the measurement exactly.
void kalman_update(Track& track, const BBox& measurement, const KalmanParams& params);

struct Association {
    std::vector<std::pair<int, int>> matches; // (track index, detection index)
    std::vector<int> unmatched_tracks;
    std::vector<int> unmatched_detections;
};

// Greedy association by descending IoU between predicted track boxes and
// detections of the same class; pairs below min_iou stay unmatched. Ties
// are broken by smaller track index, then smaller detection index.
Association associate(const std::vector<Track>& tracks,
                      const std::vector<Detection>& detections, double min_iou);

struct TrackerConfig {
    KalmanParams kalman;
    double min_iou = 0.3;
    int confirm_hits = 4; // consecutive hits needed to confirm
    int max_misses = 3;   // consecutive misses until a track dies
};

// Frame-stepped multi-object tracker. Each step predicts all live tracks
// one frame ahead (dt = 1), associates the frame's detections, updates
// matched tracks, spawns tentative tracks for unmatched detections, and
// retires tracks that miss max_misses frames in a row. A track is confirmed
// once it has been seen in confirm_hits consecutive frames; a missed frame
// resets a tentative track's streak.
class Tracker {
public:
    explicit Tracker(const TrackerConfig& config = {}) : config_(config) {}

    // Processes one frame; returns the live (not dead) tracks after it.
    const std::vector<Track>& step(const std::vector<Detection>& detections);

    const std::vector<Track>& tracks() const { return tracks_; }
    const TrackerConfig& config() const { return config_; }

private:
    TrackerConfig config_;
    std::vector<Track> tracks_;
    int next_id_ = 1;
};

// Initializes a track from a detection: zero velocity, position/size
// variance r + 1 (the +1 keeps the initial covariance positive definite
// when r = 0), velocity variance v0.
Track make_track(int id, const Detection& detection, const KalmanParams& params);

} // namespace tsrkit
