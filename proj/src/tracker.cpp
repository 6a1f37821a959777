#include "tsrkit/tracker.hpp"

#include <Eigen/Dense>

#include <algorithm>

namespace tsrkit {

namespace {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Vec4 = Eigen::Matrix<double, 4, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat64 = Eigen::Matrix<double, 6, 4>;
using MapVec6 = Eigen::Map<Vec6>;
using MapMat6 = Eigen::Map<Eigen::Matrix<double, 6, 6, Eigen::RowMajor>>;

Vec4 box_to_measurement(const BBox& box) {
    return {box.center_x(), box.center_y(), box.width(), box.height()};
}

} // namespace

const char* track_status_name(TrackStatus status) {
    switch (status) {
        case TrackStatus::tentative: return "tentative";
        case TrackStatus::confirmed: return "confirmed";
        case TrackStatus::dead: return "dead";
    }
    return "?";
}

BBox Track::box() const {
    const double w = std::max(state[2], 0.0);
    const double h = std::max(state[3], 0.0);
    return {state[0] - 0.5 * w, state[1] - 0.5 * h, state[0] + 0.5 * w, state[1] + 0.5 * h};
}

Track make_track(int id, const Detection& detection, const KalmanParams& params) {
    Track track;
    track.id = id;
    track.class_id = detection.class_id;
    track.confidence = detection.confidence;

    const Vec4 z = box_to_measurement(detection.box);
    track.state = {z[0], z[1], z[2], z[3], 0.0, 0.0};

    MapMat6 P(track.covariance.data());
    P.setZero();
    // r + 1 keeps the initial covariance positive definite when r = 0.
    for (int i = 0; i < 4; ++i) P(i, i) = params.r + 1.0;
    P(4, 4) = params.v0;
    P(5, 5) = params.v0;
    return track;
}

void kalman_predict(Track& track, double dt, const KalmanParams& params) {
    MapVec6 x(track.state.data());
    MapMat6 P(track.covariance.data());

    Mat6 F = Mat6::Identity();
    F(0, 4) = dt;
    F(1, 5) = dt;

    x = (F * x).eval();
    P = (F * P * F.transpose()).eval();
    P += params.q * dt * Mat6::Identity();
    P = (0.5 * (P + P.transpose())).eval();
}

void kalman_update(Track& track, const BBox& measurement, const KalmanParams& params) {
    MapVec6 x(track.state.data());
    MapMat6 P(track.covariance.data());

    const Vec4 z = box_to_measurement(measurement);
    const Vec4 innovation = z - x.head<4>();

    // The model keeps the axes decoupled, so the innovation covariance is
    // diagonal and the gain columns can be solved independently. The floor
    // only engages when a component's variance has collapsed to zero, in
    // which case its gain column is zero and the update is a no-op there.
    Mat64 K;
    for (int j = 0; j < 4; ++j) {
        const double s = P(j, j) + params.r;
        K.col(j) = P.col(j) / std::max(s, 1e-12);
    }

    x += K * innovation;

    Mat6 A = Mat6::Identity(); // I - K H with H = [I4 | 0]
    A.block<6, 4>(0, 0) -= K;
    P = (A * P * A.transpose()).eval();
    P += (params.r * (K * K.transpose())).eval();
    P = (0.5 * (P + P.transpose())).eval();
}

Association associate(const std::vector<Track>& tracks,
                      const std::vector<Detection>& detections, double min_iou) {
    struct Pair {
        double overlap;
        int track;
        int detection;
    };
    std::vector<Pair> pairs;
    for (int t = 0; t < static_cast<int>(tracks.size()); ++t) {
        for (int d = 0; d < static_cast<int>(detections.size()); ++d) {
            if (tracks[t].class_id != detections[d].class_id) continue;
            const double overlap = iou(tracks[t].box(), detections[d].box);
            if (overlap >= min_iou) pairs.push_back({overlap, t, d});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        if (a.overlap != b.overlap) return a.overlap > b.overlap;
        if (a.track != b.track) return a.track < b.track;
        return a.detection < b.detection;
    });

    Association out;
    std::vector<bool> track_used(tracks.size(), false);
    std::vector<bool> det_used(detections.size(), false);
    for (const Pair& p : pairs) {
        if (track_used[p.track] || det_used[p.detection]) continue;
        track_used[p.track] = true;
        det_used[p.detection] = true;
        out.matches.emplace_back(p.track, p.detection);
    }
    for (int t = 0; t < static_cast<int>(tracks.size()); ++t)
        if (!track_used[t]) out.unmatched_tracks.push_back(t);
    for (int d = 0; d < static_cast<int>(detections.size()); ++d)
        if (!det_used[d]) out.unmatched_detections.push_back(d);
    return out;
}

const std::vector<Track>& Tracker::step(const std::vector<Detection>& detections) {
    for (Track& track : tracks_) kalman_predict(track, 1.0, config_.kalman);

    const Association assoc = associate(tracks_, detections, config_.min_iou);

    for (const auto& [t, d] : assoc.matches) {
        Track& track = tracks_[t];
        kalman_update(track, detections[d].box, config_.kalman);
        track.confidence = detections[d].confidence;
        track.misses = 0;
        ++track.hits;
        if (track.status == TrackStatus::tentative && track.hits >= config_.confirm_hits)
            track.status = TrackStatus::confirmed;
    }

    for (int t : assoc.unmatched_tracks) {
        Track& track = tracks_[t];
        ++track.misses;
        track.hits = 0; // a gap breaks the consecutive-sighting streak
        if (track.misses >= config_.max_misses) track.status = TrackStatus::dead;
    }

    std::erase_if(tracks_, [](const Track& t) { return t.status == TrackStatus::dead; });

    for (int d : assoc.unmatched_detections) {
        Track track = make_track(next_id_++, detections[d], config_.kalman);
        if (config_.confirm_hits <= 1) track.status = TrackStatus::confirmed;
        tracks_.push_back(std::move(track));
    }

    return tracks_;
}

} // namespace tsrkit
