#pragma once

/// @file kinematics.hpp
/// @brief Differential-drive conversions and pose integration.
///
/// Units: cm, s, rad. Positive angular speed turns counter-clockwise.

namespace smforge::sim {

struct BodyVelocity {
    double v = 0.0;      // cm/s
    double omega = 0.0;  // rad/s
};

struct WheelSpeeds {
    double left = 0.0;  // cm/s
    double right = 0.0;

    bool operator==(const WheelSpeeds&) const = default;
};

struct WheelCommand {
    WheelSpeeds wheels;
    bool clamped = false;
};

/// Normalized wheel speeds in [-1, 1] scaled by maxSpeed.
BodyVelocity wheelToBody(double vlNorm, double vrNorm, double maxSpeed, double wheelDistance);

/// Body velocity of physical wheel speeds.
BodyVelocity bodyVelocity(const WheelSpeeds& w, double wheelDistance);

/// Inverse mapping; wheels beyond +-maxSpeed are clamped and flagged.
WheelCommand bodyToWheel(double v, double omega, double maxSpeed, double wheelDistance);

/// Maps into (-pi, pi].
double normalizeAngle(double a);

struct Pose {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;

    bool operator==(const Pose&) const = default;
};

struct RobotBody {
    Pose pose;
    WheelSpeeds wheels;
    double bodyRadius = 3.7;
    double wheelDistance = 5.1;
    double maxSpeed = 12.8;

    /// Clamps each wheel to +-maxSpeed; returns true if clamping occurred.
    bool setWheels(WheelSpeeds w);
};

/// Explicit Euler step of the unicycle model.
RobotBody integratePose(RobotBody body, double dt);

}  // namespace smforge::sim
