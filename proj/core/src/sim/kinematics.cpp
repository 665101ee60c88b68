#include "smforge/sim/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace smforge::sim {

BodyVelocity wheelToBody(double vlNorm, double vrNorm, double maxSpeed, double wheelDistance) {
    return {(vlNorm + vrNorm) / 2.0 * maxSpeed, (vrNorm - vlNorm) * maxSpeed / wheelDistance};
}

BodyVelocity bodyVelocity(const WheelSpeeds& w, double wheelDistance) {
    return {(w.left + w.right) / 2.0, (w.right - w.left) / wheelDistance};
}

WheelCommand bodyToWheel(double v, double omega, double maxSpeed, double wheelDistance) {
    const double half = omega * wheelDistance / 2.0;
    WheelCommand cmd{{v - half, v + half}, false};
    auto clamp = [&](double& s) {
        if (std::abs(s) > maxSpeed) {
            s = std::clamp(s, -maxSpeed, maxSpeed);
            cmd.clamped = true;
        }
    };
    clamp(cmd.wheels.left);
    clamp(cmd.wheels.right);
    return cmd;
}

double normalizeAngle(double a) {
    constexpr double twoPi = 2.0 * std::numbers::pi;
    a = std::remainder(a, twoPi);  // [-pi, pi]
    if (a <= -std::numbers::pi) a += twoPi;
    return a;
}

bool RobotBody::setWheels(WheelSpeeds w) {
    const auto l = std::clamp(w.left, -maxSpeed, maxSpeed);
    const auto r = std::clamp(w.right, -maxSpeed, maxSpeed);
    wheels = {l, r};
    return l != w.left || r != w.right;
}

RobotBody integratePose(RobotBody body, double dt) {
    const auto vel = bodyVelocity(body.wheels, body.wheelDistance);
    body.pose.x += vel.v * std::cos(body.pose.theta) * dt;
    body.pose.y += vel.v * std::sin(body.pose.theta) * dt;
    body.pose.theta = normalizeAngle(body.pose.theta + vel.omega * dt);
    return body;
}

}  // namespace smforge::sim
