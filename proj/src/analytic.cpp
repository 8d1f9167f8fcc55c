#include "slora/analytic.hpp"

#include <cmath>
#include <string>

#include "slora/errors.hpp"

namespace slora {

namespace {

void check_g(double g) {
    if (g < 0.0 || !std::isfinite(g))
        throw ConfigError("offered load G must be finite and >= 0, got " + std::to_string(g));
}

void check_k(double k) {
    if (k < 1.0 || !std::isfinite(k))
        throw ConfigError("overhead factor k must be finite and >= 1, got " + std::to_string(k));
}

} // namespace

double pure_aloha_throughput(double g) {
    check_g(g);
    return g * std::exp(-2.0 * g);
}

double confirmed_aloha_throughput(double g, double k) {
    check_g(g);
    check_k(k);
    return g * std::exp(-2.0 * k * g);
}

double slotted_aloha_throughput(double g) {
    check_g(g);
    return g * std::exp(-g);
}

double slotted_lorawan_throughput(double g, double k) {
    check_g(g);
    check_k(k);
    return g * std::exp(-g) / k;
}

double slotted_lorawan_max_throughput(double k) {
    check_k(k);
    return std::exp(-1.0) / k;
}

double overhead_factor(double t_payload_s, double t_ack_s, double t_rx1_s) {
    if (!(t_payload_s > 0.0))
        throw ConfigError("t_payload_s must be positive, got " + std::to_string(t_payload_s));
    if (t_ack_s < 0.0 || t_rx1_s < 0.0)
        throw ConfigError("t_ack_s and t_rx1_s must be >= 0");
    return (t_payload_s + t_rx1_s + t_ack_s) / t_payload_s;
}

} // namespace slora
