#pragma once

namespace slora {

// Closed-form ALOHA throughput laws. Throughput S and offered load G are both
// normalized to packet time; k folds protocol overhead (receive window plus
// acknowledgement) into an effective packet duration of k times the payload.

// S = G * exp(-2G), peak 1/(2e) at G = 0.5
double pure_aloha_throughput(double g);

// S = G * exp(-2kG), peak 1/(2ke) at G = 1/(2k); requires k >= 1
double confirmed_aloha_throughput(double g, double k);

// S = G * exp(-G), peak 1/e at G = 1
double slotted_aloha_throughput(double g);

// payload-time throughput of a slotted link whose slot lasts k packet times:
// S = G * exp(-G) / k
double slotted_lorawan_throughput(double g, double k);

// (1/e)/k, the peak of slotted_lorawan_throughput over G
double slotted_lorawan_max_throughput(double k);

// k = (t_payload + t_rx1 + t_ack) / t_payload; throws ConfigError when
// t_payload <= 0 or any term is negative
double overhead_factor(double t_payload_s, double t_ack_s, double t_rx1_s);

} // namespace slora
