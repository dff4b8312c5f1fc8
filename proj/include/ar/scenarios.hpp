#pragma once

#include "ar/scenario.hpp"

#include <string>
#include <vector>

namespace ar::scenarios {

enum class AdderFault { None, StuckAtZeroLowOutput };

/// Two 2-bit input registers and a 3-bit output register on seven voltage
/// lines bounded to [0, 5] V. A line at or above 2.5 V reads as 1. The device
/// is a gate-level ripple-carry adder; noise flips output lines only.
///
/// Line layout (MSB first within each register):
///   0-1 operand a, 2-3 operand b, 4-6 sum.
ScenarioBundle build_voltage_adder(double flip_probability = 0.0, AdderFault fault = AdderFault::None);

/// Decimal, binary and assembly addition layers over the voltage adder.
/// With misdeclared set, the decimal-to-binary map swaps the encodings of 1 and 2.
ScenarioBundle build_refinement_stack(bool misdeclared = false);

/// Two labeled digit registers whose contents the device exchanges.
ScenarioBundle build_swap_device();

/// Toy crowd-classification machine: a human tagging pictures and a machine
/// tallying votes, jointly represented as a galaxy catalogue. The tables are
/// illustrative only.
ScenarioBundle build_social_machine();

enum class XorVariant { Xor, NotLeft, Identity };

/// Two 1-bit components; the joint dynamics is (a xor b, b), (not a, b) or identity.
ScenarioBundle build_xor_joint(XorVariant variant = XorVariant::Xor);

/// Names accepted by builtin(): voltage-adder, voltage-adder-noisy,
/// voltage-adder-faulted, refinement-stack, refinement-stack-misdeclared,
/// swap-device, social-machine, xor-joint, xor-joint-not, xor-joint-identity.
std::vector<std::string> builtin_names();
ScenarioBundle builtin(const std::string& name);

/// Voltage configuration with every line on a rail (0 V or 5 V) for the
/// given register contents.
Value adder_voltages(const std::string& a, const std::string& b, const std::string& sum = "000");

}  // namespace ar::scenarios
