#pragma once

#include "maxmargin/certify.hpp"
#include "maxmargin/group.hpp"
#include "maxmargin/network.hpp"
#include "maxmargin/spectra.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace maxmargin {

// JSON documents are returned as strings so callers do not depend on a JSON library.
std::string network_to_json(const Network& net, int indent = -1);
Network network_from_json(const std::string& text);
void save_network(const Network& net, const std::filesystem::path& path);
Network load_network(const std::filesystem::path& path);

std::string task_to_json(const TaskSpec& task);
TaskSpec task_from_json(const std::string& text);

std::string group_to_json(const Group& group, const CharacterTable& table, bool include_mul = false);
std::string margin_to_json(const MarginReport& report, bool include_points = false);
std::string certificate_to_json(const CertificateReport& report);
std::string weighting_to_json(const WeightingSolution& sol, const CharacterTable& table);
std::string oracle_to_json(const OracleResult& result, const TaskSpec& task);
std::string presence_to_json(const PresenceReport& report);

// One row per neuron, then a summary table with one row per frequency / rep.
void write_spectrum_csv(const SpectrumReport& report, std::ostream& neurons_out, std::ostream& summary_out);

// Shortest round-trip decimal, used for CSV cells.
std::string format_number(double x);

}  // namespace maxmargin
