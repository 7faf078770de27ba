#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "adaptctl/freqresp.hpp"
#include "adaptctl/simulator.hpp"

namespace adaptctl::csv {

// Shortest-safe round trip: "%.17g".
std::string format(double x);

void write_row(std::ostream& os, const std::vector<double>& values);

// t,e1..en,What1..WhatNb,u,q1..qNb[,z1..zNb]
std::string trajectory_header(const sim::Trajectory& traj);
void write_trajectory(std::ostream& os, const sim::Trajectory& traj);

// omega,mag_db,phase_deg,re,im
void write_bode(std::ostream& os, const std::vector<freqresp::SensitivitySample>& table);
std::string bode_file_name(const std::string& law, const std::string& tag);

// Generic table with a header line.
void write_table(std::ostream& os, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& columns);

// Writes text to path, creating parent directories. Throws Error on failure.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace adaptctl::csv
