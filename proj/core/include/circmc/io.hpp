#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>
#include <string_view>
#include <vector>

#include "circmc/state.hpp"

namespace circmc {

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);
double parse_double(std::string_view text);

std::vector<std::string> split_csv_line(std::string_view line);

/// Columns t, x1..xd and, when states carry momentum, p1..pm.
void write_trace_csv(const std::filesystem::path& path, const std::vector<ChainState>& trace);
std::vector<ChainState> read_trace_csv(const std::filesystem::path& path);

/// Pretty-printed JSON with a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& value);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace circmc
