#pragma once

// Text and image writers for run artifacts.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ratchet/experiments.hpp"

namespace ratchet {

/// Binary 8-bit PGM (P5).
void write_pgm(const std::filesystem::path& path, const GrayImage& image);
GrayImage read_pgm(const std::filesystem::path& path);

/// `kick,order,probability`, one line per stored order.
void write_orders_csv(std::ostream& os, const std::vector<MomentumLadder>& ladders);

/// `#`-prefixed parameter lines followed by `kick,mean_p,mean_p2,participation`.
void write_stats_csv(std::ostream& os, const std::vector<StepStats>& stats,
                     const std::vector<std::pair<std::string, std::string>>& params);

/// One JSON object per line: {"kick","beta","hbar","orders","prob"}.
void write_spectrum_ndjson(std::ostream& os, int kick, const MomentumLadder& ladder);

void write_scan_csv(std::ostream& os, const std::vector<ScanRecord>& records);
void write_compare_csv(std::ostream& os, const CompareResult& result);
void write_fits_csv(std::ostream& os, const Fig3Result& result);

/// Writes `text` to `path`, throwing std::runtime_error when the file cannot be written.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace ratchet
