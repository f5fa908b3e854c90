#include "ratchet/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ratchet/numfmt.hpp"

namespace ratchet {

void write_pgm(const std::filesystem::path& path, const GrayImage& image) {
  if (image.pixels.size() != static_cast<std::size_t>(image.width) * image.height)
    throw std::invalid_argument("pixel buffer does not match image size");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  os.write(reinterpret_cast<const char*>(image.pixels.data()),
           static_cast<std::streamsize>(image.pixels.size()));
  if (!os) throw std::runtime_error("short write to " + path.string());
}

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  std::string magic;
  int maxval = 0;
  GrayImage img;
  is >> magic >> img.width >> img.height >> maxval;
  if (magic != "P5" || maxval != 255 || img.width <= 0 || img.height <= 0)
    throw std::runtime_error("unsupported PGM header in " + path.string());
  is.get();
  img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
  is.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
  if (!is) throw std::runtime_error("truncated PGM " + path.string());
  return img;
}

void write_orders_csv(std::ostream& os, const std::vector<MomentumLadder>& ladders) {
  os << "kick,order,probability\n";
  for (std::size_t k = 0; k < ladders.size(); ++k) {
    const auto& l = ladders[k];
    for (std::size_t i = 0; i < l.orders.size(); ++i)
      os << k + 1 << ',' << l.orders[i] << ',' << format_double(l.prob[i]) << '\n';
  }
}

void write_stats_csv(std::ostream& os, const std::vector<StepStats>& stats,
                     const std::vector<std::pair<std::string, std::string>>& params) {
  for (const auto& [k, v] : params) os << "# " << k << '=' << v << '\n';
  os << "kick,mean_p,mean_p2,participation\n";
  for (const auto& s : stats)
    os << s.kick << ',' << format_double(s.mean_p) << ',' << format_double(s.mean_p2) << ','
       << format_double(s.participation) << '\n';
}

void write_spectrum_ndjson(std::ostream& os, int kick, const MomentumLadder& ladder) {
  nlohmann::json j;
  j["kick"] = kick;
  j["beta"] = ladder.beta;
  j["hbar"] = ladder.hbar;
  j["orders"] = ladder.orders;
  j["prob"] = ladder.prob;
  os << j.dump() << '\n';
}

void write_scan_csv(std::ostream& os, const std::vector<ScanRecord>& records) {
  os << "mode,hbar,kicks,mean_p_final,abs_mean_p_final\n";
  for (const auto& r : records)
    os << to_string(r.mode) << ',' << format_double(r.hbar) << ',' << r.kicks << ','
       << format_double(r.mean_p) << ',' << format_double(std::abs(r.mean_p)) << '\n';
}

void write_compare_csv(std::ostream& os, const CompareResult& result) {
  os << "mirror,kick,linf_vs_quantum,tv_vs_quantum,tv_vs_continuous\n";
  for (const auto& r : result.rows)
    os << r.mirror << ',' << r.kick << ',' << format_double(r.linf_vs_quantum) << ','
       << format_double(r.tv_vs_quantum) << ',' << format_double(r.tv_vs_continuous) << '\n';
}

void write_fits_csv(std::ostream& os, const Fig3Result& result) {
  os << "series,quantity,degree,first_kick,c0,c1,c2,r_squared,residual_rms\n";
  auto line = [&](const char* q, int degree, int first, const FitResult& f) {
    os << "resonant," << q << ',' << degree << ',' << first;
    for (int i = 0; i < 3; ++i)
      os << ',' << (i < static_cast<int>(f.coefficients.size()) ? format_double(f.coefficients[i]) : "0");
    os << ',' << format_double(f.r_squared) << ',' << format_double(f.residual_rms) << '\n';
  };
  line("mean_p", 1, 2, result.resonant_mean_linear);
  line("mean_p2", 2, 1, result.resonant_p2_quadratic);
  os << "# p2_ratio_offres_over_res=" << format_double(result.p2_ratio) << '\n';
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
  if (!os) throw std::runtime_error("short write to " + path.string());
}

}  // namespace ratchet
