#include "ilm/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace ilm {

std::string format_g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

double normalize_g6(double v) { return std::strtod(format_g6(v).c_str(), nullptr); }

namespace {

void append_row(std::string& out, const GenerationRecord& rec,
                double loss_divisor, bool with_timing) {
  out += std::to_string(rec.replicate);
  out += ',';
  out += std::to_string(rec.generation);
  for (double v : {rec.x_raw, rec.c_raw, rec.s_raw, rec.x, rec.c, rec.s}) {
    out += ',';
    out += format_g6(v);
  }
  out += ',';
  if (!rec.dec_epoch_loss.empty()) out += format_g6(rec.dec_epoch_loss.back());
  out += ',';
  if (!rec.enc_epoch_loss.empty()) out += format_g6(rec.enc_epoch_loss.back());
  out += ',';
  if (!rec.auto_epoch_loss.empty())
    out += format_g6(rec.auto_epoch_loss.back() / loss_divisor);
  out += ',';
  if (with_timing) out += std::to_string(static_cast<long long>(rec.ms));
  out += '\n';
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, sep)) fields.push_back(field);
  if (!line.empty() && line.back() == sep) fields.push_back("");
  return fields;
}

double parse_double(const std::string& s) {
  return s.empty() ? 0.0 : std::strtod(s.c_str(), nullptr);
}

}  // namespace

std::string records_to_csv(const std::vector<GenerationRecord>& records,
                           double loss_divisor, bool with_timing) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const GenerationRecord& rec : records)
    append_row(out, rec, loss_divisor, with_timing);
  return out;
}

void write_csv(const std::vector<GenerationRecord>& records,
               const std::string& path, double loss_divisor,
               bool with_timing) {
  write_file(path, records_to_csv(records, loss_divisor, with_timing));
}

std::string losses_to_csv(const std::vector<GenerationRecord>& records,
                          double loss_divisor) {
  std::string out = "replicate,generation,epoch,loss_dec,loss_enc,loss_auto\n";
  for (const GenerationRecord& rec : records) {
    const size_t epochs = std::max(
        {rec.dec_epoch_loss.size(), rec.enc_epoch_loss.size(),
         rec.auto_epoch_loss.size()});
    for (size_t e = 0; e < epochs; ++e) {
      out += std::to_string(rec.replicate);
      out += ',';
      out += std::to_string(rec.generation);
      out += ',';
      out += std::to_string(e + 1);
      out += ',';
      if (e < rec.dec_epoch_loss.size()) out += format_g6(rec.dec_epoch_loss[e]);
      out += ',';
      if (e < rec.enc_epoch_loss.size()) out += format_g6(rec.enc_epoch_loss[e]);
      out += ',';
      if (e < rec.auto_epoch_loss.size())
        out += format_g6(rec.auto_epoch_loss[e] / loss_divisor);
      out += '\n';
    }
  }
  return out;
}

void write_losses_csv(const std::vector<GenerationRecord>& records,
                      const std::string& path, double loss_divisor) {
  write_file(path, losses_to_csv(records, loss_divisor));
}

std::vector<GenerationRecord> read_records_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV: " + path);
  if (line != kCsvHeader)
    throw std::runtime_error("unexpected CSV header in " + path);
  std::vector<GenerationRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 12)
      throw std::runtime_error("malformed CSV row in " + path + ": " + line);
    GenerationRecord rec;
    rec.replicate = std::stoi(f[0]);
    rec.generation = std::stoi(f[1]);
    rec.x_raw = parse_double(f[2]);
    rec.c_raw = parse_double(f[3]);
    rec.s_raw = parse_double(f[4]);
    rec.x = parse_double(f[5]);
    rec.c = parse_double(f[6]);
    rec.s = parse_double(f[7]);
    if (!f[8].empty()) rec.dec_epoch_loss = {parse_double(f[8])};
    if (!f[9].empty()) rec.enc_epoch_loss = {parse_double(f[9])};
    if (!f[10].empty()) rec.auto_epoch_loss = {parse_double(f[10])};
    if (!f[11].empty()) rec.ms = parse_double(f[11]);
    records.push_back(std::move(rec));
  }
  return records;
}

void read_losses_csv(const std::string& path,
                     std::vector<GenerationRecord>& records) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV: " + path);
  if (line != "replicate,generation,epoch,loss_dec,loss_enc,loss_auto")
    throw std::runtime_error("unexpected losses header in " + path);
  std::map<std::pair<int, int>, GenerationRecord*> index;
  for (GenerationRecord& rec : records) {
    index[{rec.replicate, rec.generation}] = &rec;
    rec.dec_epoch_loss.clear();
    rec.enc_epoch_loss.clear();
    rec.auto_epoch_loss.clear();
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 6)
      throw std::runtime_error("malformed losses row in " + path + ": " + line);
    const auto it = index.find({std::stoi(f[0]), std::stoi(f[1])});
    if (it == index.end()) continue;
    if (!f[3].empty()) it->second->dec_epoch_loss.push_back(parse_double(f[3]));
    if (!f[4].empty()) it->second->enc_epoch_loss.push_back(parse_double(f[4]));
    if (!f[5].empty()) it->second->auto_epoch_loss.push_back(parse_double(f[5]));
  }
}

}  // namespace ilm
